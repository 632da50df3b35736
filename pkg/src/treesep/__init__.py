"""Separability of parity tree automaton languages by deterministic or game
automata: decision, separator synthesis, and independent certification."""

from .automata import (DIRECTIONS, L, R, TOP, DeterministicTreeAutomaton,
                       GameAutomaton, PathWord, RegularTree, TreeAutomaton,
                       check_regular_tree, complement_game, normalize_priorities,
                       unfold_path, validate)
from .words import (Lasso, WordAutomaton, all_lassos, buchi_product,
                    check_word_automaton, compress_priorities, conjunction_dpa,
                    dpa_complement, lasso_member, nba_to_dpa, npa_empty,
                    npa_to_dpa, npa_to_nba, priority_tracker, trim_nba,
                    word_intersection_empty)
from .games import (EVEN, ODD, Arena, Decision, GraphGame, ParityGame,
                    ParitySolution, ProductGame, StrategyMachine,
                    arena_to_graph_game, brute_force_solve_parity,
                    extract_strategy_machine, parity_game_from_pgsolver,
                    parity_game_to_pgsolver, product_with_condition,
                    solve_parity)
from .analysis import (DisjointResult, Pathfinder, PathfinderSearchError,
                       RunAssignment, decide_disjoint, deterministic_member_check,
                       disjointness_arena, emptiness_witness, extract_pathfinder,
                       pair_parity_condition, productive_states,
                       regular_tree_member, trim)
from .separability import (MODE_AND, MODE_OR, TREE_DET, TREE_DET_C,
                           TREE_DET_C_UNIVERSAL, TREE_GAME, TREE_GAME_C,
                           VARIANT_KINDS, WORD_DET_C, CertificationError,
                           GeneralisedGameAutomaton, SeparabilityResult,
                           Selector, Variant, build_sep_arena,
                           build_win_automaton, decide_separability,
                           decide_universally_rejecting, generalised_member,
                           generalised_to_game, path_automaton,
                           synthesize_separator)
from .verify import (CrossCheckReport, VerificationReport, counterexample,
                     cross_check_det, verify_separator)
from .formats import (REPORT_SCHEMA, ParseError, build_report, parse_automaton,
                      serialize_automaton, serialize_lasso)

__version__ = "0.1.0"
