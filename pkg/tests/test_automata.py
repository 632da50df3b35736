import random

import pytest

from treesep import (
    TOP, DeterministicTreeAutomaton, GameAutomaton, RegularTree, TreeAutomaton,
    check_regular_tree, complement_game, deterministic_member_check,
    normalize_priorities, regular_tree_member, unfold_path, validate,
)
from treesep.corpus import (
    all_a_tree, all_b_tree, alternating_tree, default_seed, empty_language,
    hand_trees, infinitely_many_b, one_b_tree, random_regular_tree,
    random_tree_automaton, safety_all_a, some_b, universal,
)


def test_fixture_automata_validate():
    for a in (safety_all_a(), some_b(), universal(), empty_language()):
        assert validate(a) == []


def test_validate_flags_undeclared_pieces():
    a = TreeAutomaton(("a",), ("q",), "q", {"q": 0},
                      frozenset({("q", "a", "q", "r")}))
    problems = validate(a)
    assert any("undeclared state 'r'" in p for p in problems)
    b = TreeAutomaton(("a",), ("q",), "q", {"q": 0},
                      frozenset({("q", "b", "q", "q")}))
    assert any("undeclared letter 'b'" in p for p in validate(b))
    c = TreeAutomaton(("a",), ("q", "r"), "q", {"q": 0},
                      frozenset({("q", "a", "r", "r")}))
    assert any("has no priority" in p for p in validate(c))


def test_validate_rejects_top_in_plain_automaton():
    a = TreeAutomaton(("a",), ("q", TOP), "q", {"q": 0, TOP: 0},
                      frozenset({("q", "a", TOP, TOP), (TOP, "a", TOP, TOP)}))
    assert any("reserved" in p for p in validate(a))


def test_game_slot_shape_rules():
    # disjunctive slot must be the exact {left-to-top, right-to-top} pair
    bad = GameAutomaton(("a",), ("q", TOP), "q", {"q": 1, TOP: 0},
                        frozenset({("q", "a", "q", "q"), ("q", "a", "q", TOP),
                                   (TOP, "a", TOP, TOP)}))
    assert any("form no legal slot" in p for p in validate(bad))
    conj_to_top = GameAutomaton(("a",), ("q", TOP), "q", {"q": 1, TOP: 0},
                                frozenset({("q", "a", "q", TOP),
                                           (TOP, "a", TOP, TOP)}))
    assert any("targets top" in p for p in validate(conj_to_top))
    odd_top = GameAutomaton(("a",), ("q", TOP), "q", {"q": 0, TOP: 1},
                            frozenset({("q", "a", "q", "q"), (TOP, "a", TOP, TOP)}))
    assert any("priority must be even" in p for p in validate(odd_top))


def test_deterministic_subclass_forbids_disjunction():
    a = DeterministicTreeAutomaton(
        ("a",), ("q", TOP), "q", {"q": 1, TOP: 0},
        frozenset({("q", "a", "q", TOP), ("q", "a", TOP, "q"),
                   (TOP, "a", TOP, TOP)}))
    assert any("disjunctive slot" in p for p in validate(a))


def test_membership_hand_matrix():
    trees = {"all_a": all_a_tree(), "all_b": all_b_tree(),
             "one_b": one_b_tree(), "alt": alternating_tree()}
    expected = {
        "safety": (safety_all_a(), {"all_a": True, "all_b": False,
                                    "one_b": False, "alt": False}),
        "some_b": (some_b(), {"all_a": False, "all_b": True,
                              "one_b": True, "alt": True}),
        "universal": (universal(), {k: True for k in trees}),
        "empty": (empty_language(), {k: False for k in trees}),
    }
    for name, (aut, want) in expected.items():
        for tname, tree in trees.items():
            assert regular_tree_member(aut, tree) == want[tname], (name, tname)


def test_membership_with_run_certificate():
    ok, run = regular_tree_member(some_b(), one_b_tree(), want_run=True)
    assert ok
    tree = one_b_tree()
    aut = some_b()
    visited = set(run.assignment)
    assert (tree.root, aut.initial) in visited
    # every visited pair extends through some transition staying inside the run
    for node, q in visited:
        good = False
        for t in aut.transitions_from(q, tree.letter(node)):
            lpair = (tree.child(node, "L"), t[2])
            rpair = (tree.child(node, "R"), t[3])
            if lpair in visited and rpair in visited:
                good = True
        assert good, (node, q)
    rejected, no_run = regular_tree_member(safety_all_a(), all_b_tree(), want_run=True)
    assert not rejected and no_run is None


def test_deterministic_member_check_agrees():
    rng = random.Random(default_seed())
    dets = [safety_all_a(), infinitely_many_b()]
    trees = hand_trees() + [random_regular_tree(rng, n_nodes=3) for _ in range(25)]
    for aut in dets:
        for tree in trees:
            assert deterministic_member_check(aut, tree) == regular_tree_member(aut, tree)


def test_complement_game_membership_dichotomy():
    rng = random.Random(default_seed() + 1)
    for aut in (safety_all_a(), infinitely_many_b()):
        comp = complement_game(aut)
        assert validate(comp) == []
        for tree in hand_trees() + [random_regular_tree(rng, n_nodes=3) for _ in range(15)]:
            assert regular_tree_member(aut, tree) != regular_tree_member(comp, tree)


def test_complement_game_is_involutive_on_language():
    aut = safety_all_a()
    twice = complement_game(complement_game(aut))
    for tree in hand_trees():
        assert regular_tree_member(twice, tree) == regular_tree_member(aut, tree)


def test_normalize_priorities_shifts_by_even_offset():
    a = TreeAutomaton(("a",), ("q", "r"), "q", {"q": 4, "r": 7},
                      frozenset({("q", "a", "r", "r"), ("r", "a", "q", "q")}))
    n = normalize_priorities(a)
    assert n.priority == {"q": 0, "r": 3}
    b = TreeAutomaton(("a",), ("q",), "q", {"q": 3},
                      frozenset({("q", "a", "q", "q")}))
    assert normalize_priorities(b).priority == {"q": 1}


def test_normalize_keeps_membership():
    rng = random.Random(default_seed() + 2)
    for _ in range(10):
        aut = random_tree_automaton(rng, max_priority=5)
        shifted = TreeAutomaton(aut.alphabet, aut.states, aut.initial,
                                {q: aut.priority[q] + 4 for q in aut.states},
                                aut.transitions)
        norm = normalize_priorities(shifted)
        for tree in [random_regular_tree(rng, n_nodes=2) for _ in range(3)]:
            assert regular_tree_member(norm, tree) == regular_tree_member(aut, tree)


def test_check_regular_tree_diagnostics():
    t = RegularTree(("n0",), "n0", {"n0": "a"}, {("n0", "L"): "n0"})
    problems = check_regular_tree(t)
    assert any("missing R successor" in p for p in problems)
    t2 = RegularTree(("n0",), "n0", {"n0": "c"}, {("n0", "L"): "n0", ("n0", "R"): "n0"})
    assert any("outside the alphabet" in p for p in check_regular_tree(t2, ("a", "b")))
    assert check_regular_tree(all_a_tree(), ("a", "b")) == []


def test_unfold_path_reads_labels_and_directions():
    pw = unfold_path(alternating_tree(), ["L", "L", "R"])
    assert pw.steps[0][1] == "L"
    labels = [x for x, _ in pw.steps]
    assert labels == ["a", "b", "a"]
    with pytest.raises(ValueError):
        unfold_path(all_a_tree(), ["L", "X"])
