"""Separability of tree (and word) automaton pairs by deterministic or game
automata, with separator synthesis.

Each decision builds a one-position round arena, compiles the relevant
winning condition into a deterministic word automaton over round outcomes,
solves the resulting parity game, and folds the winner's strategy machine
into an explicit separator when one exists.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .automata import (DIRECTIONS, L, R, TOP, DeterministicTreeAutomaton,
                       GameAutomaton, TreeAutomaton, validate)
from .analysis import productive_states, trim
from .games import (EVEN, ODD, Arena, Decision, StrategyMachine,
                    arena_to_graph_game, extract_strategy_machine,
                    product_with_condition, solve_parity)
from .words import (WordAutomaton, buchi_product, check_word_automaton,
                    compress_priorities, dpa_complement, nba_to_dpa, npa_empty,
                    npa_to_dpa, npa_to_nba, trim_nba)

WORD_DET_C = "word-det-c"
TREE_DET_C = "det-c"
TREE_DET_C_UNIVERSAL = "det-c-universal"
TREE_DET = "det"
TREE_GAME = "game"
TREE_GAME_C = "game-c"

VARIANT_KINDS = (WORD_DET_C, TREE_DET_C, TREE_DET_C_UNIVERSAL, TREE_DET,
                 TREE_GAME, TREE_GAME_C)
_C_KINDS = (WORD_DET_C, TREE_DET_C, TREE_DET_C_UNIVERSAL, TREE_GAME_C)

MODE_OR = "or"
MODE_AND = "and"

SEPARATOR_PLAYER = 0
INPUT_PLAYER = 1


@dataclass(frozen=True, eq=True)
class Variant:
    """Separability flavour plus the allowed separator priorities, when fixed."""

    kind: str
    priorities: Optional[FrozenSet[int]] = None

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise ValueError("unknown variant kind %r" % (self.kind,))
        if self.kind in _C_KINDS:
            if not self.priorities:
                raise ValueError("variant %s needs a nonempty priority set" % self.kind)
            object.__setattr__(self, "priorities", frozenset(int(c) for c in self.priorities))
            if any(c < 0 for c in self.priorities):
                raise ValueError("priorities must be naturals")
        elif self.priorities is not None:
            raise ValueError("variant %s does not take a priority set" % self.kind)

    def sorted_priorities(self) -> Tuple[int, ...]:
        return tuple(sorted(self.priorities)) if self.priorities else ()


@dataclass(frozen=True, eq=True)
class Selector:
    """Direction choice for every transition in a fixed per-letter domain."""

    domain: Tuple[tuple, ...]
    directions: Tuple[str, ...]

    def __getitem__(self, transition) -> str:
        return self.directions[self.domain.index(transition)]


def _selectors(domain: Sequence[tuple]) -> List[Selector]:
    dom = tuple(domain)
    return [Selector(dom, bits)
            for bits in itertools.product(DIRECTIONS, repeat=len(dom))]


@dataclass(eq=False)
class GeneralisedGameAutomaton:
    """Game automaton shape whose acceptance is delegated to a deterministic
    word automaton over (letter, direction) pairs instead of state priorities."""

    alphabet: tuple
    states: tuple
    initial: object
    transitions: frozenset
    condition: WordAutomaton
    top: object = TOP


@dataclass(eq=False)
class SeparabilityResult:
    separable: bool
    separator: Optional[object]          # automaton, shape depends on variant
    strategy: Optional[StrategyMachine]  # winner's machine; None on shortcuts
    stats: Dict[str, object] = field(default_factory=dict)


class CertificationError(RuntimeError):
    """Raised when a synthesized separator fails independent verification."""


# ---------------------------------------------------------------------------
# round structure


def _round_decisions(kind: str) -> Tuple[Decision, ...]:
    if kind == WORD_DET_C:
        return (Decision(SEPARATOR_PLAYER, "priority"),
                Decision(INPUT_PLAYER, "letter"))
    if kind == TREE_DET_C:
        return (Decision(SEPARATOR_PLAYER, "priority"),
                Decision(INPUT_PLAYER, "letter"),
                Decision(SEPARATOR_PLAYER, "selector"),
                Decision(INPUT_PLAYER, "direction"))
    if kind == TREE_DET_C_UNIVERSAL:
        return (Decision(SEPARATOR_PLAYER, "priority"),
                Decision(INPUT_PLAYER, "letter"),
                Decision(INPUT_PLAYER, "direction"))
    if kind == TREE_DET:
        return (Decision(INPUT_PLAYER, "letter"),
                Decision(SEPARATOR_PLAYER, "selector"),
                Decision(INPUT_PLAYER, "direction"))
    if kind == TREE_GAME:
        return (Decision(INPUT_PLAYER, "letter"),
                Decision(SEPARATOR_PLAYER, "mode"),
                Decision(SEPARATOR_PLAYER, "selector"),
                Decision(INPUT_PLAYER, "direction"))
    if kind == TREE_GAME_C:
        return (Decision(SEPARATOR_PLAYER, "priority"),
                Decision(INPUT_PLAYER, "letter"),
                Decision(SEPARATOR_PLAYER, "mode"),
                Decision(SEPARATOR_PLAYER, "selector"),
                Decision(INPUT_PLAYER, "direction"))
    raise ValueError(kind)


def build_sep_arena(variant: Variant, a, b) -> Arena:
    """One-position arena; all game structure lives in the win condition."""
    if tuple(a.alphabet) != tuple(b.alphabet):
        raise ValueError("separability needs a shared alphabet")
    kind = variant.kind
    cs = variant.sorted_priorities()
    decisions = _round_decisions(kind)
    schedule = tuple(d.name for d in decisions)

    def options(name: str, chosen: tuple):
        here = dict(zip(schedule, chosen))
        if name == "priority":
            return cs
        if name == "letter":
            return a.alphabet
        if name == "mode":
            return (MODE_OR, MODE_AND)
        if name == "selector":
            letter = here["letter"]
            if kind in (TREE_DET, TREE_DET_C):
                return _selectors(b.letter_transitions(letter))
            mode = here["mode"]
            side = a if mode == MODE_OR else b
            return _selectors(side.letter_transitions(letter))
        if name == "direction":
            return DIRECTIONS
        raise ValueError(name)

    def moves(pos, chosen):
        return options(schedule[len(chosen)], chosen)

    def update(pos, outcome):
        return pos

    return Arena("o", decisions, moves, update)


def _round_alphabet(variant: Variant, a, b) -> List[tuple]:
    """Every outcome tuple a round can produce, in canonical order."""
    arena = build_sep_arena(variant, a, b)
    out: List[tuple] = []

    def rec(prefix: tuple):
        if len(prefix) == len(arena.decisions):
            out.append(prefix)
            return
        for opt in arena.moves("o", prefix):
            rec(prefix + (opt,))

    rec(())
    return out


def _fields(kind: str) -> Tuple[str, ...]:
    return tuple(d.name for d in _round_decisions(kind))


def _field_index(kind: str, name: str) -> int:
    return _fields(kind).index(name)


# ---------------------------------------------------------------------------
# winning-condition automata


def _tree_candidates(aut, q, outcome, kind: str, side: str):
    """Target states of runs the given side can exhibit on one round outcome."""
    names = _fields(kind)
    row = dict(zip(names, outcome))
    letter = row["letter"]
    d = row["direction"]
    i = 2 if d == L else 3
    mode = row.get("mode")
    sel = row.get("selector")
    targets = []
    for t in aut.transitions_from(q, letter):
        if side == "A":
            if kind in (TREE_GAME, TREE_GAME_C) and mode == MODE_OR and sel[t] != d:
                continue
        else:
            if kind in (TREE_DET, TREE_DET_C) and sel[t] != d:
                continue
            if kind in (TREE_GAME, TREE_GAME_C) and mode == MODE_AND and sel[t] != d:
                continue
        targets.append(t[i])
    return targets


def _word_candidates(aut, q, outcome):
    return list(aut.targets(q, outcome[1]))


def _runs_npa(aut, alphabet: Sequence[tuple], candidates) -> WordAutomaton:
    """Nondeterministic automaton guessing a conform run of `aut` along the
    play; same states and priorities as the automaton itself."""
    transitions = set()
    for q in aut.states:
        for letter in alphabet:
            for q2 in candidates(aut, q, letter):
                transitions.add((q, letter, q2))
    priority = {q: aut.priority[q] for q in aut.states}
    return WordAutomaton(tuple(alphabet), tuple(aut.states), aut.initial,
                         priority, frozenset(transitions))


def _flag_step(flag: int, hit1: bool, hit2: bool) -> int:
    if flag == 0:
        if hit1 and hit2:
            return 2
        return 1 if hit1 else 0
    return 2 if hit2 else 1


def _violation_npa(aut, alphabet: Sequence[tuple], candidates,
                   stream_values: Sequence[int], stream_parity: int,
                   tag: str) -> WordAutomaton:
    """Buchi automaton for: some conform run of `aut` is accepting AND the
    played priority stream has maximal infinite value of the given parity.

    Guesses an even cap for the run's priorities and a cap of the requested
    parity for the priority stream, then checks both caps recur.
    """
    run_caps = sorted({aut.priority[q] for q in aut.states if aut.priority[q] % 2 == 0})
    stream_caps = sorted({v for v in stream_values if v % 2 == stream_parity})
    states: Set[tuple] = set()
    transitions: Set[tuple] = set()
    initial = (tag, "s", aut.initial)
    states.add(initial)

    def jump_targets(q2, c):
        for e in run_caps:
            if aut.priority[q2] > e:
                continue
            for v in stream_caps:
                if c > v:
                    continue
                yield (tag, "j", q2, e, v,
                       _flag_step(0, aut.priority[q2] == e, c == v))

    for q in aut.states:
        src = (tag, "s", q)
        states.add(src)
        for letter in alphabet:
            c = letter[0]
            for q2 in candidates(aut, q, letter):
                tgt = (tag, "s", q2)
                states.add(tgt)
                transitions.add((src, letter, tgt))
                for jt in jump_targets(q2, c):
                    states.add(jt)
                    transitions.add((src, letter, jt))
    frontier = [s for s in states if s[1] == "j"]
    seen = set(frontier)
    while frontier:
        st = frontier.pop()
        _, _, q, e, v, g = st
        for letter in alphabet:
            c = letter[0]
            if c > v:
                continue
            for q2 in candidates(aut, q, letter):
                if aut.priority[q2] > e:
                    continue
                g2 = _flag_step(0 if g == 2 else g, aut.priority[q2] == e, c == v)
                tgt = (tag, "j", q2, e, v, g2)
                transitions.add((st, letter, tgt))
                if tgt not in seen:
                    seen.add(tgt)
                    states.add(tgt)
                    frontier.append(tgt)
    priority = {s: (2 if s[1] == "j" and s[5] == 2 else 1) for s in states}
    order = sorted(states, key=repr)
    return WordAutomaton(tuple(alphabet), tuple(order), initial, priority,
                         frozenset(transitions))


def _union_npa(n1: WordAutomaton, n2: WordAutomaton) -> WordAutomaton:
    assert tuple(n1.alphabet) == tuple(n2.alphabet)
    fresh = ("either",)
    states = [fresh] + list(n1.states) + list(n2.states)
    priority = {fresh: 1}
    priority.update(n1.priority)
    priority.update(n2.priority)
    transitions = set(n1.transitions) | set(n2.transitions)
    for (q, letter, q2) in list(n1.transitions):
        if q == n1.initial:
            transitions.add((fresh, letter, q2))
    for (q, letter, q2) in list(n2.transitions):
        if q == n2.initial:
            transitions.add((fresh, letter, q2))
    return WordAutomaton(n1.alphabet, tuple(states), fresh, priority,
                         frozenset(transitions))


def build_win_automaton(variant: Variant, a, b) -> WordAutomaton:
    """Deterministic complete condition over round outcomes.

    For the unrestricted variants this recognizes Input's winning plays (both
    sides can exhibit accepting conform runs). For the priority-constrained
    variants it recognizes Separator's winning plays, built by determinizing
    the union of the two violation languages and complementing.
    """
    kind = variant.kind
    alphabet = _round_alphabet(variant, a, b)
    if kind in (TREE_DET, TREE_GAME):
        wa = _runs_npa(a, alphabet, lambda aut, q, o: _tree_candidates(aut, q, o, kind, "A"))
        wb = _runs_npa(b, alphabet, lambda aut, q, o: _tree_candidates(aut, q, o, kind, "B"))
        product = buchi_product(npa_to_nba(wa), npa_to_nba(wb))
        return nba_to_dpa(trim_nba(product))
    cs = variant.sorted_priorities()
    if kind == WORD_DET_C:
        cand_a = lambda aut, q, o: _word_candidates(aut, q, o)
        cand_b = cand_a
    else:
        cand_a = lambda aut, q, o: _tree_candidates(aut, q, o, kind, "A")
        cand_b = lambda aut, q, o: _tree_candidates(aut, q, o, kind, "B")
    # containment violated: A accepts while the priority stream rejects
    not_a = _violation_npa(a, alphabet, cand_a, cs, 1, "A")
    # disjointness violated: B accepts while the priority stream accepts
    not_b = _violation_npa(b, alphabet, cand_b, cs, 0, "B")
    union = trim_nba(_union_npa(not_a, not_b))
    return compress_priorities(dpa_complement(npa_to_dpa(union)))


# ---------------------------------------------------------------------------
# separator shells


def _game_shell(cls, alphabet, priority_value: int):
    """Single-state separator accepting all trees (even priority) or none."""
    s = "s0"
    transitions = set()
    for x in alphabet:
        transitions.add((s, x, s, s))
        transitions.add((TOP, x, TOP, TOP))
    return cls(tuple(alphabet), (s, TOP), s,
               {s: priority_value, TOP: 0}, frozenset(transitions))


def _word_shell(alphabet, priority_value: int) -> WordAutomaton:
    s = "s0"
    return WordAutomaton(tuple(alphabet), (s,), s, {s: priority_value},
                         frozenset((s, x, s) for x in alphabet))


def _shortcut(variant: Variant, a, b, empty_a: bool, empty_b: bool):
    """Degenerate-language fast paths; None when no shortcut applies."""
    if not empty_a and not empty_b:
        return None
    kind = variant.kind
    cs = variant.sorted_priorities()
    word = kind == WORD_DET_C

    def make(priority_value):
        if word:
            return _word_shell(a.alphabet, priority_value)
        cls = GameAutomaton if kind in (TREE_GAME, TREE_GAME_C) else DeterministicTreeAutomaton
        return _game_shell(cls, a.alphabet, priority_value)

    if variant.priorities is None:
        value = 1 if empty_a else 0
        return SeparabilityResult(True, make(value), None, {"shortcut": True})
    odds = [c for c in cs if c % 2 == 1]
    evens = [c for c in cs if c % 2 == 0]
    if empty_a:
        if odds:
            return SeparabilityResult(True, make(odds[0]), None, {"shortcut": True})
        if empty_b:
            return SeparabilityResult(True, make(evens[0]), None, {"shortcut": True})
        return SeparabilityResult(False, None, None, {"shortcut": True})
    # empty_b only
    if evens:
        return SeparabilityResult(True, make(evens[0]), None, {"shortcut": True})
    return SeparabilityResult(False, None, None, {"shortcut": True})


# ---------------------------------------------------------------------------
# decision


def decide_separability(variant: Variant, a, b, verify: bool = False) -> SeparabilityResult:
    """Whether some separator of the variant's shape contains L(a) and avoids
    L(b); synthesizes and optionally certifies the separator when one exists."""
    stats: Dict[str, object] = {"variant": variant.kind}
    t0 = time.time()
    if variant.kind == WORD_DET_C:
        problems = check_word_automaton(a) + check_word_automaton(b)
        if problems:
            raise ValueError("; ".join(problems))
        empty_a, _ = npa_empty(a)
        empty_b, _ = npa_empty(b)
        at, bt = a, b
    else:
        problems = validate(a) + validate(b)
        if problems:
            raise ValueError("; ".join(problems))
        at, bt = trim(a), trim(b)
        empty_a = a.initial not in productive_states(at)
        empty_b = b.initial not in productive_states(bt)
    short = _shortcut(variant, at, bt, empty_a, empty_b)
    if short is not None:
        short.stats.update(stats)
        if short.separable and verify:
            _certify(variant, a, b, short.separator)
        return short

    arena = build_sep_arena(variant, at, bt)
    graph = arena_to_graph_game(arena)
    cond = build_win_automaton(variant, at, bt)
    owner = INPUT_PLAYER if variant.kind in (TREE_DET, TREE_GAME) else SEPARATOR_PLAYER
    product = product_with_condition(graph, cond, owner, lambda o: o)
    sol = solve_parity(product.game)
    sep_side = EVEN if owner == SEPARATOR_PLAYER else ODD
    separable = sol.win[product.initial] == sep_side
    stats.update({
        "arena_vertices": len(graph.vertices),
        "condition_states": len(cond.states),
        "condition_priorities": list(cond.priorities_used()),
        "game_vertices": len(product.game),
        "solve_seconds": round(time.time() - t0, 6),
    })
    if not separable:
        refutation = extract_strategy_machine(product, sol, arena, INPUT_PLAYER)
        return SeparabilityResult(False, None, refutation, stats)
    machine = extract_strategy_machine(product, sol, arena, SEPARATOR_PLAYER)
    separator = synthesize_separator(variant, machine, at, bt, stats=stats)
    stats["separator_states"] = len(separator.states)
    stats["memory_states"] = len(machine.memory)
    if verify:
        _certify(variant, a, b, separator)
    return SeparabilityResult(True, separator, machine, stats)


def _certify(variant: Variant, a, b, separator):
    from .verify import verify_separator
    report = verify_separator(a, b, separator, variant)
    if not report.passed:
        raise CertificationError("synthesized separator failed verification: %s"
                                 % report.summary())


def decide_universally_rejecting(a, b, priorities) -> bool:
    """Separability by a deterministic separator whose runs reject every
    branch of every tree of the second language."""
    v = Variant(TREE_DET_C_UNIVERSAL, frozenset(priorities))
    return decide_separability(v, a, b).separable


# ---------------------------------------------------------------------------
# synthesis


def synthesize_separator(variant: Variant, machine: StrategyMachine, a, b, stats=None):
    """Fold a winning Separator machine into an explicit separator."""
    if machine.player != SEPARATOR_PLAYER:
        raise ValueError("synthesis needs the Separator's machine")
    kind = variant.kind
    if kind == TREE_DET:
        return path_automaton(a, stats=stats)
    if kind == WORD_DET_C:
        return _fold_word_separator(machine, a)
    if kind in (TREE_DET_C, TREE_DET_C_UNIVERSAL):
        return _fold_det_separator(kind, machine, a)
    if kind == TREE_GAME_C:
        return _fold_game_c_separator(machine, a)
    if kind == TREE_GAME:
        return _fold_game_separator(machine, a, stats=stats)
    raise ValueError(kind)


def _memory_names(machine: StrategyMachine) -> Dict[object, str]:
    return {m: "m%d" % i for i, m in enumerate(machine.memory)}


def _fold_word_separator(machine: StrategyMachine, a) -> WordAutomaton:
    names = _memory_names(machine)
    sigma = tuple(a.alphabet)
    transitions = set()
    priority = {}
    for mem in machine.memory:
        c = machine.decide("o", mem, ())
        priority[names[mem]] = c
        for x in sigma:
            _, mem2 = machine.advance("o", mem, (c, x))
            transitions.add((names[mem], x, names[mem2]))
    return WordAutomaton(sigma, tuple(names[m] for m in machine.memory),
                         names[machine.initial_memory], priority,
                         frozenset(transitions))


def _fold_det_separator(kind: str, machine: StrategyMachine, a) -> DeterministicTreeAutomaton:
    names = _memory_names(machine)
    transitions = set()
    priority = {}
    for mem in machine.memory:
        c = machine.decide("o", mem, ())
        priority[names[mem]] = c
        for x in a.alphabet:
            if kind == TREE_DET_C:
                f = machine.decide("o", mem, (c, x))
                outcome = lambda d: (c, x, f, d)
            else:
                outcome = lambda d: (c, x, d)
            _, mem_l = machine.advance("o", mem, outcome(L))
            _, mem_r = machine.advance("o", mem, outcome(R))
            transitions.add((names[mem], x, names[mem_l], names[mem_r]))
    for x in a.alphabet:
        transitions.add((TOP, x, TOP, TOP))
    priority[TOP] = 0
    states = tuple(names[m] for m in machine.memory) + (TOP,)
    return DeterministicTreeAutomaton(a.alphabet, states, names[machine.initial_memory],
                                      priority, frozenset(transitions))


def _fold_game_c_separator(machine: StrategyMachine, a) -> GameAutomaton:
    names = _memory_names(machine)
    transitions = set()
    priority = {}
    for mem in machine.memory:
        c = machine.decide("o", mem, ())
        priority[names[mem]] = c
        for x in a.alphabet:
            mode = machine.decide("o", mem, (c, x))
            f = machine.decide("o", mem, (c, x, mode))
            _, mem_l = machine.advance("o", mem, (c, x, mode, f, L))
            _, mem_r = machine.advance("o", mem, (c, x, mode, f, R))
            if mode == MODE_AND:
                transitions.add((names[mem], x, names[mem_l], names[mem_r]))
            else:
                transitions.add((names[mem], x, names[mem_l], TOP))
                transitions.add((names[mem], x, TOP, names[mem_r]))
    for x in a.alphabet:
        transitions.add((TOP, x, TOP, TOP))
    priority[TOP] = 0
    states = tuple(names[m] for m in machine.memory) + (TOP,)
    return GameAutomaton(a.alphabet, states, names[machine.initial_memory],
                         priority, frozenset(transitions))


def path_automaton(a: TreeAutomaton, stats=None) -> DeterministicTreeAutomaton:
    """Deterministic automaton for the path closure of the language: trees all
    of whose branches are branches of accepted trees."""
    a = trim(a)  # off-branch children must root accepted subtrees
    sigma_d = tuple((x, d) for x in a.alphabet for d in DIRECTIONS)
    transitions = set()
    for q in a.states:
        for x in a.alphabet:
            for t in a.transitions_from(q, x):
                transitions.add((q, (x, L), t[2]))
                transitions.add((q, (x, R), t[3]))
    word_npa = WordAutomaton(sigma_d, a.states, a.initial,
                             {q: a.priority[q] for q in a.states},
                             frozenset(transitions))
    dpa = npa_to_dpa(word_npa)
    if stats is not None:
        stats["path_condition_states"] = len(dpa.states)
    return _fold_tree_from_word(dpa, a.alphabet)


def _fold_tree_from_word(dpa: WordAutomaton, alphabet) -> DeterministicTreeAutomaton:
    transitions = set()
    priority = dict(dpa.priority)
    for q in dpa.states:
        for x in alphabet:
            transitions.add((q, x, dpa.step(q, (x, L)), dpa.step(q, (x, R))))
    for x in alphabet:
        transitions.add((TOP, x, TOP, TOP))
    priority[TOP] = 0
    return DeterministicTreeAutomaton(tuple(alphabet), tuple(dpa.states) + (TOP,),
                                      dpa.initial, priority, frozenset(transitions))


def _fold_game_separator(machine: StrategyMachine, a, stats=None) -> GameAutomaton:
    """Game separator for the unconstrained variant: mode and selector come
    from the machine, acceptance from a determinized path condition."""
    names = _memory_names(machine)
    tabled: Dict[tuple, tuple] = {}
    for mem in machine.memory:
        for x in a.alphabet:
            mode = machine.decide("o", mem, (x,))
            f = machine.decide("o", mem, (x, mode))
            _, mem_l = machine.advance("o", mem, (x, mode, f, L))
            _, mem_r = machine.advance("o", mem, (x, mode, f, R))
            tabled[(mem, x)] = (mode, f, mem_l, mem_r)
    # word automaton over (letter, direction): paths along which the left
    # language can exhibit an accepting run that respects the machine's play
    sigma_d = tuple((x, d) for x in a.alphabet for d in DIRECTIONS)
    transitions = set()
    states = set()
    for mem in machine.memory:
        for p in a.states:
            states.add((p, mem))
    for (mem, x), (mode, f, mem_l, mem_r) in tabled.items():
        for p in a.states:
            for t in a.transitions_from(p, x):
                for d, mem2 in ((L, mem_l), (R, mem_r)):
                    if mode == MODE_OR and f[t] != d:
                        continue
                    i = 2 if d == L else 3
                    transitions.add(((p, mem), (x, d), (t[i], mem2)))
    prio = {(p, mem): a.priority[p] for (p, mem) in states}
    d0 = WordAutomaton(sigma_d, tuple(sorted(states, key=repr)),
                       (a.initial, machine.initial_memory), prio,
                       frozenset(transitions))
    cond = npa_to_dpa(d0)
    if stats is not None:
        stats["path_condition_states"] = len(cond.states)
    base_transitions = set()
    for (mem, x), (mode, f, mem_l, mem_r) in tabled.items():
        if mode == MODE_AND:
            base_transitions.add((names[mem], x, names[mem_l], names[mem_r]))
        else:
            base_transitions.add((names[mem], x, names[mem_l], TOP))
            base_transitions.add((names[mem], x, TOP, names[mem_r]))
    for x in a.alphabet:
        base_transitions.add((TOP, x, TOP, TOP))
    gen = GeneralisedGameAutomaton(a.alphabet,
                                   tuple(names[m] for m in machine.memory) + (TOP,),
                                   names[machine.initial_memory],
                                   frozenset(base_transitions), cond)
    return generalised_to_game(gen)


def generalised_to_game(g: GeneralisedGameAutomaton) -> GameAutomaton:
    """Replace the word condition by a product with its deterministic
    automaton; priorities then live on the product states."""
    cond = g.condition
    if not cond.is_deterministic() or not cond.is_complete():
        raise ValueError("generalised condition must be deterministic and complete")
    slots: Dict[tuple, list] = {}
    for t in g.transitions:
        if t[0] != g.top:
            slots.setdefault((t[0], t[1]), []).append(t)
    states = set()
    transitions = set()
    priority = {}
    initial = (g.initial, cond.initial)
    frontier = [initial]
    states.add(initial)
    while frontier:
        s, w = frontier.pop()
        priority[(s, w)] = cond.priority[w]
        for x in g.alphabet:
            for t in sorted(slots.get((s, x), ()), key=repr):
                wl = cond.step(w, (x, L))
                wr = cond.step(w, (x, R))
                left = g.top if t[2] == g.top else (t[2], wl)
                right = g.top if t[3] == g.top else (t[3], wr)
                transitions.add(((s, w), x, left, right))
                for child in (left, right):
                    if child != g.top and child not in states:
                        states.add(child)
                        frontier.append(child)
    name = {st: "g%d" % i for i, st in enumerate(sorted(states, key=repr))}
    name[g.top] = TOP
    out_states = tuple(name[st] for st in sorted(states, key=repr)) + (TOP,)
    out_priority = {name[st]: priority[st] for st in states}
    out_priority[TOP] = _even_floor(priority.values())
    out_transitions = set()
    for (src, x, lft, rgt) in transitions:
        out_transitions.add((name[src], x, name[lft], name[rgt]))
    for x in g.alphabet:
        out_transitions.add((TOP, x, TOP, TOP))
    return GameAutomaton(g.alphabet, out_states, name[initial], out_priority,
                         frozenset(out_transitions))


def _even_floor(values) -> int:
    vals = list(values)
    evens = [v for v in vals if v % 2 == 0]
    return min(evens) if evens else 0


def generalised_member(g: GeneralisedGameAutomaton, tree) -> bool:
    """Direct acceptance check of a generalised game automaton on a regular
    tree, used as an oracle for generalised_to_game."""
    from .analysis import _GameBuilder

    cond = g.condition
    slots: Dict[tuple, list] = {}
    for t in g.transitions:
        if t[0] != g.top:
            slots.setdefault((t[0], t[1]), []).append(t)
    b = _GameBuilder()
    neutral = min(cond.priority.values())
    win, _ = b.add(("win",), ODD, _even_floor(cond.priority.values()))
    b.edge(win, win)
    dead, _ = b.add(("dead",), EVEN, 1)
    b.edge(dead, dead)
    root, _ = b.add(("at", tree.root, g.initial, cond.initial), EVEN,
                    cond.priority[cond.initial])
    frontier = [root]
    while frontier:
        v = frontier.pop()
        key = b.keys[v]
        if key[0] == "at":
            _, node, s, w = key
            options = sorted(slots.get((s, tree.letter(node)), ()), key=repr)
            if not options:
                b.edge(v, dead)
            for t in options:
                u, fresh = b.add(("pick", node, t, w), ODD, neutral)
                b.edge(v, u)
                if fresh:
                    frontier.append(u)
        else:
            _, node, t, w = key
            for d, tgt in ((L, t[2]), (R, t[3])):
                child = tree.child(node, d)
                if tgt == g.top:
                    b.edge(v, win)
                    continue
                w2 = cond.step(w, (t[1], d))
                u, fresh = b.add(("at", child, tgt, w2), EVEN, cond.priority[w2])
                b.edge(v, u)
                if fresh:
                    frontier.append(u)
    sol = solve_parity(b.game())
    return sol.win[root] == EVEN
