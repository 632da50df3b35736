"""Tree automaton analysis: membership, productivity, disjointness, pathfinders."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .automata import (DIRECTIONS, L, R, GameAutomaton, RegularTree, TreeAutomaton,
                       validate, check_regular_tree)
from .games import (EVEN, ODD, Arena, Decision, ParityGame, arena_to_graph_game,
                    extract_strategy_machine, product_with_condition, solve_parity)
from .words import WordAutomaton, conjunction_dpa, priority_tracker, _sccs


@dataclass(frozen=True, eq=True)
class RunAssignment:
    """Node-wise state annotation of a regular tree: a memoryless run."""

    assignment: Mapping[object, object]


class _GameBuilder:
    """Incremental parity game construction over hashable vertex keys."""

    def __init__(self):
        self.keys: List = []
        self.owner: List[int] = []
        self.priority: List[int] = []
        self.succ: List[List[int]] = []
        self.index: Dict = {}

    def add(self, key, owner: int, priority: int) -> Tuple[int, bool]:
        if key in self.index:
            return self.index[key], False
        v = len(self.keys)
        self.index[key] = v
        self.keys.append(key)
        self.owner.append(owner)
        self.priority.append(priority)
        self.succ.append([])
        return v, True

    def edge(self, v: int, w: int):
        self.succ[v].append(w)

    def game(self) -> ParityGame:
        return ParityGame(list(self.owner), list(self.priority),
                          [list(s) for s in self.succ], payload=list(self.keys))


def _neutral(a: TreeAutomaton) -> int:
    return min(a.priority[q] for q in a.states)


# ---------------------------------------------------------------------------
# membership


def _membership_game(a: TreeAutomaton, tree: RegularTree):
    """Vertices ("at", node, state) owned by the automaton player and
    ("pick", node, transition) owned by the pathfinder."""
    b = _GameBuilder()
    neutral = _neutral(a)
    dead, _ = b.add(("dead",), EVEN, 1)
    b.edge(dead, dead)
    root, _ = b.add(("at", tree.root, a.initial), EVEN, a.priority[a.initial])
    frontier = [root]
    while frontier:
        v = frontier.pop()
        key = b.keys[v]
        if key[0] == "at":
            _, node, q = key
            options = a.transitions_from(q, tree.letter(node))
            if not options:
                b.edge(v, dead)
            for t in options:
                w, fresh = b.add(("pick", node, t), ODD, neutral)
                b.edge(v, w)
                if fresh:
                    frontier.append(w)
        else:
            _, node, t = key
            for d, tgt in ((L, t[2]), (R, t[3])):
                child = tree.child(node, d)
                w, fresh = b.add(("at", child, tgt), EVEN, a.priority[tgt])
                b.edge(v, w)
                if fresh:
                    frontier.append(w)
    return b, root


def regular_tree_member(a: TreeAutomaton, tree: RegularTree,
                        want_run: bool = False):
    """Whether the automaton accepts the regular tree.

    With want_run=True also returns the accepting run folded onto the
    (node, state) product presentation, or None on rejection.
    """
    problems = validate(a) + check_regular_tree(tree, a.alphabet)
    if problems:
        raise ValueError("; ".join(problems))
    builder, root = _membership_game(a, tree)
    game = builder.game()
    sol = solve_parity(game)
    accepted = sol.win[root] == EVEN
    if not want_run:
        return accepted
    if not accepted:
        return False, None
    return True, _fold_run(a, tree, builder, sol, root)


def _fold_run(a: TreeAutomaton, tree: RegularTree, builder: _GameBuilder,
              sol, root: int) -> RunAssignment:
    assignment: Dict[object, object] = {}
    frontier = [root]
    seen = {root}
    while frontier:
        v = frontier.pop()
        _, node, q = builder.keys[v]
        assignment[(node, q)] = q
        pick = sol.strategy[v]
        _, _, t = builder.keys[pick]
        for d, tgt in ((L, t[2]), (R, t[3])):
            w = builder.index[("at", tree.child(node, d), tgt)]
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return RunAssignment(assignment)


def deterministic_member_check(a: GameAutomaton, tree: RegularTree) -> bool:
    """Independent membership evaluation for deterministic automata.

    Follows the unique run over (node, state) pairs and accepts iff no
    reachable cycle has an odd maximal priority. Disjunctive slots are not
    allowed here.
    """
    if not a.is_game():
        raise ValueError("expected a game-shaped automaton")
    start = (tree.root, a.initial)
    nodes = {start}
    succ: Dict[tuple, Set[tuple]] = {}
    frontier = [start]
    dead = False
    while frontier:
        node, q = frontier.pop()
        if q == a.top:
            continue  # all-accepting from here on
        letter = tree.letter(node)
        kind, data = a.slot(q, letter) if a.transitions_from(q, letter) else (None, None)
        if kind is None:
            dead = True
            continue
        if kind != "conj":
            raise ValueError("deterministic check met a disjunctive slot")
        t = data
        for d, tgt in ((L, t[2]), (R, t[3])):
            nxt = (tree.child(node, d), tgt)
            succ.setdefault((node, q), set()).add(nxt)
            if nxt not in nodes:
                nodes.add(nxt)
                frontier.append(nxt)
    if dead:
        return False
    odd_values = sorted({a.priority[q] for (_, q) in nodes if a.priority[q] % 2 == 1})
    for c in odd_values:
        allowed = {(n, q) for (n, q) in nodes if a.priority[q] <= c}
        core = {(n, q) for (n, q) in allowed if a.priority[q] == c}
        for comp in _sccs(allowed, succ):
            if not (comp & core):
                continue
            has_edge = any(w in comp for u in comp for w in succ.get(u, ()) if w in allowed)
            if len(comp) > 1 or has_edge:
                return False
    return True


# ---------------------------------------------------------------------------
# productivity


def _nonemptiness_game(a: TreeAutomaton):
    """One-player-per-side emptiness game: the automaton picks letter and
    transition, the pathfinder picks the branch."""
    b = _GameBuilder()
    neutral = _neutral(a)
    dead, _ = b.add(("dead",), EVEN, 1)
    b.edge(dead, dead)
    for q in a.states:
        b.add(("st", q), EVEN, a.priority[q])
    for q in a.states:
        v = b.index[("st", q)]
        found = False
        for letter in a.alphabet:
            for t in a.transitions_from(q, letter):
                w, fresh = b.add(("tr", t), ODD, neutral)
                if fresh:
                    b.edge(w, b.index[("st", t[2])])
                    b.edge(w, b.index[("st", t[3])])
                b.edge(v, w)
                found = True
        if not found:
            b.edge(v, dead)
    return b


def productive_states(a: TreeAutomaton) -> Set[object]:
    """States accepting at least one tree."""
    builder = _nonemptiness_game(a)
    sol = solve_parity(builder.game())
    return {q for q in a.states if sol.win[builder.index[("st", q)]] == EVEN}


def trim(a: TreeAutomaton) -> TreeAutomaton:
    """Drop transitions through unproductive states, iterated to a fixpoint;
    language preserved.

    The state set is kept intact. Whether the language became empty is
    visible through productive_states(initial); callers branch on that.
    """
    while True:
        productive = productive_states(a)
        transitions = frozenset(t for t in a.transitions
                                if t[0] in productive and t[2] in productive
                                and t[3] in productive)
        if transitions == a.transitions:
            return a
        a = type(a)(a.alphabet, a.states, a.initial, dict(a.priority), transitions)


def emptiness_witness(a: TreeAutomaton) -> RegularTree:
    """Small regular tree accepted by the automaton; fails on empty languages."""
    builder = _nonemptiness_game(a)
    sol = solve_parity(builder.game())
    root = builder.index[("st", a.initial)]
    if sol.win[root] != EVEN:
        raise ValueError("language is empty, no witness exists")
    label: Dict[object, str] = {}
    succ: Dict[tuple, object] = {}
    frontier = [a.initial]
    seen = {a.initial}
    while frontier:
        q = frontier.pop()
        pick = sol.strategy[builder.index[("st", q)]]
        t = builder.keys[pick][1]
        label[q] = t[1]
        for d, tgt in ((L, t[2]), (R, t[3])):
            succ[(q, d)] = tgt
            if tgt not in seen:
                seen.add(tgt)
                frontier.append(tgt)
    nodes = tuple(sorted(seen, key=repr))
    return RegularTree(nodes, a.initial, label, succ)


# ---------------------------------------------------------------------------
# disjointness


_tracker_cache: Dict[tuple, WordAutomaton] = {}


def pair_parity_condition(values_a: Sequence[int], values_b: Sequence[int]) -> WordAutomaton:
    """Deterministic automaton over priority pairs accepting iff both
    component streams satisfy max-parity. Cached per value sets."""
    key = (tuple(sorted(set(values_a))), tuple(sorted(set(values_b))))
    hit = _tracker_cache.get(key)
    if hit is not None:
        return hit
    pairs = [(x, y) for x in key[0] for y in key[1]]
    t0 = priority_tracker(pairs, 0, key[0])
    t1 = priority_tracker(pairs, 1, key[1])
    cond = conjunction_dpa(t0, t1)
    _tracker_cache[key] = cond
    return cond


def disjointness_arena(a: TreeAutomaton, b: TreeAutomaton) -> Arena:
    """Rounds: the automaton player proposes a letter and one transition per
    side, the pathfinder picks the direction both runs follow."""

    def moves(pos, chosen):
        qa, qb = pos
        if len(chosen) == 0:
            return [x for x in a.alphabet
                    if a.transitions_from(qa, x) and b.transitions_from(qb, x)]
        if len(chosen) == 1:
            return a.transitions_from(qa, chosen[0])
        if len(chosen) == 2:
            return b.transitions_from(qb, chosen[0])
        return DIRECTIONS

    def update(pos, outcome):
        _, ta, tb, d = outcome
        i = 2 if d == L else 3
        return (ta[i], tb[i])

    decisions = (Decision(EVEN, "letter"), Decision(EVEN, "left-run"),
                 Decision(EVEN, "right-run"), Decision(ODD, "direction"))
    return Arena((a.initial, b.initial), decisions, moves, update)


def _disjointness_project(a: TreeAutomaton, b: TreeAutomaton):
    def project(outcome):
        _, ta, tb, d = outcome
        i = 2 if d == L else 3
        return (a.priority[ta[i]], b.priority[tb[i]])
    return project


@dataclass(eq=False)
class DisjointResult:
    disjoint: bool
    witness: Optional[RegularTree]

    def __bool__(self):
        return self.disjoint


def decide_disjoint(a: TreeAutomaton, b: TreeAutomaton) -> DisjointResult:
    """Whether the two tree languages share no tree; if they do, a shared
    regular tree is returned as the witness."""
    a, b = trim(a), trim(b)
    if a.initial not in productive_states(a) or b.initial not in productive_states(b):
        return DisjointResult(True, None)
    arena = disjointness_arena(a, b)
    graph = arena_to_graph_game(arena)
    cond = pair_parity_condition(a.priorities_used(), b.priorities_used())
    product = product_with_condition(graph, cond, EVEN, _disjointness_project(a, b))
    sol = solve_parity(product.game)
    if sol.win[product.initial] != EVEN:
        return DisjointResult(True, None)
    machine = extract_strategy_machine(product, sol, arena, EVEN)
    return DisjointResult(False, _fold_shared_tree(machine))


def _fold_shared_tree(machine) -> RegularTree:
    label: Dict[object, str] = {}
    succ: Dict[tuple, object] = {}
    start = (machine.arena.initial, machine.initial_memory)
    names: Dict[tuple, str] = {start: "n0"}
    frontier = [start]
    while frontier:
        cfg = frontier.pop()
        pos, mem = cfg
        letter = machine.decide(pos, mem, ())
        ta = machine.decide(pos, mem, (letter,))
        tb = machine.decide(pos, mem, (letter, ta))
        label[names[cfg]] = letter
        for d in DIRECTIONS:
            nxt = machine.advance(pos, mem, (letter, ta, tb, d))
            if nxt not in names:
                names[nxt] = "n%d" % len(names)
                frontier.append(nxt)
            succ[(names[cfg], d)] = names[nxt]
    nodes = tuple(sorted(names.values(), key=lambda s: int(s[1:])))
    return RegularTree(nodes, "n0", label, succ)


# ---------------------------------------------------------------------------
# pathfinder tables


@dataclass(eq=False)
class Pathfinder:
    """Direction table over same-letter transition pairs of two automata."""

    table: Mapping[tuple, str]


class PathfinderSearchError(RuntimeError):
    pass


def _pathfinder_residual_wins(a: TreeAutomaton, b: TreeAutomaton,
                              table: Mapping[tuple, str]) -> bool:
    """True iff the automaton player can still make both runs accept when all
    directions come from the table (one-player residual game)."""

    def moves(pos, chosen):
        qa, qb = pos
        if len(chosen) == 0:
            return [x for x in a.alphabet
                    if a.transitions_from(qa, x) and b.transitions_from(qb, x)]
        if len(chosen) == 1:
            return a.transitions_from(qa, chosen[0])
        return b.transitions_from(qb, chosen[0])

    def update(pos, outcome):
        _, ta, tb = outcome
        d = table[(ta, tb)]
        i = 2 if d == L else 3
        return (ta[i], tb[i])

    decisions = (Decision(EVEN, "letter"), Decision(EVEN, "left-run"),
                 Decision(EVEN, "right-run"))
    arena = Arena((a.initial, b.initial), decisions, moves, update)
    graph = arena_to_graph_game(arena)

    def project(outcome):
        _, ta, tb = outcome
        d = table[(ta, tb)]
        i = 2 if d == L else 3
        return (a.priority[ta[i]], b.priority[tb[i]])

    cond = pair_parity_condition(a.priorities_used(), b.priorities_used())
    product = product_with_condition(graph, cond, EVEN, project)
    sol = solve_parity(product.game)
    return sol.win[product.initial] == EVEN


def extract_pathfinder(a: TreeAutomaton, b: TreeAutomaton,
                       guard: int = 1 << 14) -> Pathfinder:
    """Positional direction table rejecting at least one run along every path.

    Entries forced by disjunctive transitions of a game-shaped left automaton
    point away from the all-accepting side; the remaining entries are found by
    bounded enumeration, each candidate certified on the residual game.
    """
    domain = []
    for letter in a.alphabet:
        for ta in a.letter_transitions(letter):
            for tb in b.letter_transitions(letter):
                domain.append((ta, tb))
    forced: Dict[tuple, str] = {}
    if isinstance(a, GameAutomaton):
        for (ta, tb) in domain:
            if ta[0] == a.top:
                continue
            if ta[3] == a.top and ta[2] != a.top:
                forced[(ta, tb)] = L
            elif ta[2] == a.top and ta[3] != a.top:
                forced[(ta, tb)] = R
    free = [p for p in domain if p not in forced]
    if len(free) > 60 or 2 ** len(free) > guard:
        raise PathfinderSearchError("pathfinder search infeasible: %d free entries"
                                    % len(free))
    for bits in itertools.product(DIRECTIONS, repeat=len(free)):
        table = dict(forced)
        table.update(zip(free, bits))
        if not _pathfinder_residual_wins(a, b, table):
            return Pathfinder(table)
    raise PathfinderSearchError("no positional pathfinder table found")
