"""Core types for parity automata over infinite binary trees.

Acceptance everywhere is max-parity: a run of priorities is accepting iff the
maximal priority occurring infinitely often is even.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

L = "L"
R = "R"
DIRECTIONS = (L, R)

#: reserved name for the all-accepting state of game automata
TOP = "TOP"

# a tree transition is (state, letter, left target, right target)
Transition = Tuple[str, str, str, str]

Alphabet = Tuple[str, ...]


def _sorted_unique(items: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(items)))


@dataclass(eq=False)
class TreeAutomaton:
    """Nondeterministic parity tree automaton over the binary tree."""

    alphabet: Tuple[str, ...]
    states: Tuple[str, ...]
    initial: str
    priority: Dict[str, int]
    transitions: frozenset

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self.states = tuple(self.states)
        self.transitions = frozenset(self.transitions)
        index: Dict[Tuple[str, str], List[Transition]] = {}
        for t in self.transitions:
            index.setdefault((t[0], t[1]), []).append(t)
        self._index = {k: tuple(sorted(v)) for k, v in index.items()}

    def transitions_from(self, state: str, letter: str) -> Tuple[Transition, ...]:
        return self._index.get((state, letter), ())

    def letter_transitions(self, letter: str) -> Tuple[Transition, ...]:
        """All transitions over a letter, any source state, in canonical order."""
        return tuple(sorted(t for t in self.transitions if t[1] == letter))

    def priorities_used(self) -> Tuple[int, ...]:
        return tuple(sorted({self.priority[q] for q in self.states}))

    def is_game(self) -> bool:
        return isinstance(self, GameAutomaton)


@dataclass(eq=False)
class GameAutomaton(TreeAutomaton):
    """Tree automaton where every (state, letter) slot is conjunctive or disjunctive.

    The distinguished state `top` accepts every tree; it only occurs in the
    second slot of the left member and the first slot of the right member of
    disjunctive pairs, plus its own self-loops.
    """

    top: str = TOP

    def slot(self, state: str, letter: str):
        """Classify the (state, letter) slot.

        Returns ("conj", t) for a single conjunctive transition or
        ("disj", (left, right)) for a disjunctive pair, where `left` sends L to a
        real state and `right` sends R to a real state.
        """
        ts = self.transitions_from(state, letter)
        if len(ts) == 1:
            return ("conj", ts[0])
        if len(ts) == 2:
            left = next((t for t in ts if t[3] == self.top and t[2] != self.top), None)
            right = next((t for t in ts if t[2] == self.top and t[3] != self.top), None)
            if left is not None and right is not None:
                return ("disj", (left, right))
        raise ValueError("state %r letter %r is not a legal game slot" % (state, letter))


@dataclass(eq=False)
class DeterministicTreeAutomaton(GameAutomaton):
    """Game automaton with only conjunctive slots: one run per tree."""


@dataclass(frozen=True, eq=True)
class RegularTree:
    """Finite graph presentation of a regular infinite binary tree."""

    nodes: Tuple[str, ...]
    root: str
    label: Mapping[str, str]
    succ: Mapping[Tuple[str, str], str]

    def child(self, node: str, direction: str) -> str:
        return self.succ[(node, direction)]

    def letter(self, node: str) -> str:
        return self.label[node]


@dataclass(frozen=True, eq=True)
class PathWord:
    """Word over alphabet x {L, R}; loop marks the start of a repeating suffix."""

    steps: Tuple[Tuple[str, str], ...]
    loop: Optional[int] = None


def check_regular_tree(tree: RegularTree, alphabet: Optional[Sequence[str]] = None) -> List[str]:
    """Structural diagnostics for a regular tree; empty list means well formed."""
    problems: List[str] = []
    nodes = set(tree.nodes)
    if not nodes:
        problems.append("tree has no nodes")
        return problems
    if tree.root not in nodes:
        problems.append("root %r is not a declared node" % tree.root)
    for n in tree.nodes:
        if n not in tree.label:
            problems.append("node %r has no label" % n)
        elif alphabet is not None and tree.label[n] not in alphabet:
            problems.append("node %r labelled %r outside the alphabet" % (n, tree.label[n]))
        for d in DIRECTIONS:
            if (n, d) not in tree.succ:
                problems.append("node %r missing %s successor" % (n, d))
            elif tree.succ[(n, d)] not in nodes:
                problems.append("node %r has undeclared %s successor %r" % (n, d, tree.succ[(n, d)]))
    return problems


def validate(automaton: TreeAutomaton) -> List[str]:
    """Diagnostics for an automaton; empty list means all invariants hold."""
    problems: List[str] = []
    a = automaton
    if not a.alphabet:
        problems.append("alphabet is empty")
    if len(set(a.alphabet)) != len(a.alphabet):
        problems.append("alphabet has duplicate letters")
    if not a.states:
        problems.append("state set is empty")
    if len(set(a.states)) != len(a.states):
        problems.append("state list has duplicates")
    states = set(a.states)
    if a.initial not in states:
        problems.append("initial state %r is not declared" % a.initial)
    for q in a.states:
        if q not in a.priority:
            problems.append("state %r has no priority" % q)
        else:
            p = a.priority[q]
            if not isinstance(p, int) or p < 0:
                problems.append("state %r has illegal priority %r" % (q, p))
    letters = set(a.alphabet)
    for t in sorted(a.transitions):
        q, letter, ql, qr = t
        for s in (q, ql, qr):
            if s not in states:
                problems.append("transition %r references undeclared state %r" % (t, s))
        if letter not in letters:
            problems.append("transition %r references undeclared letter %r" % (t, letter))
    if problems:
        return problems

    if isinstance(a, GameAutomaton):
        problems.extend(_validate_game(a))
    elif TOP in states:
        problems.append("state name TOP is reserved for the top state of game automata")
    return problems


def _validate_game(a: GameAutomaton) -> List[str]:
    problems: List[str] = []
    if a.top not in set(a.states):
        problems.append("top state %r is not declared" % a.top)
        return problems
    if a.initial == a.top:
        problems.append("initial state must differ from top")
    if a.priority[a.top] % 2 != 0:
        problems.append("top state priority must be even")
    for letter in a.alphabet:
        loop = (a.top, letter, a.top, a.top)
        ts = a.transitions_from(a.top, letter)
        if ts != (loop,):
            problems.append("top must carry exactly its self-loop on letter %r" % letter)
    deterministic = isinstance(a, DeterministicTreeAutomaton)
    for q in a.states:
        if q == a.top:
            continue
        for letter in a.alphabet:
            ts = a.transitions_from(q, letter)
            if not ts:
                problems.append("game state %r has no transition on %r" % (q, letter))
                continue
            if len(ts) == 1:
                t = ts[0]
                if t[2] == a.top or t[3] == a.top:
                    problems.append("conjunctive transition %r targets top" % (t,))
                continue
            if len(ts) == 2:
                left = [t for t in ts if t[3] == a.top and t[2] != a.top]
                right = [t for t in ts if t[2] == a.top and t[3] != a.top]
                if len(left) == 1 and len(right) == 1:
                    if deterministic:
                        problems.append(
                            "deterministic automaton has disjunctive slot at (%r, %r)" % (q, letter))
                    continue
            problems.append("state %r letter %r: %d transitions form no legal slot"
                            % (q, letter, len(ts)))
    return problems


def complement_game(a: GameAutomaton) -> GameAutomaton:
    """Dual game automaton: swaps slot shapes, recognizes the complement language."""
    transitions = set()
    for q in a.states:
        if q == a.top:
            for letter in a.alphabet:
                transitions.add((a.top, letter, a.top, a.top))
            continue
        for letter in a.alphabet:
            shape, data = a.slot(q, letter)
            if shape == "conj":
                _, _, ql, qr = data
                transitions.add((q, letter, ql, a.top))
                transitions.add((q, letter, a.top, qr))
            else:
                left, right = data
                transitions.add((q, letter, left[2], right[3]))
    priority = {q: a.priority[q] + 1 for q in a.states if q != a.top}
    bumped = set(priority.values())
    evens = sorted(v for v in bumped if v % 2 == 0)
    priority[a.top] = evens[0] if evens else a.priority[a.top]
    return GameAutomaton(a.alphabet, a.states, a.initial, priority, frozenset(transitions), top=a.top)


def normalize_priorities(a: TreeAutomaton) -> TreeAutomaton:
    """Shift all priorities down by the largest even constant below their minimum."""
    lowest = min(a.priority[q] for q in a.states)
    shift = lowest - (lowest % 2)
    priority = {q: a.priority[q] - shift for q in a.states}
    if isinstance(a, DeterministicTreeAutomaton):
        return DeterministicTreeAutomaton(a.alphabet, a.states, a.initial, priority,
                                          a.transitions, top=a.top)
    if isinstance(a, GameAutomaton):
        return GameAutomaton(a.alphabet, a.states, a.initial, priority, a.transitions, top=a.top)
    return TreeAutomaton(a.alphabet, a.states, a.initial, priority, a.transitions)


def unfold_path(tree: RegularTree, directions: Sequence[str]) -> PathWord:
    """Finite path word read while following `directions` from the root."""
    node = tree.root
    steps = []
    for d in directions:
        if d not in DIRECTIONS:
            raise ValueError("illegal direction %r" % d)
        steps.append((tree.label[node], d))
        node = tree.succ[(node, d)]
    return PathWord(tuple(steps))


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while "%s_%d" % (base, i) in taken:
        i += 1
    return "%s_%d" % (base, i)
