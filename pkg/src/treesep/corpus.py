"""Hand-built fixtures and seeded random generators used across the tests."""

from __future__ import annotations

import os
import random
from typing import List, Optional, Sequence, Tuple

from .analysis import productive_states, trim
from .automata import (TOP, DeterministicTreeAutomaton, GameAutomaton,
                       RegularTree, TreeAutomaton)
from .words import WordAutomaton

ALPHABET = ("a", "b")


def default_seed() -> int:
    return int(os.environ.get("TREESEP_SEED", "20260817"))


# ---------------------------------------------------------------------------
# hand automata


def safety_all_a() -> DeterministicTreeAutomaton:
    """Accepts exactly the tree labelled a everywhere."""
    transitions = {
        ("qA", "a", "qA", "qA"),
        ("qA", "b", "r", "r"),
        ("r", "a", "r", "r"),
        ("r", "b", "r", "r"),
        (TOP, "a", TOP, TOP),
        (TOP, "b", TOP, TOP),
    }
    return DeterministicTreeAutomaton(ALPHABET, ("qA", "r", TOP), "qA",
                                      {"qA": 0, "r": 1, TOP: 0},
                                      frozenset(transitions))


def some_b() -> TreeAutomaton:
    """Trees containing at least one b-labelled node."""
    transitions = {
        ("qs", "a", "qs", "qall"),
        ("qs", "a", "qall", "qs"),
        ("qs", "b", "qall", "qall"),
        ("qall", "a", "qall", "qall"),
        ("qall", "b", "qall", "qall"),
    }
    return TreeAutomaton(ALPHABET, ("qs", "qall"), "qs",
                         {"qs": 1, "qall": 0}, frozenset(transitions))


def universal() -> TreeAutomaton:
    transitions = {("u", x, "u", "u") for x in ALPHABET}
    return TreeAutomaton(ALPHABET, ("u",), "u", {"u": 0}, frozenset(transitions))


def empty_language() -> TreeAutomaton:
    """Total transitions but every run rejects."""
    transitions = {("e", x, "e", "e") for x in ALPHABET}
    return TreeAutomaton(ALPHABET, ("e",), "e", {"e": 1}, frozenset(transitions))


def root_a() -> TreeAutomaton:
    """Trees whose root is labelled a."""
    transitions = {("s", "a", "u", "u")} | {("u", x, "u", "u") for x in ALPHABET}
    return TreeAutomaton(ALPHABET, ("s", "u"), "s", {"s": 0, "u": 0},
                         frozenset(transitions))


def root_b() -> TreeAutomaton:
    transitions = {("s", "b", "u", "u")} | {("u", x, "u", "u") for x in ALPHABET}
    return TreeAutomaton(ALPHABET, ("s", "u"), "s", {"s": 0, "u": 0},
                         frozenset(transitions))


def infinitely_many_b() -> DeterministicTreeAutomaton:
    """Every branch sees b infinitely often."""
    transitions = set()
    for q, x, p in (("qa", "a", 1), ("qa", "b", 2), ("qb", "a", 1), ("qb", "b", 2)):
        tgt = "qa" if x == "a" else "qb"
        transitions.add((q, x, tgt, tgt))
    for x in ALPHABET:
        transitions.add((TOP, x, TOP, TOP))
    return DeterministicTreeAutomaton(ALPHABET, ("qa", "qb", TOP), "qb",
                                      {"qa": 1, "qb": 2, TOP: 0},
                                      frozenset(transitions))


def finitely_b_branch() -> TreeAutomaton:
    """Some branch carries only finitely many b labels."""
    transitions = set()
    for x in ALPHABET:
        # hunting phase: follow one branch, the rest is unconstrained
        transitions.add(("h", x, "h", "u"))
        transitions.add(("h", x, "u", "h"))
        transitions.add(("u", x, "u", "u"))
        # committed phase: the chosen branch must stay on a
        transitions.add(("c", "a", "c", "u"))
        transitions.add(("c", "a", "u", "c"))
    transitions.add(("h", "a", "c", "u"))
    transitions.add(("h", "a", "u", "c"))
    return TreeAutomaton(ALPHABET, ("h", "c", "u"), "h",
                         {"h": 1, "c": 2, "u": 0}, frozenset(transitions))


def discriminating_pair() -> Tuple[TreeAutomaton, TreeAutomaton]:
    """Separable by a game automaton but by no deterministic one."""
    return some_b(), safety_all_a()


def hand_pairs() -> List[Tuple[str, TreeAutomaton, TreeAutomaton]]:
    return [
        ("some-b/all-a", some_b(), safety_all_a()),
        ("all-a/some-b", safety_all_a(), some_b()),
        ("root-a/root-b", root_a(), root_b()),
        ("universal/empty", universal(), empty_language()),
        ("empty/universal", empty_language(), universal()),
        ("inf-b/fin-b-branch", infinitely_many_b(), finitely_b_branch()),
    ]


def word_infinitely_b() -> WordAutomaton:
    """Deterministic, complete; words containing b infinitely often."""
    return WordAutomaton(
        ALPHABET, ("wa", "wb"), "wa",
        {"wa": 1, "wb": 2},
        frozenset({("wa", "a", "wa"), ("wa", "b", "wb"),
                   ("wb", "a", "wa"), ("wb", "b", "wb")}))


def word_finitely_b() -> WordAutomaton:
    """Nondeterministic; words with finitely many b (guess the last one)."""
    return WordAutomaton(
        ALPHABET, ("g", "t"), "g",
        {"g": 1, "t": 2},
        frozenset({("g", "a", "g"), ("g", "b", "g"),
                   ("g", "a", "t"), ("t", "a", "t")}))


# ---------------------------------------------------------------------------
# hand trees


def all_a_tree() -> RegularTree:
    return RegularTree(("n0",), "n0", {"n0": "a"},
                       {("n0", "L"): "n0", ("n0", "R"): "n0"})


def all_b_tree() -> RegularTree:
    return RegularTree(("n0",), "n0", {"n0": "b"},
                       {("n0", "L"): "n0", ("n0", "R"): "n0"})


def one_b_tree() -> RegularTree:
    """Root b, everything below a."""
    return RegularTree(("n0", "n1"), "n0", {"n0": "b", "n1": "a"},
                       {("n0", "L"): "n1", ("n0", "R"): "n1",
                        ("n1", "L"): "n1", ("n1", "R"): "n1"})


def alternating_tree() -> RegularTree:
    """Levels alternate a and b."""
    return RegularTree(("n0", "n1"), "n0", {"n0": "a", "n1": "b"},
                       {("n0", "L"): "n1", ("n0", "R"): "n1",
                        ("n1", "L"): "n0", ("n1", "R"): "n0"})


def hand_trees() -> List[RegularTree]:
    return [all_a_tree(), all_b_tree(), one_b_tree(), alternating_tree()]


# ---------------------------------------------------------------------------
# random generators


def random_tree_automaton(rng: random.Random, n_states: int = 4,
                          alphabet: Sequence[str] = ALPHABET,
                          max_priority: int = 2,
                          per_letter_cap: int = 3) -> TreeAutomaton:
    """Sparse random automaton; per-letter transition counts stay below the
    cap so selector domains remain enumerable downstream."""
    states = tuple("q%d" % i for i in range(rng.randint(1, n_states)))
    priority = {q: rng.randint(0, max_priority) for q in states}
    transitions = set()
    for x in alphabet:
        k = rng.randint(1, per_letter_cap)
        for _ in range(k):
            transitions.add((rng.choice(states), x,
                             rng.choice(states), rng.choice(states)))
    return TreeAutomaton(tuple(alphabet), states, states[0], priority,
                         frozenset(transitions))


def random_trimmed_automaton(rng: random.Random, **kw) -> TreeAutomaton:
    """Random automaton with a productive initial state, already trimmed."""
    while True:
        a = trim(random_tree_automaton(rng, **kw))
        if a.initial in productive_states(a):
            return a


def random_pair(rng: random.Random, **kw) -> Tuple[TreeAutomaton, TreeAutomaton]:
    return random_trimmed_automaton(rng, **kw), random_trimmed_automaton(rng, **kw)


def random_word_npa(rng: random.Random, n_states: int = 3,
                    alphabet: Sequence[str] = ALPHABET,
                    max_priority: int = 2) -> WordAutomaton:
    states = tuple("q%d" % i for i in range(rng.randint(1, n_states)))
    priority = {q: rng.randint(0, max_priority) for q in states}
    transitions = set()
    for q in states:
        for x in alphabet:
            for tgt in rng.sample(states, k=min(len(states), rng.randint(0, 2))):
                transitions.add((q, x, tgt))
    return WordAutomaton(tuple(alphabet), states, states[0], priority,
                         frozenset(transitions))


def random_regular_tree(rng: random.Random, n_nodes: int = 3,
                        alphabet: Sequence[str] = ALPHABET) -> RegularTree:
    nodes = tuple("n%d" % i for i in range(rng.randint(1, n_nodes)))
    label = {n: rng.choice(list(alphabet)) for n in nodes}
    succ = {(n, d): rng.choice(nodes) for n in nodes for d in ("L", "R")}
    return RegularTree(nodes, nodes[0], label, succ)
