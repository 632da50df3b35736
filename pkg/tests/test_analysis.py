import random

import pytest

from treesep import (
    Lasso, PathfinderSearchError, TreeAutomaton, decide_disjoint,
    emptiness_witness, extract_pathfinder, lasso_member, pair_parity_condition,
    productive_states, regular_tree_member, trim, validate,
)
from treesep.corpus import (
    all_a_tree, default_seed, empty_language, finitely_b_branch, hand_trees,
    infinitely_many_b, random_regular_tree, random_tree_automaton, root_a,
    root_b, safety_all_a, some_b, universal,
)


def test_productive_states_on_fixtures():
    assert productive_states(universal()) == {"u"}
    assert productive_states(empty_language()) == set()
    # the safety automaton rejects through an unproductive sink state
    assert productive_states(safety_all_a()) == {"qA", "TOP"}


def test_trim_drops_unproductive_parts():
    a = TreeAutomaton(
        ("a",), ("q", "dead"), "q", {"q": 0, "dead": 1},
        frozenset({("q", "a", "q", "q"), ("q", "a", "dead", "q"),
                   ("dead", "a", "dead", "dead")}))
    t = trim(a)
    assert set(t.states) == {"q", "dead"}
    assert all(s != "dead" for tr in t.transitions for s in (tr[0], tr[2], tr[3]))
    assert regular_tree_member(t, all_a_tree())


def test_trim_reaches_fixpoint():
    # r is productive only through a transition whose sibling child is not
    a = TreeAutomaton(
        ("a",), ("q", "r", "s"), "q", {"q": 0, "r": 0, "s": 1},
        frozenset({("q", "a", "q", "q"), ("r", "a", "q", "s")}))
    t = trim(a)
    assert not any(tr[0] == "r" for tr in t.transitions)
    again = trim(t)
    assert again.transitions == t.transitions


def test_trim_preserves_membership():
    rng = random.Random(default_seed() + 60)
    for _ in range(15):
        a = random_tree_automaton(rng)
        t = trim(a)
        for tree in [random_regular_tree(rng, n_nodes=2) for _ in range(3)]:
            assert regular_tree_member(t, tree) == regular_tree_member(a, tree)


def test_emptiness_witness_is_member():
    rng = random.Random(default_seed() + 61)
    found = 0
    for aut in [universal(), some_b(), safety_all_a(), finitely_b_branch()] + \
               [random_tree_automaton(rng) for _ in range(20)]:
        if productive_states(aut) and aut.initial in productive_states(aut):
            tree = emptiness_witness(aut)
            assert regular_tree_member(aut, tree)
            found += 1
    assert found >= 4
    with pytest.raises(ValueError):
        emptiness_witness(empty_language())


def test_decide_disjoint_hand_verdicts():
    assert decide_disjoint(safety_all_a(), some_b()).disjoint
    assert decide_disjoint(empty_language(), universal()).disjoint
    r = decide_disjoint(universal(), some_b())
    assert not r.disjoint
    assert regular_tree_member(universal(), r.witness)
    assert regular_tree_member(some_b(), r.witness)
    # all branches see b infinitely often vs some branch sees b finitely often
    assert decide_disjoint(infinitely_many_b(), finitely_b_branch()).disjoint
    r3 = decide_disjoint(finitely_b_branch(), universal())
    assert not r3.disjoint
    assert regular_tree_member(finitely_b_branch(), r3.witness)


def test_decide_disjoint_witness_certifies_on_randoms():
    rng = random.Random(default_seed() + 62)
    overlaps = 0
    for _ in range(25):
        a = random_tree_automaton(rng)
        b = random_tree_automaton(rng)
        r = decide_disjoint(a, b)
        if not r.disjoint:
            overlaps += 1
            assert regular_tree_member(a, r.witness)
            assert regular_tree_member(b, r.witness)
        else:
            # spot-check: no shared member among a few sampled trees
            for tree in hand_trees():
                assert not (regular_tree_member(a, tree) and regular_tree_member(b, tree))
    assert overlaps > 0


def test_decide_disjoint_handles_empty_inputs():
    r = decide_disjoint(empty_language(), empty_language())
    assert r.disjoint and r.witness is None


def test_pair_parity_condition_matches_direct_evaluation():
    rng = random.Random(default_seed() + 63)
    values = [0, 1, 2, 3]
    pairs = [(x, y) for x in values for y in values]
    cond = pair_parity_condition(values, values)
    assert cond.is_deterministic() and cond.is_complete()
    for _ in range(60):
        loop = tuple(rng.choice(pairs) for _ in range(rng.randint(1, 4)))
        prefix = tuple(rng.choice(pairs) for _ in range(rng.randint(0, 3)))
        accept_a = max(p for p, _ in loop) % 2 == 0
        accept_b = max(p for _, p in loop) % 2 == 0
        want = accept_a and accept_b
        assert lasso_member(cond, Lasso(prefix, loop)) == want


def test_extract_pathfinder_on_disjoint_pair():
    pf = extract_pathfinder(root_a(), root_b())
    assert pf.table is not None


def test_extract_pathfinder_guard_trips():
    letters = ("a",)
    states = tuple("q%d" % i for i in range(6))
    trans = {(q, "a", q2, q2) for q in states for q2 in states}
    big = TreeAutomaton(letters, states, states[0], {q: 1 for q in states},
                        frozenset(trans))
    with pytest.raises(PathfinderSearchError):
        extract_pathfinder(big, big, guard=4)
