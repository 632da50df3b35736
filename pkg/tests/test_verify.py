import random

import pytest

from treesep import (
    DeterministicTreeAutomaton, GameAutomaton, Lasso, TOP, TreeAutomaton,
    Variant, complement_game, counterexample, cross_check_det,
    decide_separability, lasso_member, regular_tree_member, verify_separator,
)
from treesep.separability import (
    TREE_DET, TREE_DET_C, TREE_GAME, TREE_GAME_C, WORD_DET_C,
)
from treesep.corpus import (
    default_seed, discriminating_pair, hand_pairs, random_pair, root_a,
    root_b, safety_all_a, some_b, universal,
)

C12 = frozenset({1, 2})
C012 = frozenset({0, 1, 2})


def universal_det_separator():
    return DeterministicTreeAutomaton(
        ("a", "b"), ("s", TOP), "s", {"s": 0, TOP: 0},
        frozenset({("s", "a", "s", "s"), ("s", "b", "s", "s"),
                   (TOP, "a", TOP, TOP), (TOP, "b", TOP, TOP)}))


def all_b_det_separator():
    # accepts exactly the all-b tree
    return DeterministicTreeAutomaton(
        ("a", "b"), ("s", "r", TOP), "s", {"s": 0, "r": 1, TOP: 0},
        frozenset({("s", "b", "s", "s"), ("s", "a", "r", "r"),
                   ("r", "a", "r", "r"), ("r", "b", "r", "r"),
                   (TOP, "a", TOP, TOP), (TOP, "b", TOP, TOP)}))


def test_report_passes_on_synthesized_separator():
    a, b = discriminating_pair()
    r = decide_separability(Variant(TREE_GAME), a, b)
    report = verify_separator(a, b, r.separator, Variant(TREE_GAME))
    assert report.passed
    assert report.shape_ok and report.priorities_ok
    assert report.containment_ok and report.disjointness_ok
    assert report.containment_witness is None
    assert report.disjointness_witness is None
    assert report.summary() == "separator certified"


def test_disjointness_violation_detected_and_witnessed():
    a, b = discriminating_pair()          # some-b vs the all-a tree
    sep = universal_det_separator()       # contains b's all-a tree: not disjoint
    report = verify_separator(a, b, sep, Variant(TREE_DET))
    assert not report.passed
    assert report.containment_ok
    assert not report.disjointness_ok
    assert "disjointness" in report.summary()
    wit, kind = counterexample(a, b, sep, Variant(TREE_DET))
    assert kind == "disjointness"
    assert regular_tree_member(sep, wit)
    assert regular_tree_member(b, wit)


def test_containment_violation_detected_and_witnessed():
    a, b = some_b(), safety_all_a()
    sep = all_b_det_separator()           # misses some-b trees that contain an a
    report = verify_separator(a, b, sep, Variant(TREE_DET))
    assert not report.passed
    assert not report.containment_ok
    wit, kind = counterexample(a, b, sep, Variant(TREE_DET))
    assert kind == "containment"
    assert regular_tree_member(a, wit)
    assert regular_tree_member(complement_game(sep), wit)
    assert not regular_tree_member(sep, wit)


def test_counterexample_refuses_passing_report():
    a, b = root_a(), root_b()
    r = decide_separability(Variant(TREE_DET), a, b)
    with pytest.raises(ValueError):
        counterexample(a, b, r.separator, Variant(TREE_DET))


def test_shape_check_rejects_wrong_class():
    a, b = discriminating_pair()
    plain = TreeAutomaton(("a", "b"), ("q",), "q", {"q": 0},
                          frozenset({("q", "a", "q", "q"), ("q", "b", "q", "q")}))
    report = verify_separator(a, b, plain, Variant(TREE_DET))
    assert not report.shape_ok
    assert not report.passed
    assert report.messages
    with pytest.raises(ValueError):
        counterexample(a, b, plain, Variant(TREE_DET))
    # a deterministic automaton is fine where a game automaton is requested,
    # but a nondeterministic one is not
    report2 = verify_separator(a, b, plain, Variant(TREE_GAME))
    assert not report2.shape_ok


def test_priority_set_check():
    a, b = root_a(), root_b()
    r = decide_separability(Variant(TREE_DET_C, C012), a, b)
    sep = r.separator
    bumped = {q: (sep.priority[q] + 4 if q != sep.top else sep.priority[q])
              for q in sep.states}
    tampered = DeterministicTreeAutomaton(sep.alphabet, sep.states, sep.initial,
                                          bumped, sep.transitions)
    report = verify_separator(a, b, tampered, Variant(TREE_DET_C, C012))
    assert not report.priorities_ok
    assert not report.passed
    # the top state is exempt from the priority-set constraint
    report2 = verify_separator(a, b, sep, Variant(TREE_DET_C, C012))
    assert report2.priorities_ok


def test_word_variant_verification(inf_b_word, fin_b_word):
    variant = Variant(WORD_DET_C, C12)
    r = decide_separability(variant, inf_b_word, fin_b_word)
    report = verify_separator(inf_b_word, fin_b_word, r.separator, variant)
    assert report.passed

    sep = r.separator
    flipped = {q: p + (1 if p == 1 else -1) for q, p in sep.priority.items()}
    tampered = type(sep)(sep.alphabet, sep.states, sep.initial, flipped,
                         sep.transitions)
    bad = verify_separator(inf_b_word, fin_b_word, tampered, variant)
    if not bad.passed and bad.shape_ok and bad.priorities_ok:
        wit, kind = counterexample(inf_b_word, fin_b_word, tampered, variant)
        assert isinstance(wit, Lasso)
        if kind == "containment":
            assert lasso_member(inf_b_word, wit)
            assert not lasso_member(tampered, wit)
        else:
            assert lasso_member(tampered, wit)
            assert lasso_member(fin_b_word, wit)


def test_cross_check_det_agrees_on_hand_pairs():
    for name, a, b in hand_pairs():
        report = cross_check_det(a, b)
        assert report.agree, name
        assert report.game_verdict == report.oracle_verdict


def test_cross_check_det_on_randoms():
    rng = random.Random(default_seed() + 80)
    for _ in range(10):
        a, b = random_pair(rng)
        assert cross_check_det(a, b).agree


def test_verify_game_separator_against_mutation():
    a, b = discriminating_pair()
    r = decide_separability(Variant(TREE_GAME_C, C12), a, b)
    sep = r.separator
    # flip one non-top priority within the allowed set; the mutant must either
    # still verify or be rejected with a certified counterexample
    target = next(q for q in sep.states if q != sep.top)
    flipped = dict(sep.priority)
    flipped[target] = 1 if flipped[target] == 2 else 2
    mutant = GameAutomaton(sep.alphabet, sep.states, sep.initial, flipped,
                           sep.transitions)
    report = verify_separator(a, b, mutant, Variant(TREE_GAME_C, C12))
    if not report.passed:
        wit, kind = counterexample(a, b, mutant, Variant(TREE_GAME_C, C12))
        if kind == "containment":
            assert regular_tree_member(a, wit)
            assert regular_tree_member(complement_game(mutant), wit)
        else:
            assert regular_tree_member(mutant, wit)
            assert regular_tree_member(b, wit)
