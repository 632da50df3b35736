"""Independent certification of separators.

Verification never trusts the synthesis pipeline: containment and
disjointness are established by the disjointness decision procedure (trees)
or product emptiness (words), and any counterexample is re-checked by the
membership procedures before being reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .analysis import decide_disjoint, regular_tree_member
from .automata import (DeterministicTreeAutomaton, GameAutomaton, RegularTree,
                       complement_game, validate)
from .separability import (TREE_DET, TREE_GAME, TREE_GAME_C, WORD_DET_C,
                           Variant, decide_separability, path_automaton)
from .words import (Lasso, WordAutomaton, check_word_automaton, dpa_complement,
                    lasso_member, word_intersection_empty)


@dataclass(eq=False)
class VerificationReport:
    variant: str
    shape_ok: bool = False
    priorities_ok: bool = False
    containment_ok: bool = False
    disjointness_ok: bool = False
    containment_witness: Optional[object] = None
    disjointness_witness: Optional[object] = None
    messages: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.shape_ok and self.priorities_ok
                and self.containment_ok and self.disjointness_ok)

    def summary(self) -> str:
        if self.passed:
            return "separator certified"
        parts = []
        if not self.shape_ok:
            parts.append("shape: " + "; ".join(self.messages))
        if not self.priorities_ok:
            parts.append("priorities outside the allowed set")
        if self.shape_ok:
            if not self.containment_ok:
                parts.append("containment violated")
            if not self.disjointness_ok:
                parts.append("disjointness violated")
        return ", ".join(parts)


def _shape_check(separator, variant: Variant) -> List[str]:
    kind = variant.kind
    if kind == WORD_DET_C:
        problems = check_word_automaton(separator)
        if not isinstance(separator, WordAutomaton):
            problems.append("word separator expected")
        elif not problems:
            if not separator.is_deterministic() or not separator.is_complete():
                problems.append("word separator must be deterministic and complete")
        return problems
    problems = validate(separator)
    if kind in (TREE_GAME, TREE_GAME_C):
        if not isinstance(separator, GameAutomaton):
            problems.append("game-shaped separator expected")
    else:
        if not isinstance(separator, DeterministicTreeAutomaton):
            problems.append("deterministic separator expected")
    return problems


def _priorities_check(separator, variant: Variant) -> bool:
    if variant.priorities is None:
        return True
    if variant.kind == WORD_DET_C:
        used = {separator.priority[q] for q in separator.states}
    else:
        # the top state never occurs on a run over a full tree slot, its
        # priority is not part of the separator's priority budget
        used = {separator.priority[q] for q in separator.states
                if q != getattr(separator, "top", None)}
    return used <= set(variant.priorities)


def verify_separator(a, b, separator, variant: Variant) -> VerificationReport:
    """Certify containment L(a) <= L(separator) and disjointness with L(b)."""
    report = VerificationReport(variant.kind)
    problems = _shape_check(separator, variant)
    if problems:
        report.messages.extend(problems)
        return report
    report.shape_ok = True
    report.priorities_ok = _priorities_check(separator, variant)
    if variant.kind == WORD_DET_C:
        cont_empty, cont_wit = word_intersection_empty(a, dpa_complement(separator))
        disj_empty, disj_wit = word_intersection_empty(separator, b)
        report.containment_ok = cont_empty
        report.containment_witness = cont_wit
        report.disjointness_ok = disj_empty
        report.disjointness_witness = disj_wit
        return report
    cont = decide_disjoint(a, complement_game(separator))
    report.containment_ok = cont.disjoint
    report.containment_witness = cont.witness
    disj = decide_disjoint(separator, b)
    report.disjointness_ok = disj.disjoint
    report.disjointness_witness = disj.witness
    return report


def counterexample(a, b, separator, variant: Variant) -> Tuple[object, str]:
    """Witness refuting a claimed separator, recertified by membership checks.

    Returns (witness, classification) where the classification names the
    broken property: "containment" (a tree of the first language the
    separator rejects) or "disjointness" (a tree of the second language the
    separator accepts).
    """
    report = verify_separator(a, b, separator, variant)
    if report.passed:
        raise ValueError("separator is correct, no counterexample exists")
    if not report.shape_ok or not report.priorities_ok:
        raise ValueError("separator is malformed: %s" % report.summary())
    if not report.containment_ok:
        witness, kind = report.containment_witness, "containment"
    else:
        witness, kind = report.disjointness_witness, "disjointness"
    if variant.kind == WORD_DET_C:
        assert isinstance(witness, Lasso)
        if kind == "containment":
            assert lasso_member(a, witness) and not lasso_member(separator, witness)
        else:
            assert lasso_member(separator, witness) and lasso_member(b, witness)
        return witness, kind
    assert isinstance(witness, RegularTree)
    if kind == "containment":
        assert regular_tree_member(a, witness)
        assert regular_tree_member(complement_game(separator), witness)
    else:
        assert regular_tree_member(separator, witness)
        assert regular_tree_member(b, witness)
    return witness, kind


@dataclass(eq=False)
class CrossCheckReport:
    agree: bool
    game_verdict: bool
    oracle_verdict: bool


def cross_check_det(a, b) -> CrossCheckReport:
    """Deterministic-separability verdict versus the path-closure oracle."""
    game_verdict = decide_separability(Variant(TREE_DET), a, b).separable
    oracle_verdict = decide_disjoint(path_automaton(a), b).disjoint
    return CrossCheckReport(game_verdict == oracle_verdict, game_verdict,
                            oracle_verdict)
