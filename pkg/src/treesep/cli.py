"""Command line surface: decide, verify, witness, member, determinize, solve-game."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .analysis import emptiness_witness, regular_tree_member, trim
from .automata import (DeterministicTreeAutomaton, GameAutomaton, RegularTree,
                       TreeAutomaton)
from .formats import (REPORT_SCHEMA, ParseError, build_report, parse_automaton,
                      serialize_automaton, serialize_lasso, verification_dict)
from .games import EVEN, parity_game_from_pgsolver, solve_parity
from .separability import (TREE_DET, TREE_DET_C, TREE_DET_C_UNIVERSAL,
                           TREE_GAME, TREE_GAME_C, WORD_DET_C, Variant,
                           decide_separability)
from .verify import counterexample, verify_separator
from .words import WordAutomaton, npa_to_dpa


class InputError(Exception):
    """User-facing input problem; maps to exit code 2."""


_VARIANT_FLAGS = {
    "det": TREE_DET,
    "det-c": TREE_DET_C,
    "game": TREE_GAME,
    "game-c": TREE_GAME_C,
    "word-det-c": WORD_DET_C,
}
_C_KINDS = (WORD_DET_C, TREE_DET_C, TREE_DET_C_UNIVERSAL, TREE_GAME_C)


def parse_priorities(text: str) -> frozenset:
    """Accepts `0,1,2` and `0..2`."""
    text = text.strip()
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if lo > hi:
                raise ValueError
            values = range(lo, hi + 1)
        else:
            values = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError("cannot parse priority set %r" % text)
    out = frozenset(values)
    if not out or any(c < 0 for c in out):
        raise InputError("priority set must be nonempty naturals, got %r" % text)
    return out


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e.strerror))


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError("cannot write %s: %s" % (path, e.strerror))


def _load(path: str):
    try:
        return parse_automaton(_read(path))
    except (ParseError, ValueError) as e:
        raise InputError("%s: %s" % (path, e))


def _load_tree_automaton(path: str) -> TreeAutomaton:
    obj = _load(path)
    if not isinstance(obj, TreeAutomaton):
        raise InputError("%s: expected a tree automaton" % path)
    return obj


def _load_word_automaton(path: str) -> WordAutomaton:
    obj = _load(path)
    if not isinstance(obj, WordAutomaton):
        raise InputError("%s: expected a word automaton" % path)
    return obj


def _variant_from_args(args) -> Variant:
    kind = _VARIANT_FLAGS[args.variant]
    if getattr(args, "universally_rejecting", False):
        if kind != TREE_DET_C:
            raise InputError("--universally-rejecting requires --variant det-c")
        kind = TREE_DET_C_UNIVERSAL
    if kind in _C_KINDS:
        if not args.priorities:
            raise InputError("--priorities is required for variant %s" % args.variant)
        cs = parse_priorities(args.priorities)
    else:
        if args.priorities:
            raise InputError("--priorities is not accepted for variant %s" % args.variant)
        cs = None
    return Variant(kind, cs)


def _cmd_decide(args) -> int:
    variant = _variant_from_args(args)
    if variant.kind == WORD_DET_C:
        a = _load_word_automaton(args.a)
        b = _load_word_automaton(args.b)
    else:
        a = _load_tree_automaton(args.a)
        b = _load_tree_automaton(args.b)
    try:
        result = decide_separability(variant, a, b)
    except ValueError as e:
        raise InputError(str(e))
    report = None
    if result.separable and args.verify:
        report = verify_separator(a, b, result.separator, variant)
        if not report.passed:
            print("verification failed: %s" % report.summary(), file=sys.stderr)
            return 1
    print("SEPARABLE" if result.separable else "NOT_SEPARABLE")
    separator_path: Optional[str] = None
    if result.separable and args.separator:
        _write(args.separator, serialize_automaton(result.separator))
        separator_path = args.separator
        print("separator: %s" % separator_path)
    if args.json:
        doc = build_report(result.separable, variant, separator_path, report,
                           result.stats)
        _write(args.json, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def _infer_variant(separator, priorities_text: Optional[str]) -> Variant:
    cs = parse_priorities(priorities_text) if priorities_text else None
    if isinstance(separator, WordAutomaton):
        if cs is None:
            cs = frozenset(separator.priorities_used())
        return Variant(WORD_DET_C, cs)
    if isinstance(separator, DeterministicTreeAutomaton):
        return Variant(TREE_DET_C, cs) if cs is not None else Variant(TREE_DET)
    if isinstance(separator, GameAutomaton):
        return Variant(TREE_GAME_C, cs) if cs is not None else Variant(TREE_GAME)
    raise InputError("separator file is not a deterministic or game automaton")


def _cmd_verify(args) -> int:
    separator = _load(args.separator)
    if args.variant:
        variant = _variant_from_args(args)
    else:
        variant = _infer_variant(separator, args.priorities)
    if variant.kind == WORD_DET_C:
        a = _load_word_automaton(args.a)
        b = _load_word_automaton(args.b)
    else:
        a = _load_tree_automaton(args.a)
        b = _load_tree_automaton(args.b)
    report = verify_separator(a, b, separator, variant)
    if args.json:
        _write(args.json, json.dumps(verification_dict(report), indent=2,
                                     sort_keys=True) + "\n")
    if report.passed:
        print("PASS")
        return 0
    print("FAIL: %s" % report.summary())
    if report.shape_ok and report.priorities_ok:
        witness, classification = counterexample(a, b, separator, variant)
        path = args.counterexample
        if isinstance(witness, RegularTree):
            _write(path, serialize_automaton(witness))
        else:
            _write(path, json.dumps(serialize_lasso(witness), indent=2) + "\n")
        print("counterexample (%s): %s" % (classification, path))
    return 1


def _cmd_witness(args) -> int:
    a = _load_tree_automaton(args.a)
    try:
        tree = emptiness_witness(trim(a))
    except ValueError:
        print("language is empty, no witness exists", file=sys.stderr)
        return 1
    _write(args.out, serialize_automaton(tree))
    print("witness: %s" % args.out)
    return 0


def _cmd_member(args) -> int:
    a = _load_tree_automaton(args.automaton)
    tree = _load(args.tree)
    if not isinstance(tree, RegularTree):
        raise InputError("%s: expected a regular tree file" % args.tree)
    try:
        verdict = regular_tree_member(a, tree)
    except ValueError as e:
        raise InputError(str(e))
    print("true" if verdict else "false")
    return 0


def _cmd_determinize(args) -> int:
    npa = _load_word_automaton(args.infile)
    dpa = npa_to_dpa(npa)
    _write(args.outfile, serialize_automaton(dpa))
    print("states=%d priorities=%d" % (len(dpa.states), len(dpa.priorities_used())))
    return 0


def _cmd_solve_game(args) -> int:
    try:
        game = parity_game_from_pgsolver(_read(args.infile))
    except ValueError as e:
        raise InputError(str(e))
    sol = solve_parity(game)
    for v in range(len(game)):
        winner = "EVEN" if sol.win[v] == EVEN else "ODD"
        strategy = sol.strategy[v]
        line = "v%d winner=%s" % (v, winner)
        if strategy is not None:
            line += " strategy=%d" % strategy
        print(line)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treesep",
        description="Separability of tree automaton languages by deterministic "
                    "or game automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide separability and synthesize a separator")
    p.add_argument("--variant", required=True, choices=sorted(_VARIANT_FLAGS))
    p.add_argument("--priorities", help="allowed separator priorities, e.g. 0,1,2 or 0..2")
    p.add_argument("--a", required=True, help="first automaton file")
    p.add_argument("--b", required=True, help="second automaton file")
    p.add_argument("--separator", help="write the synthesized separator here")
    p.add_argument("--verify", action="store_true",
                   help="certify the separator before emitting it")
    p.add_argument("--json", help="write a JSON report here")
    p.add_argument("--universally-rejecting", action="store_true",
                   help="with --variant det-c: demand a separator rejecting "
                        "every branch of every tree of the second language")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("verify", help="certify a separator against a pair")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--separator", required=True)
    p.add_argument("--variant", choices=sorted(_VARIANT_FLAGS),
                   help="defaults to the separator file's shape")
    p.add_argument("--priorities")
    p.add_argument("--json")
    p.add_argument("--counterexample", default="counterexample.regt",
                   help="where to write the refuting tree on failure")
    p.set_defaults(func=_cmd_verify, universally_rejecting=False)

    p = sub.add_parser("witness", help="emit a tree accepted by an automaton")
    p.add_argument("--a", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("member", help="membership of a regular tree")
    p.add_argument("--automaton", required=True)
    p.add_argument("--tree", required=True)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("determinize", help="word parity automaton to deterministic")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_determinize)

    p = sub.add_parser("solve-game", help="solve a parity game in pgsolver format")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_solve_game)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (ParseError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
