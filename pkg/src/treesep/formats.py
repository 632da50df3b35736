"""Text formats for automata, regular trees, and JSON report documents."""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .automata import (TOP, DeterministicTreeAutomaton, GameAutomaton,
                       RegularTree, TreeAutomaton, check_regular_tree, validate)
from .words import Lasso, WordAutomaton, check_word_automaton

_TOKEN = re.compile(r"^[A-Za-z0-9_.+\-]+$")
_HEADER_KEYS = ("type", "kind", "alphabet", "states", "initial", "priorities",
                "nodes", "root", "labels")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__("line %d: %s" % (line, message))
        self.line = line


def _scan(text: str):
    """Split into header entries and transition rows, dropping comments."""
    headers: Dict[str, Tuple[int, str]] = {}
    rows: List[Tuple[int, List[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() in _HEADER_KEYS:
            key = key.strip()
            if key in headers:
                raise ParseError(lineno, "duplicate header %r" % key)
            headers[key] = (lineno, rest.strip())
            continue
        rows.append((lineno, line.split()))
    return headers, rows


def _header(headers, key: str) -> str:
    if key not in headers:
        raise ParseError(1, "missing %r header" % key)
    return headers[key][1]


def _tokens(lineno: int, text: str, what: str) -> Tuple[str, ...]:
    toks = tuple(text.split())
    for t in toks:
        if not _TOKEN.match(t):
            raise ParseError(lineno, "illegal %s token %r" % (what, t))
    return toks


def _pairs(lineno: int, text: str, what: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for item in text.split():
        name, sep, value = item.partition("=")
        if not sep or not name or not value:
            raise ParseError(lineno, "malformed %s entry %r" % (what, item))
        if name in out:
            raise ParseError(lineno, "duplicate %s entry for %r" % (what, name))
        out[name] = value
    return out


def parse_automaton(text: str):
    """Parse an automaton or regular tree file to its core object."""
    headers, rows = _scan(text)
    ftype = _header(headers, "type")
    if ftype == "regtree":
        return _parse_regtree(headers, rows)
    if ftype == "word":
        return _parse_word(headers, rows)
    if ftype == "tree":
        return _parse_tree(headers, rows)
    raise ParseError(headers["type"][0], "unknown type %r" % ftype)


def _parse_common(headers):
    a_line, _ = headers.get("alphabet", (1, ""))
    alphabet = _tokens(a_line, _header(headers, "alphabet"), "letter")
    s_line, _ = headers.get("states", (1, ""))
    states = _tokens(s_line, _header(headers, "states"), "state")
    initial = _header(headers, "initial")
    p_line, _ = headers.get("priorities", (1, ""))
    pairs = _pairs(p_line, _header(headers, "priorities"), "priority")
    priority: Dict[str, int] = {}
    for name, value in pairs.items():
        if name not in states:
            raise ParseError(p_line, "priority for undeclared state %r" % name)
        if not value.isdigit():
            raise ParseError(p_line, "priority of %r must be a natural, got %r" % (name, value))
        priority[name] = int(value)
    for q in states:
        if q not in priority:
            raise ParseError(p_line, "state %r has no priority" % q)
    return alphabet, states, initial, priority


def _parse_tree(headers, rows) -> TreeAutomaton:
    kind = _header(headers, "kind")
    if kind not in ("nondet", "det", "game"):
        raise ParseError(headers["kind"][0], "unknown tree kind %r" % kind)
    alphabet, states, initial, priority = _parse_common(headers)
    transitions = set()
    for lineno, toks in rows:
        if len(toks) != 5 or toks[2] != "->":
            raise ParseError(lineno, "expected `state letter -> left right`")
        q, x, _, ql, qr = toks
        for s in (q, ql, qr):
            if s not in states:
                raise ParseError(lineno, "undeclared state %r" % s)
        if x not in alphabet:
            raise ParseError(lineno, "undeclared letter %r" % x)
        transitions.add((q, x, ql, qr))
    cls = {"nondet": TreeAutomaton, "det": DeterministicTreeAutomaton,
           "game": GameAutomaton}[kind]
    aut = cls(alphabet, states, initial, priority, frozenset(transitions))
    problems = validate(aut)
    if problems:
        raise ValueError("; ".join(problems))
    return aut


def _parse_word(headers, rows) -> WordAutomaton:
    kind = _header(headers, "kind")
    if kind not in ("nondet", "det"):
        raise ParseError(headers["kind"][0], "unknown word kind %r" % kind)
    alphabet, states, initial, priority = _parse_common(headers)
    transitions = set()
    for lineno, toks in rows:
        if len(toks) != 4 or toks[2] != "->":
            raise ParseError(lineno, "expected `state letter -> target`")
        q, x, _, q2 = toks
        for s in (q, q2):
            if s not in states:
                raise ParseError(lineno, "undeclared state %r" % s)
        if x not in alphabet:
            raise ParseError(lineno, "undeclared letter %r" % x)
        transitions.add((q, x, q2))
    aut = WordAutomaton(alphabet, states, initial, priority, frozenset(transitions))
    problems = check_word_automaton(aut)
    if problems:
        raise ValueError("; ".join(problems))
    if kind == "det" and not (aut.is_deterministic() and aut.is_complete()):
        raise ValueError("file declares kind det but the automaton is not "
                         "deterministic and complete")
    return aut


def _parse_regtree(headers, rows) -> RegularTree:
    n_line, _ = headers.get("nodes", (1, ""))
    nodes = _tokens(n_line, _header(headers, "nodes"), "node")
    root = _header(headers, "root")
    l_line, _ = headers.get("labels", (1, ""))
    labels = _pairs(l_line, _header(headers, "labels"), "label")
    succ: Dict[Tuple[str, str], str] = {}
    for lineno, toks in rows:
        if len(toks) != 4 or toks[2] != "->":
            raise ParseError(lineno, "expected `node direction -> node`")
        n, d, _, m = toks
        if n not in nodes or m not in nodes:
            raise ParseError(lineno, "undeclared node in %r" % " ".join(toks))
        if d not in ("L", "R"):
            raise ParseError(lineno, "direction must be L or R, got %r" % d)
        if (n, d) in succ:
            raise ParseError(lineno, "duplicate successor for (%s, %s)" % (n, d))
        succ[(n, d)] = m
    alphabet = None
    if "alphabet" in headers:
        alphabet = _tokens(headers["alphabet"][0], headers["alphabet"][1], "letter")
    tree = RegularTree(nodes, root, labels, succ)
    problems = check_regular_tree(tree, alphabet)
    if problems:
        raise ValueError("; ".join(problems))
    return tree


# ---------------------------------------------------------------------------
# serialization


def _check_token(value: str, what: str) -> str:
    if not _TOKEN.match(value):
        raise ValueError("%s %r cannot be serialized" % (what, value))
    return value


def serialize_automaton(obj) -> str:
    if isinstance(obj, RegularTree):
        return _serialize_regtree(obj)
    if isinstance(obj, WordAutomaton):
        return _serialize_word(obj)
    if isinstance(obj, TreeAutomaton):
        return _serialize_tree(obj)
    raise TypeError("cannot serialize %r" % type(obj).__name__)


def _serialize_common(lines: List[str], aut) -> None:
    lines.append("alphabet: " + " ".join(_check_token(x, "letter") for x in aut.alphabet))
    lines.append("states: " + " ".join(_check_token(q, "state") for q in aut.states))
    lines.append("initial: %s" % aut.initial)
    lines.append("priorities: " + " ".join("%s=%d" % (q, aut.priority[q])
                                           for q in aut.states))


def _serialize_tree(aut: TreeAutomaton) -> str:
    if isinstance(aut, DeterministicTreeAutomaton):
        kind = "det"
    elif isinstance(aut, GameAutomaton):
        kind = "game"
    else:
        kind = "nondet"
    lines = ["type: tree", "kind: %s" % kind]
    _serialize_common(lines, aut)
    for (q, x, ql, qr) in sorted(aut.transitions):
        lines.append("%s %s -> %s %s" % (q, x, ql, qr))
    return "\n".join(lines) + "\n"


def _serialize_word(aut: WordAutomaton) -> str:
    kind = "det" if aut.is_deterministic() and aut.is_complete() else "nondet"
    lines = ["type: word", "kind: %s" % kind]
    _serialize_common(lines, aut)
    for (q, x, q2) in sorted(aut.transitions):
        lines.append("%s %s -> %s" % (q, x, q2))
    return "\n".join(lines) + "\n"


def _serialize_regtree(tree: RegularTree) -> str:
    letters: List[str] = []
    for n in tree.nodes:
        if tree.label[n] not in letters:
            letters.append(tree.label[n])
    lines = ["type: regtree",
             "alphabet: " + " ".join(_check_token(x, "letter") for x in letters),
             "nodes: " + " ".join(_check_token(n, "node") for n in tree.nodes),
             "root: %s" % tree.root,
             "labels: " + " ".join("%s=%s" % (n, tree.label[n]) for n in tree.nodes)]
    for n in tree.nodes:
        for d in ("L", "R"):
            lines.append("%s %s -> %s" % (n, d, tree.succ[(n, d)]))
    return "\n".join(lines) + "\n"


def serialize_lasso(lasso: Lasso) -> dict:
    return {"prefix": list(lasso.prefix), "loop": list(lasso.loop)}


# ---------------------------------------------------------------------------
# report documents


REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["decision", "variant", "priorities", "separator_path",
                 "verification", "stats"],
    "properties": {
        "decision": {"enum": ["SEPARABLE", "NOT_SEPARABLE"]},
        "variant": {"type": "string"},
        "priorities": {"type": ["array", "null"],
                       "items": {"type": "integer", "minimum": 0}},
        "separator_path": {"type": ["string", "null"]},
        "verification": {
            "type": ["object", "null"],
            "required": ["passed", "shape_ok", "priorities_ok",
                         "containment_ok", "disjointness_ok"],
            "properties": {
                "passed": {"type": "boolean"},
                "shape_ok": {"type": "boolean"},
                "priorities_ok": {"type": "boolean"},
                "containment_ok": {"type": "boolean"},
                "disjointness_ok": {"type": "boolean"},
                "messages": {"type": "array", "items": {"type": "string"}},
            },
        },
        "stats": {"type": "object"},
    },
}


def verification_dict(report) -> dict:
    return {
        "passed": report.passed,
        "shape_ok": report.shape_ok,
        "priorities_ok": report.priorities_ok,
        "containment_ok": report.containment_ok,
        "disjointness_ok": report.disjointness_ok,
        "messages": list(report.messages),
    }


def build_report(decision: bool, variant, separator_path: Optional[str],
                 verification, stats: dict) -> dict:
    cs = sorted(variant.priorities) if variant.priorities else None
    doc = {
        "decision": "SEPARABLE" if decision else "NOT_SEPARABLE",
        "variant": variant.kind,
        "priorities": cs,
        "separator_path": separator_path,
        "verification": verification_dict(verification) if verification else None,
        "stats": {k: v for k, v in stats.items() if _jsonable(v)},
    }
    return doc


def _jsonable(v) -> bool:
    return isinstance(v, (bool, int, float, str, type(None), list, dict))
