import json
import random
from pathlib import Path

import jsonschema
import pytest

from treesep import (
    REPORT_SCHEMA, DeterministicTreeAutomaton, Lasso, ParseError, RegularTree,
    TreeAutomaton, Variant, WordAutomaton, build_report, decide_separability,
    parse_automaton, parity_game_to_pgsolver, ParityGame, regular_tree_member,
    serialize_automaton, serialize_lasso, verify_separator,
)
from treesep.cli import InputError, main, parse_priorities
from treesep.corpus import (
    all_a_tree, default_seed, random_regular_tree, random_tree_automaton,
    random_word_npa, safety_all_a, some_b, word_infinitely_b,
)
from treesep.separability import TREE_DET_C, TREE_GAME

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


# ---------------------------------------------------------------------------
# formats


def test_corpus_files_roundtrip_exactly():
    files = sorted(CORPUS.glob("*"))
    assert len(files) >= 10
    for path in files:
        text = path.read_text()
        obj = parse_automaton(text)
        assert serialize_automaton(obj) == text, path.name


def test_safety_fixture_file_equality():
    parsed = parse_automaton((CORPUS / "safety_all_a.aut").read_text())
    fixture = safety_all_a()
    assert isinstance(parsed, DeterministicTreeAutomaton)
    assert parsed.alphabet == fixture.alphabet
    assert parsed.states == fixture.states
    assert parsed.initial == fixture.initial
    assert dict(parsed.priority) == dict(fixture.priority)
    assert parsed.transitions == fixture.transitions


def test_roundtrip_preserves_structure_on_randoms():
    rng = random.Random(default_seed() + 90)
    objs = [random_tree_automaton(rng) for _ in range(8)]
    objs += [random_word_npa(rng) for _ in range(8)]
    objs += [random_regular_tree(rng) for _ in range(8)]
    objs += [some_b(), safety_all_a(), word_infinitely_b(), all_a_tree()]
    for obj in objs:
        back = parse_automaton(serialize_automaton(obj))
        assert type(back).__name__ == type(obj).__name__
        if isinstance(obj, RegularTree):
            assert back.root == obj.root
            assert dict(back.label) == dict(obj.label)
            assert dict(back.succ) == dict(obj.succ)
        else:
            assert set(back.states) == set(obj.states)
            assert back.initial == obj.initial
            assert dict(back.priority) == dict(obj.priority)
            assert back.transitions == obj.transitions


def test_parse_errors_carry_line_numbers():
    base = ("type: tree\n" "kind: nondet\n" "alphabet: a b\n" "states: q\n"
            "initial: q\n" "priorities: q=0\n")
    with pytest.raises(ParseError) as err:
        parse_automaton(base + "q a -> q q\nq c -> q q\n")
    assert err.value.line == 8
    assert "undeclared letter" in str(err.value)
    with pytest.raises(ParseError) as err:
        parse_automaton(base + "q a -> ghost q\n")
    assert err.value.line == 7
    with pytest.raises(ParseError) as err:
        parse_automaton(base + "q a -> q\n")
    assert err.value.line == 7
    with pytest.raises(ParseError) as err:
        parse_automaton("kind: nondet\nalphabet: a\n")
    assert "type" in str(err.value)


def test_parse_rejects_duplicate_headers_and_bad_priorities():
    with pytest.raises(ParseError):
        parse_automaton("type: tree\ntype: tree\nkind: nondet\nalphabet: a\n"
                        "states: q\ninitial: q\npriorities: q=0\nq a -> q q\n")
    with pytest.raises(ParseError) as err:
        parse_automaton("type: tree\nkind: nondet\nalphabet: a\nstates: q\n"
                        "initial: q\npriorities: q=0 ghost=1\nq a -> q q\n")
    assert "undeclared" in str(err.value)
    with pytest.raises(ParseError) as err:
        parse_automaton("type: tree\nkind: nondet\nalphabet: a\nstates: q r\n"
                        "initial: q\npriorities: q=0\nq a -> q q\n")
    assert "no priority" in str(err.value)


def test_parse_comments_and_blank_lines():
    text = ("# corpus automaton\n" "type: tree\n" "kind: nondet\n" "\n"
            "alphabet: a b   # two letters\n" "states: q\n" "initial: q\n"
            "priorities: q=0\n" "q a -> q q  # loop\n" "q b -> q q\n")
    obj = parse_automaton(text)
    assert isinstance(obj, TreeAutomaton)
    assert len(obj.transitions) == 2


def test_parse_kind_mismatch_delegates_to_validate():
    # declared det but carries a nondeterministic double transition
    text = ("type: tree\nkind: det\nalphabet: a\nstates: q r TOP\ninitial: q\n"
            "priorities: q=0 r=0 TOP=0\n"
            "q a -> q q\nq a -> r r\nr a -> r r\nTOP a -> TOP TOP\n")
    with pytest.raises(ValueError):
        parse_automaton(text)


def test_word_kind_det_requires_determinism():
    text = ("type: word\nkind: det\nalphabet: a\nstates: q\ninitial: q\n"
            "priorities: q=0\n")
    with pytest.raises(ValueError):
        parse_automaton(text)  # incomplete: no transition on a


def test_regtree_parse_checks():
    good = ("type: regtree\nnodes: n0 n1\nroot: n0\nlabels: n0=a n1=b\n"
            "n0 L -> n1\nn0 R -> n0\nn1 L -> n1\nn1 R -> n1\n")
    tree = parse_automaton(good)
    assert isinstance(tree, RegularTree)
    assert tree.letter("n0") == "a"
    with pytest.raises(ParseError):
        parse_automaton(good + "n1 R -> n0\n")  # duplicate successor
    with pytest.raises(ValueError):
        parse_automaton("type: regtree\nnodes: n0\nroot: n0\nlabels: n0=a\n"
                        "n0 L -> n0\n")  # missing R successor


def test_serialize_lasso_shape():
    doc = serialize_lasso(Lasso(("a",), ("b", "a")))
    assert doc == {"prefix": ["a"], "loop": ["b", "a"]}


def test_report_schema_is_valid_and_enforced():
    jsonschema.Draft7Validator.check_schema(REPORT_SCHEMA)
    doc = build_report(True, Variant(TREE_DET_C, frozenset({0, 1})),
                       "sep.aut", None, {"solve_seconds": 0.1, "junk": object()})
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["decision"] == "SEPARABLE"
    assert doc["priorities"] == [0, 1]
    assert "junk" not in doc["stats"]
    bad = dict(doc)
    bad["decision"] = "MAYBE"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, REPORT_SCHEMA)


def test_report_includes_verification_block():
    a, b = some_b(), safety_all_a()
    r = decide_separability(Variant(TREE_GAME), a, b)
    report = verify_separator(a, b, r.separator, Variant(TREE_GAME))
    doc = build_report(True, Variant(TREE_GAME), None, report, r.stats)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verification"]["passed"] is True


def test_parse_priorities_syntaxes():
    assert parse_priorities("0,1,2") == frozenset({0, 1, 2})
    assert parse_priorities("0..2") == frozenset({0, 1, 2})
    assert parse_priorities("4") == frozenset({4})
    for bad in ("", "2..0", "a,b", "-1,0", "0..x"):
        with pytest.raises(InputError):
            parse_priorities(bad)


# ---------------------------------------------------------------------------
# cli


def aut(name: str) -> str:
    return str(CORPUS / name)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_decide_discriminating_pair(capsys, tmp_path):
    code, out, _ = run(capsys, ["decide", "--variant", "det",
                                "--a", aut("some_b.aut"), "--b", aut("safety_all_a.aut")])
    assert code == 0
    assert out.splitlines()[0] == "NOT_SEPARABLE"

    sep = tmp_path / "sep.aut"
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, ["decide", "--variant", "game",
                                "--a", aut("some_b.aut"), "--b", aut("safety_all_a.aut"),
                                "--separator", str(sep), "--verify",
                                "--json", str(report)])
    assert code == 0
    assert out.splitlines()[0] == "SEPARABLE"
    doc = json.loads(report.read_text())
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["decision"] == "SEPARABLE"
    assert doc["separator_path"] == str(sep)
    assert doc["verification"]["passed"] is True

    code, out, _ = run(capsys, ["verify", "--a", aut("some_b.aut"),
                                "--b", aut("safety_all_a.aut"),
                                "--separator", str(sep)])
    assert code == 0
    assert out.strip() == "PASS"


def test_cli_decide_det_c_safety_pair(capsys, tmp_path):
    sep = tmp_path / "sep.aut"
    code, out, _ = run(capsys, ["decide", "--variant", "det-c", "--priorities", "0,1",
                                "--a", aut("safety_all_a.aut"), "--b", aut("some_b.aut"),
                                "--separator", str(sep)])
    assert code == 0
    assert out.splitlines()[0] == "SEPARABLE"
    code, out, _ = run(capsys, ["verify", "--a", aut("safety_all_a.aut"),
                                "--b", aut("some_b.aut"), "--separator", str(sep),
                                "--variant", "det-c", "--priorities", "0,1"])
    assert code == 0


def test_cli_decide_word_variant_with_range_syntax(capsys, tmp_path):
    sep = tmp_path / "wsep.aut"
    code, out, _ = run(capsys, ["decide", "--variant", "word-det-c",
                                "--priorities", "1..2",
                                "--a", aut("word_inf_b.aut"), "--b", aut("word_fin_b.aut"),
                                "--separator", str(sep), "--verify"])
    assert code == 0
    assert out.splitlines()[0] == "SEPARABLE"
    parsed = parse_automaton(sep.read_text())
    assert isinstance(parsed, WordAutomaton)
    assert set(parsed.priority.values()) <= {1, 2}


def test_cli_flag_validation(capsys):
    code, _, err = run(capsys, ["decide", "--variant", "det-c",
                                "--a", aut("root_a.aut"), "--b", aut("root_b.aut")])
    assert code == 2
    assert "--priorities is required" in err
    code, _, err = run(capsys, ["decide", "--variant", "det", "--priorities", "0,1",
                                "--a", aut("root_a.aut"), "--b", aut("root_b.aut")])
    assert code == 2
    assert "not accepted" in err
    code, _, err = run(capsys, ["decide", "--variant", "game", "--universally-rejecting",
                                "--a", aut("root_a.aut"), "--b", aut("root_b.aut")])
    assert code == 2
    assert "requires --variant det-c" in err


def test_cli_universally_rejecting_flag(capsys):
    code, out, _ = run(capsys, ["decide", "--variant", "det-c", "--priorities", "0,1",
                                "--universally-rejecting",
                                "--a", aut("safety_all_a.aut"), "--b", aut("some_b.aut")])
    assert code == 0
    assert out.splitlines()[0] == "NOT_SEPARABLE"
    code, out, _ = run(capsys, ["decide", "--variant", "det-c", "--priorities", "0,1",
                                "--universally-rejecting",
                                "--a", aut("root_a.aut"), "--b", aut("root_b.aut")])
    assert code == 0
    assert out.splitlines()[0] == "SEPARABLE"


def test_cli_verify_failure_writes_counterexample(capsys, tmp_path):
    universal_sep = tmp_path / "universal.aut"
    universal_sep.write_text(serialize_automaton(DeterministicTreeAutomaton(
        ("a", "b"), ("s", "TOP"), "s", {"s": 0, "TOP": 0},
        frozenset({("s", "a", "s", "s"), ("s", "b", "s", "s"),
                   ("TOP", "a", "TOP", "TOP"), ("TOP", "b", "TOP", "TOP")}))))
    cex = tmp_path / "cex.regt"
    code, out, _ = run(capsys, ["verify", "--a", aut("some_b.aut"),
                                "--b", aut("safety_all_a.aut"),
                                "--separator", str(universal_sep),
                                "--counterexample", str(cex)])
    assert code == 1
    assert out.startswith("FAIL")
    assert str(cex) in out
    tree = parse_automaton(cex.read_text())
    assert isinstance(tree, RegularTree)
    assert regular_tree_member(safety_all_a(), tree)


def test_cli_witness_and_member(capsys, tmp_path):
    out_tree = tmp_path / "w.regt"
    code, out, _ = run(capsys, ["witness", "--a", aut("safety_all_a.aut"),
                                "--out", str(out_tree)])
    assert code == 0
    code, out, _ = run(capsys, ["member", "--automaton", aut("safety_all_a.aut"),
                                "--tree", str(out_tree)])
    assert code == 0
    assert out.strip() == "true"
    code, out, _ = run(capsys, ["member", "--automaton", aut("safety_all_a.aut"),
                                "--tree", aut("one_b.regt")])
    assert code == 0
    assert out.strip() == "false"
    code, _, err = run(capsys, ["witness", "--a", aut("empty.aut"),
                                "--out", str(out_tree)])
    assert code == 1
    assert "empty" in err


def test_cli_member_all_a(capsys):
    code, out, _ = run(capsys, ["member", "--automaton", aut("safety_all_a.aut"),
                                "--tree", aut("all_a.regt")])
    assert code == 0
    assert out.strip() == "true"


def test_cli_determinize(capsys, tmp_path):
    out_file = tmp_path / "dpa.aut"
    code, out, _ = run(capsys, ["determinize", "--in", aut("word_fin_b.aut"),
                                "--out", str(out_file)])
    assert code == 0
    assert out.startswith("states=")
    dpa = parse_automaton(out_file.read_text())
    assert dpa.is_deterministic() and dpa.is_complete()


def test_cli_solve_game(capsys, tmp_path):
    game_file = tmp_path / "g.pg"
    game_file.write_text(parity_game_to_pgsolver(
        ParityGame([0, 1], [2, 1], [[1], [0]])))
    code, out, _ = run(capsys, ["solve-game", "--in", str(game_file)])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert all("winner=" in ln for ln in lines)


def test_cli_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, ["decide", "--variant", "det",
                                "--a", str(tmp_path / "missing.aut"),
                                "--b", aut("some_b.aut")])
    assert code == 2
    assert "error:" in err
    bad = tmp_path / "bad.aut"
    bad.write_text("states: q\n")
    code, _, err = run(capsys, ["decide", "--variant", "det", "--a", str(bad),
                                "--b", aut("some_b.aut")])
    assert code == 2
    assert "line" in err


def test_cli_verify_failure_aborts_before_writing(capsys, tmp_path, monkeypatch):
    import treesep.cli as cli_module
    from treesep.verify import VerificationReport

    def failing_verify(a, b, separator, variant):
        return VerificationReport(variant.kind, True, True, False, True,
                                  None, None, ["forced failure"])

    monkeypatch.setattr(cli_module, "verify_separator", failing_verify)
    sep = tmp_path / "sep.aut"
    report = tmp_path / "report.json"
    code, out, err = run(capsys, ["decide", "--variant", "game",
                                  "--a", aut("some_b.aut"), "--b", aut("safety_all_a.aut"),
                                  "--separator", str(sep), "--verify",
                                  "--json", str(report)])
    assert code == 1
    assert "SEPARABLE" not in out
    assert not sep.exists()
    assert not report.exists()
    assert "verification failed" in err


def test_seed_env_var(monkeypatch):
    monkeypatch.setenv("TREESEP_SEED", "12345")
    assert default_seed() == 12345
    monkeypatch.delenv("TREESEP_SEED")
    assert default_seed() == 20260817
