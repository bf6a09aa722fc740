import json

import numpy as np
import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from lfamalgam.cli import main
from lfamalgam.errors import CorpusLoadError, NoInverse, ParseError, UnknownSuite
from lfamalgam.io import CORPUS_NAMES, build_corpus, format_group, load_corpus, parse_group_text
from lfamalgam.perm import format_permutation
from lfamalgam.suites import SuiteConfig, run_suite


def test_parse_examples():
    assert parse_group_text("mtable 1\n0").order == 1
    Z2 = parse_group_text("# comment\n\nmtable 2\n0 1\n1 0\n")
    assert Z2.order == 2
    with pytest.raises(NoInverse):
        parse_group_text("mtable 2\n0 1\n1 1")


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("table 2\n0 1\n1 0", 1),
        ("mtable x", 1),
        ("mtable 2\n0 1\n1", 3),
        ("mtable 2\n0 1\n1 0\n0 1", 4),
        ("mtable 2\n0 one\n1 0", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_group_text(text)
    assert info.value.line == line


def test_corpus_matches_constructions():
    loaded = load_corpus()
    assert [G.name for G in loaded] == list(CORPUS_NAMES)
    for G, H in zip(loaded, build_corpus()):
        assert np.array_equal(G.table, H.table)


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_round_trip(name):
    G = next(H for H in load_corpus() if H.name == name)
    again = parse_group_text(format_group(G, comment=name))
    assert np.array_equal(again.table, G.table)


def test_broken_corpus_names_file(tmp_path):
    (tmp_path / "A.mtable").write_text("mtable 1\n0\n")
    (tmp_path / "B.mtable").write_text("mtable 2\n0 1\n1 1\n")
    with pytest.raises(CorpusLoadError, match="B.mtable"):
        load_corpus(tmp_path)
    with pytest.raises(CorpusLoadError):
        load_corpus(tmp_path / "missing")


def test_format_permutation():
    assert format_permutation([0, 1, 2]) == "()"
    assert format_permutation([1, 0]) == "(0 1)"
    assert format_permutation([0, 1, 3, 4, 2]) == "(2 3 4)"
    assert format_permutation([1, 0, 3, 4, 2]) == "(0 1)(2 3 4)"


@given(st.permutations(range(7)))
@settings(max_examples=50)
def test_format_permutation_round_trips(p):
    text = format_permutation(p)
    back = list(range(7))
    if text != "()":
        for cyc in text[1:-1].split(")("):
            pts = [int(v) for v in cyc.split()]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                back[a] = b
            assert pts[0] == min(pts)
    assert back == list(p)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope")


def test_suite_report_is_jsonl_and_repeatable():
    cfg = SuiteConfig()
    a = run_suite("types", None, cfg)
    b = run_suite("types", None, cfg)
    la, lb = list(a.lines()), list(b.lines())
    assert la == lb
    recs = [json.loads(x) for x in la]
    assert {"id", "law", "ref", "instance", "verdict", "witness"} <= set(recs[0])
    assert a.passed
    assert all("wall_s" in json.loads(x) for x in a.lines(timings=True))


# --- command line --------------------------------------------------------------------


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return go


def test_cli_group(run, tmp_path):
    r = run("group", "show", "S3")
    assert r.exit_code == 0 and "mtable 6" in r.output
    bad = tmp_path / "bad.mtable"
    bad.write_text("mtable 2\n0 1\n1 1\n")
    r = run("group", "check", str(bad))
    assert r.exit_code == 2
    good = tmp_path / "good.mtable"
    good.write_text("mtable 2\n0 1\n1 0\n")
    assert run("group", "check", str(good)).exit_code == 0


def test_cli_types(run):
    assert run("type", "equal", "Z4", "--tuple", "1", "--other", "3").output.strip() == "true"
    assert run("type", "equal", "Z4", "--tuple", "1", "--other", "3", "--base", "1").output.strip() == "false"
    r = run("type", "compute", "S3", "--tuple", "1")
    assert r.exit_code == 0 and "tuple: " in r.output
    r = run("split", "check", "Z2xZ2", "--tuple", "1", "--sub", "1,2", "--m-max", "1")
    assert r.output.startswith("splits")


def test_cli_amalgam(run, tmp_path):
    r = run("amalgam", "run", "Z1", "Z2", "Z3")
    assert r.exit_code == 0
    lines = r.output.splitlines()
    assert "mtable 6" in lines and any(l.startswith("j1:") for l in lines)
    r = run("amalgam", "laws", "Z2", "Z4", "D8", "--emb1", "0,2", "--emb2", "0,4")
    assert r.exit_code == 0
    assert all(json.loads(l)["verdict"] == "PASS" for l in r.output.splitlines())
    r = run("amalgam", "run", "Z2", "Z4", "Z4", "--emb1", "0,1")
    assert r.exit_code == 2


def test_cli_tries(run):
    r = run("tries", "list", "Z2", "Z4", "Z4", "--emb1", "0,2", "--emb2", "0,2")
    assert r.output.splitlines()[0] == "# 4 tries"
    a = run("tries", "sample", "Z2", "Z4", "Z4", "--emb1", "0,2", "--emb2", "0,2", "--seed", "5", "--count", "2")
    b = run("tries", "sample", "Z2", "Z4", "Z4", "--emb1", "0,2", "--emb2", "0,2", "--seed", "5", "--count", "2")
    assert a.output == b.output and len(a.output.splitlines()) == 2


def test_cli_schemes_and_nf3(run):
    r = run("scheme", "apply", "cg", "Z2")
    assert "mtable 8" in r.output and r.output.splitlines()[-1].startswith("c: ")
    assert run("scheme", "apply", "gl", "Z3", "--a", "1").exit_code == 2
    r = run("scheme", "apply", "ab", "S3", "--k", "2")
    assert "mtable 12" in r.output
    r = run("nf3", "run", "Z2", "Z4", "D8", "--emb1", "0,2", "--emb2", "0,4", "--L", "0")
    assert r.exit_code == 0 and "family full" in r.output


def test_cli_closure(run, tmp_path):
    out = tmp_path / "o"
    r = run("--out", str(out), "closure", "run", "--steps", "1")
    assert r.exit_code == 0
    assert (out / "chain" / "manifest.txt").exists()
    r = run("closure", "certify", "--chain", str(out / "chain"))
    assert r.exit_code == 1 and r.output.strip().endswith("FAIL")
    r = run("closure", "certify", "--chain", str(out / "chain"), "--margin", "1")
    assert r.exit_code == 0
    r = run("closure", "probe")
    assert r.exit_code == 0 and r.output.strip().endswith("PASS")


def test_cli_suite(run, tmp_path):
    r = run("suite", "run", "nope")
    assert r.exit_code == 2
    rep = tmp_path / "t.jsonl"
    r = run("suite", "run", "types", "--report", str(rep))
    assert r.exit_code == 0
    assert all(json.loads(l)["verdict"] == "PASS" for l in rep.read_text().splitlines())
    broken = tmp_path / "corpus"
    broken.mkdir()
    (broken / "X.mtable").write_text("mtable 2\n0 1\n1 1\n")
    r = run("suite", "run", "types", "--corpus", str(broken))
    assert r.exit_code == 2
