from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES
from lambert_divisors.cli import main, parse_markdown_table


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["compute", "sigma", "--alpha", "1", "--n", "12"], "28"),
        (["compute", "sigma-bounded", "--alpha", "sym", "--m", "3", "--n", "12"], "1 + 2^a + 3^a + 4^a"),
        (["compute", "B", "--alpha", "0", "--k", "2", "--m", "1", "--n", "4"], "14"),
        (["compute", "stirling", "--kind", "1", "--n", "5", "--k", "2"], "50"),
        (["series", "coeff", "--gf", "lambert", "--alpha", "1", "--m", "2", "--k", "1", "--at", "6"], "12"),
        (["series", "coeff", "--gf", "F", "--alpha", "0", "--at", "12"], "6"),
        (["series", "coeff", "--gf", "F", "--alpha", "sym", "--at", "12"], "1 + 2^a + 3^a + 4^a + 6^a + 12^a"),
    ],
)
def test_single_values(argv, expected):
    code, out, _ = run(*argv)
    assert code == 0
    assert out.splitlines()[0] == expected


def test_series_tags():
    code, out, _ = run("series", "coeff", "--gf", "S4", "--alpha", "1", "--s", "2", "--at", "5")
    assert code == 0
    assert "method=oracle" in out and "variant=exponent=proof" in out
    code, out, _ = run("series", "coeff", "--gf", "S4", "--alpha", "sym", "--s", "2", "--at", "1..3", "--format", "json-lines")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["method"] for r in rows] == ["bounded"] * 3


def test_table_golden_file():
    code, out, _ = run("table", "bounded-sigma")
    assert code == 0
    assert out == (FIXTURES / "table1.md").read_text()


def test_table_cells():
    _, out, _ = run("table", "bounded-sigma")
    rows = {r[0]: r[1:] for r in parse_markdown_table(out)[1:]}
    assert rows["6"][1] == "1 + 2^a + 3^a"
    assert rows["5"][1] == "1"


def test_csv_round_trip_equals_markdown():
    _, md, _ = run("table", "bounded-sigma", "--format", "markdown")
    _, text, _ = run("table", "bounded-sigma", "--format", "csv")
    assert list(csv.reader(io.StringIO(text))) == parse_markdown_table(md)
    _, jl, _ = run("table", "bounded-sigma", "--n-max", "3", "--format", "json-lines")
    assert json.loads(jl.splitlines()[1]) == {"n": "2", "m=1": "1 + 2^a", "m=2": "1", "m=3": "0", "m=4": "0"}


def test_compute_ranges():
    code, out, _ = run("compute", "sigma", "--alpha", "0", "--n", "1..6", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1:] == ["1,1", "2,2", "3,2", "4,3", "5,2", "6,4"]


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "sigma", "--n", "0"],
        ["compute", "sigma", "--n", "5..2"],
        ["compute", "sigma", "--n", "x"],
        ["compute", "sigma", "--alpha", "nan?", "--n", "3"],
        ["compute", "nope", "--n", "3"],
        ["table", "bounded-sigma", "--n-max", "0"],
        ["series", "coeff", "--gf", "F", "--alpha", "1", "--at", "20", "--order", "10"],
        ["series", "coeff", "--gf", "F", "--alpha", "1", "--at", "2", "--order", "513"],
        ["series", "coeff", "--gf", "S4", "--alpha", "sym", "--at", "2", "--method", "oracle"],
        ["series", "coeff", "--gf", "L", "--alpha", "1", "--at", "2", "--method", "bounded"],
        ["verify", "no-such-id"],
        ["verify", "lemma-3.1", "--grid", "i=1..x"],
        ["verify", "prop-2.4", "--variant", "exponent=bogus"],
        [],
    ],
)
def test_usage_errors_exit_two(argv):
    code, _, err = run(*argv)
    assert code == 2
    assert err


def test_unknown_identity_lists_catalog():
    _, _, err = run("verify", "no-such-id")
    assert "telescoping-sigma" in err and "eisenstein-sigma5" in err


_tokens = st.sampled_from(
    ["compute", "table", "series", "verify", "list", "sigma", "B", "coeff", "--n", "--m", "--k",
     "--alpha", "--at", "--gf", "--order", "--format", "-1", "0", "1..", "..", "a", "sym", "csv",
     "xml", "--grid", "=", "S9", "bounded-sigma", "identities", "--n-max", "1e9"]
)


@given(st.lists(_tokens, max_size=6))
def test_malformed_flags_never_crash(argv):
    code, _, _ = run(*argv)
    assert code in (0, 1, 2)


def test_verify_exit_codes_and_summary():
    code, out, _ = run("verify", "telescoping-sigma")
    assert code == 0 and out.strip() == "telescoping-sigma: pass (100 points)"
    code, _, _ = run("verify", "lemma-3.2-i", "--grid", "s=0..1,i=1..2,N=12")
    assert code == 1
    # derived identities decide the exit code only under --strict
    code, _, _ = run("verify", "cor-2.7", "--grid", "s=2,x=1..4,alpha=1")
    assert code == 0
    code, _, _ = run("verify", "cor-2.7", "--grid", "s=2,x=1..4,alpha=1", "--strict")
    assert code == 1


def test_verify_auto_prints_resolution_evidence():
    code, out, _ = run("verify", "prop-2.4", "--grid", "s=1,x=1..3,alpha=1")
    assert code == 0
    assert out.startswith("variant auto-resolution: exponent=proof,denominator=sr,shift=p2,s_factor=s")
    assert "exponent=def,denominator=sr,shift=p1,s_factor=s: prop-2.4 3/135" in out


def test_verify_writes_report(tmp_path):
    path = tmp_path / "report.json"
    code, _, _ = run("verify", "eisenstein-sigma3", "--out", str(path), "--deterministic")
    assert code == 0
    doc = json.loads(path.read_text())
    assert len(doc) == 1 and doc[0]["verdict"] == "pass" and doc[0]["elapsed_ms"] is None


def test_list_identities():
    code, out, _ = run("list", "identities")
    assert code == 0 and len(out.splitlines()) == 30


def test_module_entry_point_is_byte_deterministic():
    cmd = [sys.executable, "-m", "lambert_divisors", "verify", "lemma-3.4-iv", "--out", "-", "--deterministic"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0
    assert first.stdout == second.stdout
