import json
import subprocess
import sys

import pytest

from pnilpotent.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_closed(capsys):
    code, out, _ = run(capsys, "count", "--order", "6", "--method", "closed")
    assert code == 0
    assert json.loads(out) == {"x": 6, "abelian": 3, "type1": 4, "type2": 0, "total": 7, "method": "closed"}


def test_count_methods_agree(capsys):
    _, a, _ = run(capsys, "count", "--order", "4", "--to", "40", "--method", "closed")
    _, b, _ = run(capsys, "count", "--order", "4", "--to", "40", "--method", "brute")
    strip = lambda rows: [{k: v for k, v in r.items() if k != "method"} for r in json.loads(rows)]
    assert strip(a) == strip(b)


def test_catalog_table(capsys):
    code, out, _ = run(capsys, "catalog", "--p", "3", "--order", "5", "--format", "table")
    assert code == 0
    assert len(out.strip().splitlines()) == 2 + 13


def test_catalog_json_deterministic(capsys):
    _, a, _ = run(capsys, "catalog", "--p", "2", "--order", "6")
    _, b, _ = run(capsys, "catalog", "--p", "2", "--order", "6")
    assert a == b and len(json.loads(a)["entries"]) == 23


def test_list_rank2(capsys):
    _, out, _ = run(capsys, "list-rank2", "--order", "8")
    rows = json.loads(out)
    assert [r["label"] for r in rows if r["kind"] == "type II"] == ["G(4,4,3,2)"]


def test_ancestry_commands(capsys):
    code, out, _ = run(capsys, "ancestry-ancestors", "--group", "A(2)", "--max-order", "6")
    assert code == 0
    assert sorted(e["parent"] for e in json.loads(out)["edges"]) == ["G(3,2,2)", "G(3,3,2)", "G(4,2,3)"]
    code, out, _ = run(capsys, "ancestry-branch", "--nbar", "2", "--r", "2", "--depth", "3", "--format", "dot")
    assert code == 0 and out.startswith("digraph") and "G(5,5,2)" in out
    code, out, _ = run(capsys, "ancestry-descend", "--group", "G(5,4,3,2)", "--verify", "3")
    data = json.loads(out)
    assert code == 0 and data["chain"] == ["G(5,4,3,2)", "G(3,4,2)", "A(2)"]
    assert all(v["ok"] for v in data["verified"])


@pytest.mark.parametrize(
    "argv,flag",
    [
        (["catalog", "--p", "4", "--order", "3"], "--p"),
        (["catalog", "--p", "3", "--order", "7"], "--order"),
        (["ancestry-ancestors", "--group", "X(1)", "--max-order", "4"], "--group"),
        (["ancestry-branch", "--nbar", "3", "--r", "2"], "--r"),
        (["verify-all", "--p", "3", "--max-order", "9"], "--max-order"),
    ],
)
def test_usage_errors(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2 and flag in err


def test_argparse_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "pnilpotent.cli", "count"], capture_output=True, text=True)
    assert proc.returncode == 2 and "--order" in proc.stderr


def test_output_file(capsys, tmp_path):
    target = tmp_path / "c.json"
    code, out, _ = run(capsys, "--output", str(target), "count", "--order", "9")
    assert code == 0 and out == "" and json.loads(target.read_text())["total"] == 18


def test_verify_all_failure_exit(capsys, monkeypatch):
    from pnilpotent import suites

    bad = suites.SuiteResult("forced", False, {"failures": ["x"]})
    monkeypatch.setattr(suites, "run_all", lambda *a, **k: [bad])
    code, out, _ = run(capsys, "verify-all", "--p", "3")
    assert code == 1 and json.loads(out)["ok"] is False


@pytest.mark.slow
def test_verify_all_small(capsys):
    code, out, _ = run(
        capsys, "verify-all", "--p", "2", "--max-order", "5", "--rank2-order", "7",
        "--descent-order", "7", "--lambda-primes", "3",
    )
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert [s["name"] for s in data["suites"]] == [
        "count_equivalence", "type1_formula", "type2_display", "catalog_counts", "membership",
        "distinctness", "round_trip", "descendant_sweep", "structural_spot_checks", "property_suite",
    ]
