import csv
import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from qespoly import cli


def run_cli(*argv):
    out = io.StringIO()
    try:
        code = cli.run(list(argv), stdout=out)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue()


def run_process(*argv, workers=None):
    env = dict(os.environ)
    if workers is not None:
        env["QES_WORKERS"] = str(workers)
    proc = subprocess.run([sys.executable, "-m", "qespoly", *argv], capture_output=True, env=env,
                          timeout=600)
    return proc.returncode, proc.stdout


def test_catalog_list_and_show():
    code, out = run_cli("catalog", "list", "--emit", "json")
    assert code == 0
    fams = {f["family"] for f in json.loads(out)["families"]}
    assert {"J", "Q", "S", "Wplus"} <= fams
    code, out = run_cli("catalog", "show", "J", "--n", "2", "--m", "1", "--emit", "json")
    payload = json.loads(out)
    assert code == 0 and [o["name"] for o in payload["operators"]] == ["J+", "J0", "J-"]
    assert run_cli("catalog", "show", "nope")[0] == 1
    assert run_cli("catalog", "list", "J")[0] == 1


def test_invariance_exit_codes():
    code, out = run_cli("invariance", "--op", "J+", "--space", "v1", "--n", "3", "--m", "2")
    assert code == 0 and "invariant" in out
    # Qbar moves P_n into the x^a sector
    code, out = run_cli("invariance", "--op", "Qbar:0", "--space", "pn", "--n", "2", "--m", "2",
                        "--a", "7/3")
    assert code == 2 and "NOT invariant" in out


def test_algebra_text_report():
    code, out = run_cli("algebra", "--relation", "nlalgebra", "--n", "2", "--m", "2")
    assert code == 0
    assert "holds: true" in out and "alpha: -4" in out
    code, out = run_cli("algebra", "--relation", "Q_D_shifted", "--n", "2", "--m", "2")
    assert code == 2 and "holds: false" in out


@pytest.mark.parametrize("argv", [
    ("spectrum", "--case", "lame", "--k2", "0.33"),
    ("invariance", "--op", "J+", "--a", "2.5"),
    ("recurrence", "--case", "polypot", "--m", "2.0"),
    ("verify", "--case", "lame", "--delta", "1e-1"),
])
def test_floats_are_rejected(argv):
    assert run_cli(*argv)[0] == 1


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("spectrum", "--case", "lame", "--unknown-flag", "1"),
    ("spectrum", "--case", "lame", "--k2", "3/2"),
    ("hamiltonian", "show", "--case", "polypot", "--m", "2,3"),
    ("invariance", "--op", "Z+"),
    ("verify", "--case", "harmonic", "--grid", "10"),
    ("recurrence", "--case", "polypot", "--m", "1"),
])
def test_invalid_input_exits_one(argv):
    assert run_cli(*argv)[0] == 1


def test_bad_worker_count(monkeypatch):
    monkeypatch.setenv("QES_WORKERS", "zero")
    assert run_cli("spectrum", "--case", "lame")[0] == 1


def test_tolerance_accepts_a_float():
    code, out = run_cli("verify", "--case", "harmonic", "--tol", "1e-5", "--emit", "text")
    assert code == 0 and "all algebraic levels found" in out


JSON_COMMANDS = [
    ("catalog", "show", "S", "--n", "2", "--m", "1"),
    ("catalog", "list"),
    ("invariance", "--op", "Q:1", "--n", "2", "--m", "3", "--a", "7/3"),
    ("algebra", "--relation", "so3", "--n", "3"),
    ("hamiltonian", "show", "--case", "polypot", "--m", "3"),
    ("hamiltonian", "show", "--case", "bose-hubbard"),
    ("recurrence", "--case", "lame", "--upto", "4"),
    ("spectrum", "--case", "bose-hubbard", "--alpha", "1/2", "--bosons", "4"),
    ("verify", "--case", "polypot", "--m", "2"),
]


@pytest.mark.parametrize("argv", JSON_COMMANDS)
def test_json_payloads_validate_against_shipped_schemas(argv):
    code, out = run_cli(*argv, "--emit", "json")
    assert code in (0, 2)
    payload = json.loads(out)
    jsonschema.validate(payload, cli.load_schema(argv[0]))
    assert payload["command"] == argv[0]


def test_verify_csv_columns():
    code, out = run_cli("verify", "--case", "lame", "--m", "1", "--delta", "1/2", "--k2", "1/3",
                        "--emit", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["case", "m", "delta", "k2", "level_index", "algebraic", "numeric", "residual"]
    assert len(rows) == 1 + 4
    for r in rows[1:]:
        assert r[:4] == ["lame", "1", "1/2", "1/3"]
        assert abs(float(r[5]) - float(r[6])) < 1e-6 * max(1, abs(float(r[5])))
        assert float(r[7]) < 1e-6


def test_recurrence_csv_is_exact():
    code, out = run_cli("recurrence", "--case", "polypot", "--m", "2", "--emit", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][:5] == ["case", "m", "p2", "p1", "kappa0"]
    for r in rows[1:]:
        assert "." not in r[-1]


def test_output_is_byte_identical_across_runs():
    argv = ("spectrum", "--case", "polypot", "--m", "2,3", "--emit", "json")
    first, second = run_process(*argv), run_process(*argv)
    assert first[0] == 0 and first == second


def test_worker_pool_matches_sequential_sweep():
    argv = ("verify", "--case", "bose-hubbard", "--alpha", "1,1/2", "--bosons", "3,4",
            "--emit", "csv")
    seq = run_process(*argv, workers=1)
    par = run_process(*argv, workers=3)
    assert seq[0] == 0 and seq == par
    assert len(seq[1].decode().strip().splitlines()) == 1 + (4 + 5) * 2
