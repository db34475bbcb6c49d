import json
import subprocess
import sys
from pathlib import Path

import pytest

from ndepth.cli import main

CERT_DIR = Path(__file__).resolve().parents[1] / "certificates"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines()]


def test_solve_human(capsys):
    code, out, _ = run(capsys, "solve", "1", "2", "3")
    assert code == 0
    assert "ndepth       3" in out
    assert "upper bound  3" in out
    assert "closed form  3" in out
    assert "witness      [001]," in out


@pytest.mark.parametrize("argv, value", [(["1", "1", "1", "1", "1"], 3), (["2", "2", "2", "2"], 4)])
def test_solve_records(capsys, argv, value):
    code, out, _ = run(capsys, "solve", *argv, "--format", "records")
    (rec,) = records(out)
    assert code == 0 and rec["value"] == value and rec["status"] == "ok"
    assert all(iv.startswith("[") for iv in rec["witness"])


def test_solve_chain(capsys):
    _, out, _ = run(capsys, "solve", "--chain", "3", "4", "--format", "records")
    assert records(out)[0]["value"] == 4


def test_solve_node_limit_exit_code(capsys):
    code, out, _ = run(capsys, "solve", "1", "1", "1", "1", "1", "1", "--node-limit", "3", "--format", "records")
    assert code == 3
    rec = records(out)[0]
    assert rec["status"] == "resource-exhausted" and rec["value_at_most"] >= 3


def test_solve_usage_errors(capsys):
    assert run(capsys, "solve")[0] == 2
    assert run(capsys, "solve", "1", "2", "--chain", "2", "2")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["solve", "0"])
    assert info.value.code == 2


def test_bound_and_formula(capsys):
    assert run(capsys, "bound", "1", "2", "3")[1].strip() == "3"
    assert run(capsys, "formula", "1", "2", "3", "4")[1].strip() == "6"
    assert run(capsys, "formula", "--chain", "2", "5")[1].strip() == "3"
    code, _, err = run(capsys, "formula", "1", "1", "1", "1", "1", "1")
    assert code == 2 and "no closed form" in err


def test_certify_corpus_with_errata(capsys):
    code, out, _ = run(capsys, "certify", "--paper-corpus", "--allow-errata", "--format", "records")
    assert code == 0
    summary = records(out)[-1]
    assert summary["checked"] == 11
    assert summary["claims_verified"] == 10
    assert summary["structure_ok"] == 10  # example-5.4 as printed overlaps itself
    assert summary["documented_discrepancies"] == 2
    assert summary["erratum_variants_verified"] == 2
    statuses = {r["name"]: r["status"] for r in records(out) if r["kind"] == "certificate" and r["source"] == "paper"}
    assert statuses["example-5.1"] == "documented-discrepancy"


def test_certify_corpus_without_errata_fails(capsys):
    assert run(capsys, "certify", "--paper-corpus")[0] == 1


def test_certify_file(capsys):
    code, out, _ = run(capsys, "certify", str(CERT_DIR / "example-3.1.cert"))
    assert code == 0 and "[verified]" in out


def test_certify_broken_file(capsys, tmp_path):
    broken = tmp_path / "broken.cert"
    broken.write_text('{"name": "b", "k": 3, "intervals": ["[012]"], "claim": {"type": "minterm", "sets": [[3]]}}')
    code, out, _ = run(capsys, "certify", str(broken))
    assert code == 1
    assert "parse error" in out and "invalid character" in out


def test_certify_missing_file(capsys, tmp_path):
    assert run(capsys, "certify", str(tmp_path / "nope.cert"))[0] == 2


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "3")
    assert code == 0
    assert out.splitlines()[0] == "max( min(<3>), min(<12>) )"
    assert "vs exact solver" in out
    assert run(capsys, "derive", "2")[1].splitlines()[0] == "max( min(<2>) )"


def test_derive_k5_refused(capsys):
    code, _, err = run(capsys, "derive", "5")
    assert code == 3 and "exact solver" in err


@pytest.mark.parametrize("k, m, rows", [(4, 3, 15), (2, 4, 10), (5, 2, 6)])
def test_sweep(capsys, k, m, rows):
    code, out, _ = run(capsys, "sweep", str(k), str(m), "--format", "records")
    recs = records(out)
    assert code == 0
    assert recs[-1] == {"kind": "sweep-summary", "k": k, "max_entry": m, "instances": rows, "disagreements": 0}
    assert all(r["agree"] for r in recs[:-1])


def test_sweep_threads_keep_order(capsys):
    _, serial, _ = run(capsys, "sweep", "3", "3", "--format", "records")
    _, parallel, _ = run(capsys, "sweep", "3", "3", "--format", "records", "--threads", "3")
    assert serial == parallel


def test_sweep_limits(capsys):
    assert run(capsys, "sweep", "6", "2")[0] == 2
    assert run(capsys, "sweep", "5", "4", "--max-instances", "3")[0] == 3


def test_threads_env_default(monkeypatch, capsys):
    monkeypatch.setenv("NDEPTH_THREADS", "2")
    from ndepth.cli import build_parser

    assert build_parser().parse_args(["solve", "1"]).threads == 2


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


def _solve_subprocess():
    return subprocess.run(
        [sys.executable, "-m", "ndepth", "solve", "1", "1", "2", "3", "5",
         "--format", "records", "--deterministic-witness"],
        capture_output=True, check=True,
    ).stdout


def test_deterministic_output_across_processes():
    first, second = _solve_subprocess(), _solve_subprocess()
    assert first == second
    assert b"elapsed" not in first
