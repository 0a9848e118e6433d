import json
import subprocess
import sys
from pathlib import Path

import pytest

from chaundy.cli import SuiteConfig, dumps, emit_latex, main, parse_vectors, run_suite
from chaundy.errors import UsageError

GOLDEN = Path(__file__).parent / "golden" / "mc_m4_n6_x0.3_seed42.jsonl"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_onevar_grid(capsys):
    code, out, _ = run(capsys, "verify", "onevar", "--max-mn", "3")
    lines = [json.loads(line) for line in out.splitlines()]
    reports, summary = lines[:-1], lines[-1]
    assert code == 0
    assert len(reports) == 16
    assert all(r["status"] == "exact-pass" for r in reports)
    assert summary["summary"] and summary["passed"] == 16
    assert [(r["params"]["m"], r["params"]["n"]) for r in reports] == sorted(
        (r["params"]["m"], r["params"]["n"]) for r in reports
    )


def test_injected_fault_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "onevar", "--m", "1", "--n", "0:1", "--inject-fault")
    first = json.loads(out.splitlines()[0])
    assert code == 1
    assert first["status"] == "fail" and first["witness"]


@pytest.mark.parametrize("argv", [
    ["verify", "onevar", "--m", "x", "--n", "1"],
    ["verify", "onevar"],
    ["mc", "--x", "0.3", "--m", "4", "--n", "6"],
    ["numeric", "threeterm", "--alpha", "1", "--m", "1", "--n", "1", "--z", "0.5"],
    ["verify", "multivar"],
    ["verify", "onevar", "--max-mn", "1", "--format", "latex"],
    ["emit", "onevar", "--m", "1"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.startswith("chaundy: error:")


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_mc_matches_golden(capsys):
    code, out, _ = run(capsys, "mc", "--x", "0.3", "--m", "4", "--n", "6",
                       "--trials", "1000000", "--seed", "42", "--no-timing")
    assert code == 0
    assert out == GOLDEN.read_text(encoding="utf-8")
    report = json.loads(out.splitlines()[0])
    assert report["details"]["rng"].startswith("numpy.random.Philox")


def test_reports_round_trip(capsys):
    _, out, _ = run(capsys, "verify", "dirichlet", "--a", "0:1,1,1")
    for line in out.splitlines():
        assert dumps(json.loads(line)) == line


def test_determinism(capsys):
    argv = ["sweep", "--max-mn", "2", "--no-timing"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_worker_pool_preserves_order(capsys, monkeypatch):
    _, serial, _ = run(capsys, "verify", "paths", "--max-mn", "3", "--no-timing")
    monkeypatch.setenv("CHAUNDY_WORKERS", "2")
    _, parallel, _ = run(capsys, "verify", "paths", "--max-mn", "3", "--no-timing")
    assert serial == parallel


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "verify", "multivar", "--a", "1,2,1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text().splitlines()[-1])["passed"] == 1


def test_numeric_commands(capsys):
    code, out, _ = run(capsys, "numeric", "ext", "--m", "0.5+0.2i", "--n", "1.3",
                       "--x", "0.2,0.6")
    assert code == 0 and len(out.splitlines()) == 5
    code, _, _ = run(capsys, "numeric", "threeterm", "--alpha", "1.5", "--m", "0:2",
                     "--n", "3", "--z", "2+3i")
    assert code == 0
    code, _, _ = run(capsys, "numeric", "ode", "--alpha", "0.5", "--m", "0",
                     "--n", "2", "--z", "3-0.5i")
    assert code == 0


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "pde", "--a", "1,1,1", "--format", "text")
    assert code == 0
    assert out.splitlines()[-1] == "# pde: 1/1 passed"


def test_emit_latex():
    text = emit_latex("onevar", {"m": 1, "n": 1})
    assert "1 - 3x^{2} + 2x^{3}" in text and "3x^{2} - 2x^{3}" in text
    assert emit_latex("onevar", {"m": 1, "n": 1}) == text
    multi = emit_latex("multivar", {"a": [0, 0]})
    assert "x_{1}" in multi and "x_{2}" in multi and "x_1+x_2=1" in multi
    three = emit_latex("threeterm", {"alpha": 1.5, "m": 1, "n": 1})
    assert "{}_2F_1" in three and "-1.5" in three
    with pytest.raises(UsageError):
        emit_latex("nope", {})


def test_emit_json(capsys):
    code, out, _ = run(capsys, "emit", "lauricella", "--a", "1,1,0")
    assert code == 0
    assert json.loads(out)["table"]["entries"] == [["1", "1"], ["1", "2"]]
    code, out, _ = run(capsys, "emit", "dirichlet", "--a", "0,0,0")
    obj = json.loads(out)
    assert obj["normalizer"] == "1/2" and len(obj["pieces"]) == 3


def test_run_suite_config_validation():
    with pytest.raises(UsageError):
        run_suite(SuiteConfig("mc", [(0.3, 1, 1, 10)]))
    with pytest.raises(UsageError):
        run_suite(SuiteConfig("onevar", []))
    code, objects = run_suite(SuiteConfig("paths", [(1, 1)], timing=False))
    assert code == 0 and objects[0]["elapsed_ms"] == 0


def test_parse_vectors():
    assert parse_vectors("1,0:1") == [(1, 0), (1, 1)]
    with pytest.raises(UsageError):
        parse_vectors("1,,2")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chaundy.cli", "verify", "bezout", "--max-mn", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout.splitlines()[-1])["passed"] == 9
