import json
import subprocess
import sys

import pytest

from ffgcd.cli import main


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_eval_and_height(capsys):
    rc, out, _ = run(["eval", "t^2/(t+1)"], capsys)
    assert rc == 0
    data = json.loads(out)
    assert data["divisor"] == {"t": 2, "t+1": -1, "inf": -1}
    rc, out, _ = run(["height", "(t^2+1)/(t^2+2)"], capsys)
    assert rc == 0 and json.loads(out)["height"] == 2


def test_gcdcount(capsys):
    rc, out, _ = run(["gcdcount", "t^6-1", "(t+1)^6-1", "--S", "t,t+1,inf"], capsys)
    assert rc == 0 and json.loads(out)["N_gcd"] == 2


def test_output_is_canonical(capsys):
    _, out, _ = run(["gcdcount", "t^2*(t-1)", "t^3", "--S", "inf"], capsys)
    assert out == json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n"


def test_du(capsys):
    rc, out, _ = run(["du", "--poly", "x1^2 + x2^2", "--units", "t", "t+1"], capsys)
    data = json.loads(out)
    assert rc == 0 and data["value_identity"] is True


def test_refine(capsys):
    rc, out, _ = run(["refine", "--F1", "x1 - 1", "--F2", "x2 - 1", "--units", "2*t^3", "(t+1)*t^9", "--m", "2"],
                     capsys)
    data = json.loads(out)
    assert rc == 0 and data["branch"] == "gcd-bound" and not data["finding"]


def test_pisot(tmp_path, capsys):
    f = tmp_path / "b.txt"
    f.write_text("# b(m) = (m + t)^2 t^(2m)\n(T^2 + 2*t*T + t^2 ; t^2)\n")
    rc, out, _ = run(["pisot", "--input", str(f), "--d", "2"], capsys)
    data = json.loads(out)
    assert rc == 0 and data["Q1"] == "T + (t)" and data["divisor_identity_failures"] == []


def test_suite_and_config(tmp_path, capsys):
    out_file = tmp_path / "rep.json"
    rc, out, _ = run(["suite", "brownawell", "--seed", "1", "--count", "5", "--out", str(out_file)], capsys)
    assert rc == 0 and json.loads(out_file.read_text())["summary"]["pass"] == 5
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "suite", "name": "gcd-units", "count": 3, "param": {"max_m": 1}}))
    rc, out, _ = run(["--config", str(cfg)], capsys)
    assert rc == 0 and json.loads(out)["summary"]["cap-exceeded"] == 3
    # flags on the command line override the config
    rc, out, _ = run(["--config", str(cfg), "suite", "gcd-units", "--count", "2"], capsys)
    assert rc == 0 and json.loads(out)["count"] == 2


def test_finding_exit_code(monkeypatch, capsys):
    import ffgcd.cli as cli

    monkeypatch.setattr(cli, "run_suite", lambda spec: {"suite": spec.suite, "summary": {}, "finding": True,
                                                        "verdicts": []})
    rc, _, _ = run(["suite", "brownawell", "--count", "1"], capsys)
    assert rc == 1


@pytest.mark.parametrize("argv", [[], ["bogus"], ["eval", "t+"], ["suite", "nope"], ["eval"],
                                  ["suite", "brownawell", "--param", "noequals"], ["--config", "/no/such/file"]])
def test_usage_errors(argv, capsys):
    rc, _, _ = run(argv, capsys)
    assert rc == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "ffgcd.cli", "height", "t^3"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["height"] == 3
