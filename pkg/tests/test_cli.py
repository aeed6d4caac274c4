import subprocess
import sys

import pytest

from nlsconserve import cli
from nlsconserve.csvio import SCHEMAS, read_csv


def _run(tmp_path, *args):
    out = tmp_path / "out.csv"
    code = cli.main([*args, "--output", str(out)])
    return code, out


def test_empty_args(capsys):
    assert cli.main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    assert cli.main(["solve", "--bogus", "1"]) == 1
    assert cli.main(["solve", "--tau", "abc"]) == 1
    assert cli.main(["frobnicate"]) == 1
    assert cli.main(["solve", "--scheme", "rk4"]) == 1
    assert cli.main(["solve", "--config", str(tmp_path / "missing.cfg")]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("tau = 0.1\ncolour = blue\n")
    assert cli.main(["solve", "--config", str(bad)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nscheme = mbdf2   # trailing\ntau = 1/32\ncells = 640\n")
    c = cli.parse(["solve", "--config", str(cfg), "--tau", "0.125"])
    assert (c.scheme, c.tau, c.cells) == ("mbdf2", 0.125, 640)
    assert c.tend == 1.0 and c.delta == 1e-12
    c = cli.parse(["solve"])
    assert (c.scheme, c.tau, c.cells, c.preset) == ("cn", 2.0**-6, 1280, "soliton")


def test_parse_spec_example():
    c = cli.parse("solve --scheme cn --tau 0.015625 --cells 1280 --domain -20,20 --tend 1 --nl cubic --lambda -2".split())
    assert c.domain == (-20.0, 20.0) and c.lam == -2.0 and c.nl == 1
    assert cli.parse(["solve", "--nl", "power3"]).nl == 3
    assert cli.parse(["dispersion", "--taus", "1e-2,1e-3"]).taus == (1e-2, 1e-3)


def test_solve_three_steps(tmp_path):
    code, out = _run(tmp_path, "solve", "--tau", "0.125", "--tend", "0.375", "--cells", "320")
    assert code == 0
    header, rows = read_csv(out)
    assert tuple(header) == SCHEMAS["solve"]
    steps = [r for r in rows if r[0] > 0]
    assert len(steps) == 3
    t = [r[1] for r in rows]
    assert t == sorted(t) and len(set(t)) == len(t)


def test_solver_failure_exit_code(tmp_path):
    code, out = _run(tmp_path, "solve", "--tau", "0.5", "--max-iters", "2", "--delta", "1e-14")
    assert code == 2
    assert len(read_csv(out)[1]) == 1


def test_blowup_preset_exits_zero(tmp_path):
    code, out = _run(tmp_path, "solve", "--preset", "quintic-blowup", "--tau", "0.005", "--cells", "400",
                     "--stop-factor", "2")
    assert code == 0
    code, out = _run(tmp_path, "blowup", "--scheme", "cn,mbdf2", "--taus", "0.02", "--cells", "400",
                     "--stop-factor", "2")
    assert code == 0
    header, rows = read_csv(out)
    assert tuple(header) == SCHEMAS["blowup"]
    assert [r[0] for r in rows] == ["cn", "mbdf2"]
    assert all(r[-1] in ("amplitude-stop", "solver-failure", "non-finite") for r in rows)


def test_dispersion_command(tmp_path):
    code, out = _run(tmp_path, "dispersion", "--scheme", "mbdf2", "--k", "1", "--lambda", "2",
                     "--taus", "1e-2,1e-3,1e-4")
    assert code == 0
    _, rows = read_csv(out)
    assert rows[-1][3] == pytest.approx(3.75e-8, rel=1e-5)
    code, out = _run(tmp_path, "dispersion", "--omega", "2", "--taus", "1e-3,1e-4")
    assert read_csv(out)[1][0][3] == pytest.approx(3.333332e-7, rel=1e-6)
    assert cli.main(["dispersion", "--scheme", "sym4"]) == 1


def test_converge_command(tmp_path):
    code, out = _run(tmp_path, "converge", "--scheme", "cn", "--taus", "0.25,0.125", "--cells", "400",
                     "--teval", "1")
    assert code == 0
    header, rows = read_csv(out)
    assert tuple(header) == SCHEMAS["converge"]
    assert rows[0][2] is None and rows[1][2] > 1
    code, _ = _run(tmp_path, "converge", "--scheme", "sym4", "--taus", "0.0625", "--cells", "400")
    assert code == 2


def test_deterministic_bytes(tmp_path):
    args = ["solve", "--scheme", "mbdf3", "--tau", "0.0625", "--tend", "0.5", "--cells", "640"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main([*args, "-o", str(a)]) == 0
    assert cli.main([*args, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nlsconserve", "dispersion", "--taus", "1e-2,1e-3"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("tau,omega,omega_tilde,error,order\n")
