import io
import json
import math
import subprocess
import sys

import pytest

from fluxriemann import cli
from fluxriemann.core import NumericalError, check_solution
from fluxriemann.serialize import solution_from_dict, solution_to_dict


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


SOLVE_ZP = ("solve", "--system", "zp", "--left", "1,2", "--right", "4,0", "--format", "json")


def test_solve_zp_json():
    code, out, _ = run(*SOLVE_ZP)
    assert code == 0
    d = json.loads(out)
    (w,) = d["waves"]
    assert w["type"] == "delta_shock"
    assert w["sigma"] == pytest.approx(0.666667, abs=1e-6)
    assert w["w_rate"] == pytest.approx(3.328201, abs=1e-6)
    sol = solution_from_dict(d)
    check_solution(sol)
    assert solution_to_dict(sol) == d


def test_solve_pt_fan_block():
    code, out, _ = run("solve", "--system", "pt", "--left", "1,0", "--right", "4,1", "--eps1", "0.01")
    assert code == 0
    fans = [w for w in json.loads(out)["waves"] if w["type"] == "constant_density_fan"]
    assert len(fans) == 1 and fans[0]["rho"] == 0.02


@pytest.mark.parametrize("argv", [
    ("solve", "--system", "ise", "--left", "1,2", "--right", "4,0", "--eps1", "0.01", "--eps2", "0.01"),
    ("solve", "--system", "ise", "--left", "1,0", "--right", "1,0.6", "--eps1", "0.01", "--eps2", "0.01"),
    ("solve", "--system", "ise", "--left", "1,1", "--right", "2,1.5", "--eps1", "0.01", "--eps2", "0.5",
     "--gamma", "1.4"),
])
def test_ise_round_trip(argv):
    code, out, _ = run(*argv)
    assert code == 0
    sol = solution_from_dict(json.loads(out))
    check_solution(sol)
    assert run(*argv)[1] == out


def test_solve_csv():
    code, out, _ = run("solve", "--system", "zp", "--left", "1,2", "--right", "4,0", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("item,type,family,xi_left,xi_right")
    assert "3.32820118" in lines[1]


def test_sample_delta_row():
    code, out, _ = run("sample", "--system", "zp", "--left", "1,2", "--right", "4,0",
                       "--t", "1", "--x-min", "0", "--x-max", "1", "--n", "4")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "xi,rho,u,flag"
    assert "0.666666667,3.32820118,0.666666667,delta" in rows


def test_sample_delta_weight_scales_with_t():
    code, out, _ = run("sample", "--system", "zp", "--left", "1,2", "--right", "4,0",
                       "--t", "2", "--xi", "0.5,1")
    delta = [r for r in out.splitlines() if r.endswith("delta")]
    assert delta and float(delta[0].split(",")[1]) == pytest.approx(2 * 12 / math.sqrt(13), rel=1e-8)


def test_sample_single_point_right_state():
    code, out, _ = run("sample", "--system", "zp", "--left", "1,2", "--right", "4,0",
                       "--n", "1", "--x-min", "5")
    assert code == 0
    assert out.splitlines()[1:] == ["5,4,0,const"]


def test_sample_fan_row():
    # eps1 = 0 is library-only; a negligible eps1 reproduces the plain-Euler fan
    code, out, _ = run("sample", "--system", "ise", "--left", "1,2", "--right", "1,2.6",
                       "--eps1", "1e-12", "--eps2", "1", "--xi", "1.3")
    assert code == 0
    assert out.splitlines()[1] == "1.3,0.81,2.2,fan"


def test_sweep_two_shock():
    code, out, _ = run("sweep", "--system", "ise", "--left", "1,2", "--right", "4,0", "--gamma", "2",
                       "--schedule", "1e-2,1e-3,1e-4,1e-5,1e-6")
    assert code == 0
    header, *rows = out.splitlines()
    cols = header.split(",")
    last = dict(zip(cols, rows[-1].split(",")))
    assert float(last["p_scaled"]) == pytest.approx(32 / 9, rel=1e-2)


def test_sweep_pt_and_rarefaction():
    code, out, _ = run("sweep", "--system", "pt", "--left", "1,2", "--right", "4,0",
                       "--schedule", "0.1,0.01,0")
    assert code == 0 and out.splitlines()[-1] == "0,0.666666667,3.32820118"
    code, out, _ = run("sweep", "--system", "ise", "--left", "1,0", "--right", "1,0.6",
                       "--schedule", "1e-3,1e-5,1e-8")
    assert code == 0 and out.splitlines()[-1].endswith(",2e-08")


def test_threshold():
    code, out, _ = run("threshold", "--left", "1,0", "--right", "1,0.6", "--gamma", "2")
    assert code == 0
    assert float(out.splitlines()[1]) == pytest.approx(0.0236152, abs=1e-6)
    code, out, _ = run("threshold", "--left", "1,0", "--right", "1,0.6", "--format", "json")
    assert json.loads(out)["always_constant_density_fan"] is False


def test_residual_zp():
    code, out, _ = run("residual", "--system", "zp", "--left", "1,2", "--right", "4,0", "--tests", "default")
    assert code == 0
    header, *rows = out.splitlines()
    assert header == "check,component,value"
    assert all(abs(float(r.split(",")[2])) < 1e-8 for r in rows)
    assert len(rows) == 3 + 2 * 5


def test_residual_ise():
    code, out, _ = run("residual", "--system", "ise", "--left", "1,2", "--right", "4,0",
                       "--eps1", "0.01", "--eps2", "0.01")
    assert code == 0
    assert "lax_violation" in out


def test_seed_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"system": "zp", "left": "1,2", "right": [4, 0], "format": "json"}))
    code, out, _ = run("--seed-config", str(cfg), "solve")
    assert code == 0 and out == run(*SOLVE_ZP)[1]
    # explicit flags win over the config
    code, out, _ = run("--seed-config", str(cfg), "solve", "--format", "csv")
    assert out.startswith("item,")
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("--seed-config", str(cfg), "solve")[0] == 1


@pytest.mark.parametrize("argv,code", [
    (("solve", "--system", "ise", "--left", "1,1", "--right", "1,-1", "--gamma", "2", "--eps1", "0",
      "--eps2", "1"), 2),
    (("solve", "--system", "zp", "--left", "1,2", "--right", "4,0", "--eps1", "0.1"), 2),
    (("solve", "--system", "pt", "--left", "0.01,2", "--right", "4,0", "--eps1", "0.1"), 2),
    (("solve", "--system", "zp", "--left", "-1,2", "--right", "4,0"), 2),
    (("solve", "--system", "ise", "--left", "1,2", "--right", "4,0", "--eps1", "0.1", "--eps2", "1",
      "--gamma", "0.5"), 2),
    (("solve", "--system", "zp", "--left", "1,2"), 1),
    (("solve", "--system", "zp", "--left", "1", "--right", "4,0"), 1),
    (("solve", "--system", "xx", "--left", "1,2", "--right", "4,0"), 1),
    (("frobnicate",), 1),
    ((), 1),
    (("sweep", "--system", "ise", "--left", "1,0", "--right", "1,0.6", "--schedule", "0.1"), 2),
    (("threshold", "--left", "1,1", "--right", "1,0"), 2),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_numerical_error_exit_code(monkeypatch):
    def boom(*a, **k):
        raise NumericalError("forced")

    monkeypatch.setattr(cli, "solve_isentropic", boom)
    assert run("solve", "--system", "ise", "--left", "1,2", "--right", "4,0",
               "--eps1", "0.1", "--eps2", "1")[0] == 3


def test_check_failure_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "RESIDUAL_TOL", 0.0)
    assert run("residual", "--system", "ise", "--left", "1,2", "--right", "4,0",
               "--eps1", "0.01", "--eps2", "0.01")[0] == 4
    monkeypatch.setattr(cli, "check_two_shock_convergence", lambda *a: ["forced"])
    code, _, err = run("sweep", "--system", "ise", "--left", "1,2", "--right", "4,0", "--schedule", "1e-2,1e-3")
    assert code == 4 and "forced" in err


def test_console_entry_points_deterministic():
    a = subprocess.run(["fluxriemann", *SOLVE_ZP], capture_output=True, text=True)
    b = subprocess.run([sys.executable, "-m", "fluxriemann", *SOLVE_ZP], capture_output=True, text=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
