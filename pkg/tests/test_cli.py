import json
import math

import pytest

from heavywalk.cli import main
from heavywalk.selftest import run_selftest
from heavywalk import specialfn as sf


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


HL = {"regime": "half_line", "alpha": 1.5, "beta": 2.5, "c": 1.0, "gamma": 0.0,
      "b": 0.0, "p_heavy": 0.25, "x0": 1.0,
      "sim": {"a": 10.0, "start": 30.0, "horizon": 2000, "n_traj": 200}}


# ---------------------------------------------------------------------------
# classify / nu-star
# ---------------------------------------------------------------------------

def test_cmd_classify_line_in_example(tmp_path, capsys):
    cfg = {"regime": "line_in", "alpha": 2.8, "beta": 1.8, "c": 1.0, "gamma": 1.0,
           "b": 0.0, "p_heavy": 0.25, "x0": 1.0}
    rc = main(["classify", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "classify.json").read_text())
    assert report["phase"] == "NullRecurrent"
    assert report["q_crit"] == pytest.approx(1.0 / 3.0)
    assert json.loads(capsys.readouterr().out)["phase"] == "NullRecurrent"


def test_cmd_classify_tie_is_critical(tmp_path):
    thr = 1.0 * math.pi * abs(1.0 / sf.sinpi(1.5))
    cfg = {"regime": "half_line", "alpha": 1.5, "c": 1.0, "gamma": 0.5, "b": thr,
           "p_heavy": 0.4, "x0": 50.0}
    rc = main(["classify", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    assert json.loads((tmp_path / "classify.json").read_text())["phase"] == "Critical"


def test_cmd_classify_plane_transient(tmp_path):
    cfg = {"regime": "plane", "alpha": 1.5, "p_heavy": 0.2,
           "plane": {"p_radial": 0.5, "c_radial": 1.0, "c_transverse": 1.0}}
    rc = main(["classify", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    assert json.loads((tmp_path / "classify.json").read_text())["phase"] == "Transient"


def test_cmd_nu_star(tmp_path):
    cfg = {"regime": "half_line", "alpha": 1.5, "c": 1.0, "gamma": 0.5, "b": 0.0,
           "p_heavy": 0.25, "x0": 1.0}
    rc = main(["nu-star", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "nu_star.json").read_text())
    assert report["nu_star"] == pytest.approx(1.0, abs=1e-8)
    assert report["residual"] <= 1e-10


def test_cmd_nu_star_transient_side(tmp_path):
    cfg = {"regime": "half_line", "alpha": 1.5, "c": 1.0, "gamma": 0.5, "b": 4.0,
           "p_heavy": 0.4, "x0": 50.0}
    rc = main(["nu-star", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    assert json.loads((tmp_path / "nu_star.json").read_text())["no_root"] is True


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

def test_invalid_config_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", "--config", str(bad), "--out", str(tmp_path)]) == 2
    missing = write_config(tmp_path, {"alpha": 1.5}, "missing.json")
    assert main(["classify", "--config", missing, "--out", str(tmp_path)]) == 2
    infeasible = write_config(tmp_path, {"regime": "half_line", "alpha": 1.5, "c": 1.0,
                                         "gamma": 0.0, "b": 10.0, "p_heavy": 0.25,
                                         "x0": 1.0}, "infeasible.json")
    assert main(["classify", "--config", infeasible, "--out", str(tmp_path)]) == 2
    assert main(["simulate", "--config", missing, "--out", str(tmp_path)]) == 2


def test_config_roundtrip_byte_stable(tmp_path):
    from heavywalk import ChainSpec
    spec = ChainSpec.from_json(HL)
    s1 = json.dumps(spec.to_json(), sort_keys=True)
    s2 = json.dumps(ChainSpec.from_json(json.loads(s1)).to_json(), sort_keys=True)
    assert s1 == s2


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def test_simulate_outputs_and_manifest(tmp_path):
    rc = main(["simulate", "--config", write_config(tmp_path, HL), "--seed", "5",
               "--out", str(tmp_path)])
    assert rc == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["master_seed"] == 5
    assert manifest["spec"]["regime"] == "half_line"
    assert set(manifest["outputs"]) == {"trajectories.csv", "survival.csv"}
    header = (tmp_path / "trajectories.csv").read_text().splitlines()[0]
    assert header.split(",")[:3] == ["index", "tau", "censored"]
    surv = (tmp_path / "survival.csv").read_text().splitlines()
    assert surv[0] == "n,survival"
    assert len(surv) > 10


def test_simulate_byte_identical_across_workers(tmp_path):
    out1 = tmp_path / "w1"
    out4 = tmp_path / "w4"
    cfgp = write_config(tmp_path, HL)
    assert main(["simulate", "--config", cfgp, "--seed", "9", "--workers", "1",
                 "--out", str(out1)]) == 0
    assert main(["simulate", "--config", cfgp, "--seed", "9", "--workers", "4",
                 "--out", str(out4)]) == 0
    for name in ("trajectories.csv", "survival.csv"):
        assert (out1 / name).read_bytes() == (out4 / name).read_bytes()


def test_simulate_repeat_same_seed_identical(tmp_path):
    outa = tmp_path / "a"
    outb = tmp_path / "b"
    cfgp = write_config(tmp_path, HL)
    main(["simulate", "--config", cfgp, "--seed", "33", "--out", str(outa)])
    main(["simulate", "--config", cfgp, "--seed", "33", "--out", str(outb)])
    assert (outa / "trajectories.csv").read_bytes() == (outb / "trajectories.csv").read_bytes()
    main(["simulate", "--config", cfgp, "--seed", "34", "--out", str(outb)])
    assert (outa / "trajectories.csv").read_bytes() != (outb / "trajectories.csv").read_bytes()


# ---------------------------------------------------------------------------
# phase diagram
# ---------------------------------------------------------------------------

def test_phase_diagram_flips_at_threshold(tmp_path):
    thr = math.pi
    cfg = {"regime": "half_line", "alpha": 1.5, "c": 1.0, "gamma": 0.5, "b": 0.0,
           "p_heavy": 0.4, "x0": 60.0,
           "grid": [{"param": "b", "min": thr - 0.2, "max": thr + 0.2, "steps": 9}]}
    rc = main(["phase-diagram", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    rows = (tmp_path / "phase_diagram.csv").read_text().splitlines()
    assert rows[0] == "b,phase,q_crit"
    phases = [r.split(",")[1] for r in rows[1:]]
    assert phases[0] == "NullRecurrent" and phases[-1] == "Transient"
    flip = phases.index("Transient")
    assert all(p == "NullRecurrent" for p in phases[:flip] if p != "Critical")


def test_phase_diagram_beta_sweep_rogozin_foss(tmp_path):
    cfg = {"regime": "line_in", "alpha": 2.9, "beta": 1.3, "c": 1.0, "gamma": 1.0,
           "b": 0.0, "p_heavy": 0.25, "x0": 1.0,
           "grid": [{"param": "beta", "min": 1.3, "max": 1.8, "steps": 11}]}
    rc = main(["phase-diagram", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    rows = (tmp_path / "phase_diagram.csv").read_text().splitlines()[1:]
    phases = {float(r.split(",")[0]): r.split(",")[1] for r in rows}
    assert phases[1.3] == "TransientOscillatory"
    assert phases[1.8] == "NullRecurrent"


def test_phase_diagram_gamma_sweep_changes_clause(tmp_path):
    cfg = {"regime": "half_line", "alpha": 1.5, "c": 1.0, "gamma": 0.0, "b": -0.5,
           "p_heavy": 0.25, "x0": 1.0,
           "grid": [{"param": "gamma", "min": 0.2, "max": 0.8, "steps": 7}]}
    rc = main(["phase-diagram", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    rows = (tmp_path / "phase_diagram.csv").read_text().splitlines()[1:]
    phases = [r.split(",")[1] for r in rows]
    assert "PositiveRecurrent" in phases and "NullRecurrent" in phases


def test_phase_diagram_requires_grid(tmp_path):
    cfg = {"regime": "half_line", "alpha": 1.5, "c": 1.0, "p_heavy": 0.25, "x0": 1.0}
    assert main(["phase-diagram", "--config", write_config(tmp_path, cfg),
                 "--out", str(tmp_path)]) == 2


# ---------------------------------------------------------------------------
# drift-verify
# ---------------------------------------------------------------------------

def test_cmd_drift_verify(tmp_path):
    cfg = dict(HL)
    cfg["drift_verify"] = {"i": 0, "nu": 0.5, "x_min": 1e2, "x_max": 1e4, "points": 3}
    rc = main(["drift-verify", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)])
    assert rc == 0
    rows = (tmp_path / "drift_report.csv").read_text().splitlines()
    assert rows[0] == "x,numeric,predicted,normalized_error"
    assert len(rows) == 4
    summary = json.loads((tmp_path / "drift_report.json").read_text())
    assert summary["converged"] in (True, False)


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

def test_cmd_selftest_passes(tmp_path, capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "selftest passed" in out
    assert "positive_part" in out


def test_selftest_fault_injection_names_identity():
    perturbed = lambda z: sf.gamma_real(z) * (1.0 + 1e-4)
    results = run_selftest(gamma_impl=perturbed)
    failed = [r.name for r in results if not r.passed]
    assert "positive_part" in failed


def test_selftest_loose_quadrature_still_passes():
    # identities are far from any sensible tolerance, so loosening the
    # quadrature oracle to 1e-2 still verifies everything
    results = run_selftest(quad_tol=1e-2)
    assert all(r.passed for r in results)
