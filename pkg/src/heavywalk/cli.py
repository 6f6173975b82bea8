"""Batch command-line front end.

Subcommands: classify, nu-star, drift-verify, simulate, phase-diagram,
selftest.  Configuration is one JSON object (see README for the schema);
--seed/--workers/--out override the config.  JSON out for reports, CSV for
bulk data; exit codes: 0 ok, 1 selftest failure, 2 invalid config.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify, nu_star
from .errors import ConfigError, HeavywalkError, NoRootError
from .increments import ChainSpec
from .lyapunov import verify_expansion
from .montecarlo import (SimConfig, _simulate_batch, _summaries_from_batch,
                         phase_diagnostic, survival_curve, survival_grid)
from .selftest import run_selftest

_SPEC_KEYS = ("regime", "alpha", "beta", "c", "gamma", "b", "p_heavy", "x0", "plane")


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as ex:
        raise ConfigError(f"{path}:{ex.lineno}:{ex.colno}: {ex.msg}")


def spec_from_config(cfg: dict) -> ChainSpec:
    if "regime" not in cfg:
        raise ConfigError("missing required field", field="regime")
    try:
        return ChainSpec.from_json({k: cfg[k] for k in _SPEC_KEYS if k in cfg})
    except (KeyError, TypeError, ValueError) as ex:
        raise ConfigError(str(ex), field="spec")
    except HeavywalkError as ex:
        raise ConfigError(str(ex), field="spec")


def sim_from_config(cfg: dict, spec: ChainSpec, seed: int, workers: int) -> SimConfig:
    sim = cfg.get("sim")
    if not isinstance(sim, dict):
        raise ConfigError("missing sim section", field="sim")
    try:
        start = sim["start"]
        if isinstance(start, list):
            start = tuple(float(v) for v in start)
        else:
            start = float(start)
        return SimConfig(spec=spec, start=start, a=float(sim["a"]),
                         horizon=int(sim["horizon"]), n_traj=int(sim["n_traj"]),
                         master_seed=seed, workers=workers)
    except KeyError as ex:
        raise ConfigError(f"missing field {ex}", field="sim")
    except HeavywalkError as ex:
        raise ConfigError(str(ex), field="sim")


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def cmd_classify(cfg: dict, out: Path, seed: int, workers: int) -> int:
    spec = spec_from_config(cfg)
    report = classify(spec).to_json()
    _write_json(out / "classify.json", report)
    print(json.dumps(report, sort_keys=True))
    return 0


def cmd_nu_star(cfg: dict, out: Path, seed: int, workers: int) -> int:
    spec = spec_from_config(cfg)
    try:
        ns = nu_star(spec)
        report = {"nu_star": ns.nu_star, "bracket": list(ns.bracket),
                  "residual": ns.residual, "iterations": ns.iterations}
    except NoRootError as ex:
        # a valid determination: the spec sits on the transient side
        report = {"no_root": True, "reason": str(ex)}
    _write_json(out / "nu_star.json", report)
    print(json.dumps(report, sort_keys=True))
    return 0


def cmd_drift_verify(cfg: dict, out: Path, seed: int, workers: int) -> int:
    spec = spec_from_config(cfg)
    d = cfg.get("drift_verify")
    if not isinstance(d, dict):
        raise ConfigError("missing drift_verify section {i, nu, x_min, x_max, points}",
                          field="drift_verify")
    try:
        i = int(d["i"])
        nu = float(d["nu"])
        grid = np.geomspace(float(d.get("x_min", 1e2)), float(d.get("x_max", 1e5)),
                            int(d.get("points", 4)))
    except KeyError as ex:
        raise ConfigError(f"missing field {ex}", field="drift_verify")
    rep = verify_expansion(spec, i, nu, list(grid))
    path = out / "drift_report.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "numeric", "predicted", "normalized_error"])
        for row in rep.rows():
            w.writerow([row["x"], row["numeric"], row["predicted"], row["normalized_error"]])
    summary = {"i": i, "nu": nu, "coefficient": rep.coefficient, "converged": rep.converged,
               "final_normalized_error": rep.normalized_error[-1]}
    _write_json(out / "drift_report.json", summary)
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_simulate(cfg: dict, out: Path, seed: int, workers: int) -> int:
    spec = spec_from_config(cfg)
    sim = sim_from_config(cfg, spec, seed, workers)
    m_level = float(cfg.get("m_level", math.inf))
    batch = _simulate_batch(sim, m_level)
    plane = batch["plane"]

    traj_path = out / "trajectories.csv"
    with open(traj_path, "w", newline="") as fh:
        w = csv.writer(fh)
        head = ["index", "tau", "censored", "max_excursion", "min_excursion", "final_x"]
        if plane:
            head.append("final_y")
        head += ["crossed_pos", "crossed_neg", "first_exit", "last_sign_change"]
        w.writerow(head)
        for s in _summaries_from_batch(batch):
            row = [s.index, -1 if s.tau is None else s.tau, int(s.censored),
                   s.max_excursion, s.min_excursion]
            row += list(s.final) if plane else [s.final]
            row += [int(s.crossed_pos), int(s.crossed_neg),
                    -1 if s.first_exit is None else s.first_exit,
                    -1 if s.last_sign_change is None else s.last_sign_change]
            w.writerow(row)

    grid = survival_grid(sim.horizon)
    surv = survival_curve(batch, grid)
    surv_path = out / "survival.csv"
    with open(surv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "survival"])
        for n, s in zip(grid, surv):
            w.writerow([int(n), float(s)])

    manifest = {
        "version": __version__,
        "command": "simulate",
        "spec": spec.to_json(),
        "sim": sim.to_json(),
        "master_seed": sim.master_seed,
        "workers": sim.workers,
        "m_level": None if math.isinf(m_level) else m_level,
        "outputs": [traj_path.name, surv_path.name],
    }
    _write_json(out / "manifest.json", manifest)
    returned = float((batch["tau"] >= 0).mean())
    print(json.dumps({"return_fraction": returned, "outputs": manifest["outputs"]},
                     sort_keys=True))
    return 0


def cmd_phase_diagram(cfg: dict, out: Path, seed: int, workers: int) -> int:
    axes = cfg.get("grid")
    if not axes:
        raise ConfigError("phase-diagram requires grid: [{param, min, max, steps}, ...]",
                          field="grid")
    if isinstance(axes, dict):
        axes = [axes]
    if len(axes) > 2:
        raise ConfigError("at most two sweep axes", field="grid")
    for ax in axes:
        for k in ("param", "min", "max", "steps"):
            if k not in ax:
                raise ConfigError(f"axis missing {k!r}", field="grid")
        if int(ax["steps"]) < 2:
            raise ConfigError("steps must be >= 2", field="grid")

    base = {k: cfg[k] for k in _SPEC_KEYS if k in cfg}
    sweepable = {"alpha", "beta", "c", "gamma", "b", "p_heavy", "x0",
                 "p_radial", "c_radial", "c_transverse", "beta_light"}
    for ax in axes:
        if ax["param"] not in sweepable:
            raise ConfigError(f"unknown sweep parameter {ax['param']!r}; "
                              f"expected one of {sorted(sweepable)}", field="grid")

    def apply(point: dict) -> dict:
        obj = json.loads(json.dumps(base))
        for name, val in point.items():
            if name in ("p_radial", "c_radial", "c_transverse", "beta_light"):
                obj.setdefault("plane", {})[name] = val
            else:
                obj[name] = val
        return obj

    grids = [np.linspace(float(ax["min"]), float(ax["max"]), int(ax["steps"])) for ax in axes]
    names = [ax["param"] for ax in axes]
    points = [dict(zip(names, [float(v)])) for v in grids[0]] if len(axes) == 1 else [
        {names[0]: float(v0), names[1]: float(v1)} for v0 in grids[0] for v1 in grids[1]]

    path = out / "phase_diagram.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names + ["phase", "q_crit"])
        for pt in points:
            try:
                spec = ChainSpec.from_json(apply(pt))
                cl = classify(spec)
                row = [pt[n] for n in names] + [cl.phase,
                                                "" if cl.moment_exponent is None else cl.moment_exponent]
            except HeavywalkError as ex:
                row = [pt[n] for n in names] + [f"error:{type(ex).__name__}", ""]
            w.writerow(row)
    print(json.dumps({"rows": len(points), "output": path.name}))
    return 0


def cmd_selftest(cfg: dict, out: Path, seed: int, workers: int) -> int:
    results = run_selftest()
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        ok = ok and r.passed
        print(f"{status}  {r.name:28s} max_error={r.max_error:.3e}  tol={r.tolerance:.1e}")
    if not ok:
        failed = ", ".join(r.name for r in results if not r.passed)
        print(f"selftest FAILED: {failed}", file=sys.stderr)
        return 1
    print("selftest passed")
    return 0


_COMMANDS = {
    "classify": cmd_classify,
    "nu-star": cmd_nu_star,
    "drift-verify": cmd_drift_verify,
    "simulate": cmd_simulate,
    "phase-diagram": cmd_phase_diagram,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="heavywalk",
        description="Heavy-tailed zero-drift Markov chains: classify, solve, verify, simulate.")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON config path (see README)")
    parser.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    parser.add_argument("--workers", type=int, default=None, help="worker count (overrides config)")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else {}
        if args.command != "selftest" and not cfg:
            raise ConfigError("--config is required for this command")
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        workers = args.workers if args.workers is not None else int(cfg.get("workers", 1))
        out = Path(args.out if args.out is not None else cfg.get("out", "."))
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out, seed, workers)
    except ConfigError as ex:
        print(f"config error: {ex}", file=sys.stderr)
        return 2
    except HeavywalkError as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
