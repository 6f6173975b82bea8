"""Parallel trajectory simulation and empirical phase diagnostics.

Trajectories are independent units of work: trajectory k draws its uniforms
from the counter stream (master_seed, k), so any partition of the index
range over workers produces bit-identical results.  The engine runs chunks
of trajectories in vectorized lockstep; the scalar step() path in
`increments` consumes the same streams and produces the same states.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, InsufficientDataError
from .increments import ChainSpec
from .rng import seed_key, uniform_array

_U_MIN = 2.0 ** -53


@dataclass(frozen=True)
class SimConfig:
    spec: ChainSpec
    start: Union[float, tuple]
    a: float
    horizon: int
    n_traj: int
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.horizon < 0:
            raise DomainError("horizon must be >= 0")
        if self.n_traj < 1:
            raise DomainError("n_traj must be >= 1")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")
        if self.spec.regime == "plane":
            s = self.start
            if np.isscalar(s):
                # a radius: start on the positive x axis
                object.__setattr__(self, "start", (float(s), 0.0))
            elif len(s) != 2:
                raise DomainError("plane start must be a radius or an (x, y) pair")

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "start": list(self.start) if self.spec.regime == "plane" else self.start,
            "a": self.a,
            "horizon": self.horizon,
            "n_traj": self.n_traj,
            "master_seed": self.master_seed,
            "workers": self.workers,
        }


@dataclass(frozen=True)
class TrajectorySummary:
    index: int
    tau: Optional[int]
    censored: bool
    max_excursion: float
    min_excursion: float
    final: Union[float, tuple]
    crossed_pos: bool
    crossed_neg: bool
    first_exit: Optional[int]
    last_sign_change: Optional[int]


@dataclass
class SurvivalEstimate:
    grid: list[int]
    survival: list[float]
    slope: float
    stderr: float
    fit_window: tuple[int, int]

    @property
    def exponent(self) -> float:
        return -self.slope


@dataclass
class PhaseDiagnostic:
    n_traj: int
    threshold: float
    return_fraction: float
    escape_fraction: float
    oscillation_fraction: float
    directional_fraction: float


# ---------------------------------------------------------------------------
# vectorized chunk kernels
# ---------------------------------------------------------------------------

def _scalar_chunk(spec: ChainSpec, start: float, a: float, horizon: int,
                  key: int, idx_lo: int, idx_hi: int, m_level: float) -> dict:
    n = idx_hi - idx_lo
    idx = np.arange(idx_lo, idx_hi, dtype=np.int64)
    half = spec.regime == "half_line"
    x = np.full(n, float(start))
    tau = np.full(n, -1, dtype=np.int64)
    maxx = x.copy()
    minx = x.copy()
    final = x.copy()
    crossed_pos = np.zeros(n, dtype=bool)
    crossed_neg = np.zeros(n, dtype=bool)
    first_exit = np.full(n, -1, dtype=np.int64)
    last_flip = np.full(n, -1, dtype=np.int64)

    returned0 = (x <= a) if half else (np.abs(x) <= a)
    tau[returned0] = 0
    act = np.nonzero(~returned0)[0]

    p = spec.p_heavy
    e = spec.heavy_exponent
    y0 = spec.heavy_scale()
    inv_e = -1.0 / e
    balanced = spec.regime == "line_balanced"
    two_p = p + p

    for nstep in range(1, horizon + 1):
        if act.size == 0:
            break
        gid = idx[act]
        u1 = uniform_array(key, gid, 2 * (nstep - 1))
        u2 = np.maximum(uniform_array(key, gid, 2 * nstep - 1), _U_MIN)
        xa = x[act]
        pareto = y0 * u2 ** inv_e
        lm = spec.light_mean(xa)
        if balanced:
            light = np.where(lm < 0.0, -1.0, 1.0) * (2.0 * np.abs(lm)) * u2
            theta = np.where(u1 < p, pareto, np.where(u1 < two_p, -pareto, light))
        else:
            hs = spec.heavy_sign(xa)
            width = -2.0 * hs * lm
            theta = np.where(u1 < p, hs * pareto, -hs * width * u2)
        xn = xa + theta
        if half:
            xn = np.maximum(xn, 0.0)
        maxx[act] = np.maximum(maxx[act], xn)
        minx[act] = np.minimum(minx[act], xn)
        if not half:
            flipped = (xn >= 0.0) != (xa >= 0.0)
            if flipped.any():
                lf = last_flip[act]
                lf[flipped] = nstep
                last_flip[act] = lf
            out = np.abs(xn) > m_level
        else:
            out = xn > m_level
        if out.any():
            fe = first_exit[act]
            fresh = out & (fe < 0)
            fe[fresh] = nstep
            first_exit[act] = fe
            cp = crossed_pos[act]
            cp |= xn > m_level
            crossed_pos[act] = cp
            if not half:
                cn = crossed_neg[act]
                cn |= xn < -m_level
                crossed_neg[act] = cn
        ret = (xn <= a) if half else (np.abs(xn) <= a)
        x[act] = xn
        if ret.any():
            hit = act[ret]
            tau[hit] = nstep
            final[hit] = xn[ret]
            act = act[~ret]
    cens = tau < 0
    final[cens] = x[cens]
    return {
        "index": idx, "tau": tau, "max": maxx, "min": minx, "final_x": final,
        "crossed_pos": crossed_pos, "crossed_neg": crossed_neg,
        "first_exit": first_exit, "last_flip": last_flip,
    }


def _plane_chunk(spec: ChainSpec, start: tuple, a: float, horizon: int,
                 key: int, idx_lo: int, idx_hi: int, m_level: float) -> dict:
    n = idx_hi - idx_lo
    idx = np.arange(idx_lo, idx_hi, dtype=np.int64)
    px = np.full(n, float(start[0]))
    py = np.full(n, float(start[1]))
    r = np.hypot(px, py)
    tau = np.full(n, -1, dtype=np.int64)
    maxr = r.copy()
    minr = r.copy()
    first_exit = np.full(n, -1, dtype=np.int64)
    tau[r <= a] = 0
    act = np.nonzero(r > a)[0]

    pl = spec.plane
    alpha = spec.tail.alpha
    inv_a = -1.0 / alpha
    p = spec.p_heavy
    two_p = p + p
    y0_r = spec.heavy_scale(pl.c_radial, alpha)
    y0_t = spec.heavy_scale(pl.c_transverse, alpha)
    width_r = 2.0 * p * y0_r * alpha / (alpha - 1.0) / (1.0 - p)

    for nstep in range(1, horizon + 1):
        if act.size == 0:
            break
        gid = idx[act]
        base = 3 * (nstep - 1)
        u0 = uniform_array(key, gid, base)
        u1 = uniform_array(key, gid, base + 1)
        u2 = np.maximum(uniform_array(key, gid, base + 2), _U_MIN)
        radial = u0 < pl.p_radial
        th_r = np.where(u1 < p, y0_r * u2 ** inv_a, -width_r * u2)
        par_t = y0_t * u2 ** inv_a
        th_t = np.where(u1 < p, par_t, np.where(u1 < two_p, -par_t, 0.0))
        xa, ya = px[act], py[act]
        ra = np.hypot(xa, ya)
        safe = np.where(ra > 0.0, ra, 1.0)
        ux = np.where(ra > 0.0, xa / safe, 1.0)
        uy = np.where(ra > 0.0, ya / safe, 0.0)
        # transverse unit vector: u rotated a quarter turn anticlockwise
        dx = np.where(radial, ux, -uy)
        dy = np.where(radial, uy, ux)
        theta = np.where(radial, th_r, th_t)
        xn = xa + dx * theta
        yn = ya + dy * theta
        rn = np.hypot(xn, yn)
        maxr[act] = np.maximum(maxr[act], rn)
        minr[act] = np.minimum(minr[act], rn)
        out = rn > m_level
        if out.any():
            fe = first_exit[act]
            fresh = out & (fe < 0)
            fe[fresh] = nstep
            first_exit[act] = fe
        px[act] = xn
        py[act] = yn
        ret = rn <= a
        if ret.any():
            tau[act[ret]] = nstep
            act = act[~ret]
    return {
        "index": idx, "tau": tau, "max": maxr, "min": minr,
        "final_x": px, "final_y": py,
        "crossed_pos": np.zeros(n, dtype=bool), "crossed_neg": np.zeros(n, dtype=bool),
        "first_exit": first_exit, "last_flip": np.full(n, -1, dtype=np.int64),
    }


def _chunk_worker(args) -> dict:
    spec, start, a, horizon, key, lo, hi, m_level, plane = args
    if plane:
        return _plane_chunk(spec, start, a, horizon, key, lo, hi, m_level)
    return _scalar_chunk(spec, start, a, horizon, key, lo, hi, m_level)


def _simulate_batch(cfg: SimConfig, m_level: float = math.inf) -> dict:
    """Run all trajectories, merging per-chunk arrays in index order."""
    key = seed_key(cfg.master_seed)
    plane = cfg.spec.regime == "plane"
    w = min(cfg.workers, cfg.n_traj)
    bounds = [cfg.n_traj * i // w for i in range(w + 1)]
    jobs = [(cfg.spec, cfg.start, cfg.a, cfg.horizon, key, bounds[i], bounds[i + 1],
             m_level, plane) for i in range(w) if bounds[i + 1] > bounds[i]]
    if len(jobs) <= 1 or cfg.workers == 1:
        parts = [_chunk_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            parts = list(ex.map(_chunk_worker, jobs))
    merged = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    merged["horizon"] = cfg.horizon
    merged["n_traj"] = cfg.n_traj
    merged["plane"] = plane
    return merged


def _summaries_from_batch(batch: dict) -> list[TrajectorySummary]:
    out = []
    plane = batch["plane"]
    for k in range(len(batch["index"])):
        tau = int(batch["tau"][k])
        cens = tau < 0
        fe = int(batch["first_exit"][k])
        lf = int(batch["last_flip"][k])
        final = ((float(batch["final_x"][k]), float(batch["final_y"][k])) if plane
                 else float(batch["final_x"][k]))
        out.append(TrajectorySummary(
            index=int(batch["index"][k]),
            tau=None if cens else tau,
            censored=cens,
            max_excursion=float(batch["max"][k]),
            min_excursion=float(batch["min"][k]),
            final=final,
            crossed_pos=bool(batch["crossed_pos"][k]),
            crossed_neg=bool(batch["crossed_neg"][k]),
            first_exit=None if fe < 0 else fe,
            last_sign_change=None if lf < 0 else lf,
        ))
    return out


def run_trajectories(cfg: SimConfig, m_level: float = math.inf) -> list[TrajectorySummary]:
    """Simulate n_traj independent trajectories; bit-identical for any worker
    count (trajectory k's stream depends only on (master_seed, k))."""
    return _summaries_from_batch(_simulate_batch(cfg, m_level))


# ---------------------------------------------------------------------------
# survival exponent
# ---------------------------------------------------------------------------

def survival_grid(horizon: int, points: int = 60) -> np.ndarray:
    top = max(horizon - 1, 1)
    return np.unique(np.rint(np.geomspace(1, top, points)).astype(np.int64))


def survival_curve(batch: dict, grid: np.ndarray) -> np.ndarray:
    tau = batch["tau"]
    horizon = batch["horizon"]
    tau_eff = np.where(tau < 0, horizon + 1, tau)
    return np.array([(tau_eff > n).mean() for n in grid])


def estimate_passage_tail(cfg: SimConfig, grid_points: int = 60) -> SurvivalEstimate:
    """log-log OLS slope of the survival curve P[tau_a > n].

    The fit window keeps survival in (10/n_traj, 0.9): the early transient
    and the noise floor are excluded.  Censored trajectories only contribute
    as tau > n, never as returns.
    """
    batch = _simulate_batch(cfg)
    grid = survival_grid(cfg.horizon, grid_points)
    surv = survival_curve(batch, grid)
    floor = 10.0 / cfg.n_traj
    use = (surv > floor) & (surv < 0.9)
    if use.sum() < 4:
        raise InsufficientDataError(
            f"only {int(use.sum())} usable survival points in ({floor:.2g}, 0.9)")
    ln = np.log(grid[use].astype(float))
    ls = np.log(surv[use])
    dx = ln - ln.mean()
    slope = float((dx * (ls - ls.mean())).sum() / (dx * dx).sum())
    resid = ls - (ls.mean() + slope * dx)
    dof = max(len(ln) - 2, 1)
    stderr = float(math.sqrt((resid * resid).sum() / dof / (dx * dx).sum()))
    window = (int(grid[use][0]), int(grid[use][-1]))
    return SurvivalEstimate(grid=[int(g) for g in grid], survival=[float(s) for s in surv],
                            slope=slope, stderr=stderr, fit_window=window)


# ---------------------------------------------------------------------------
# phase and moment diagnostics
# ---------------------------------------------------------------------------

def phase_diagnostic(cfg: SimConfig, m_level: float) -> PhaseDiagnostic:
    """Per-trajectory labels over the horizon.

    returned: tau <= horizon.  escaped: censored with |final| beyond m_level.
    oscillatory-like: escaped, crossed both +-m_level, and the last sign
    change happened after the first exit beyond m_level.  directional-like:
    escaped with no sign change after the first exit.
    """
    if m_level <= cfg.a:
        raise DomainError("m_level must exceed the return level a")
    batch = _simulate_batch(cfg, m_level)
    tau = batch["tau"]
    returned = tau >= 0
    if batch["plane"]:
        fr = np.hypot(batch["final_x"], batch["final_y"])
    else:
        fr = np.abs(batch["final_x"])
    escaped = (~returned) & (fr > m_level)
    n = cfg.n_traj
    osc = np.zeros(n, dtype=bool)
    direc = np.zeros(n, dtype=bool)
    if cfg.spec.regime not in ("half_line", "plane"):
        fe = batch["first_exit"]
        lf = batch["last_flip"]
        osc = escaped & batch["crossed_pos"] & batch["crossed_neg"] & (fe >= 0) & (lf > fe)
        direc = escaped & (fe >= 0) & (lf <= fe)
    return PhaseDiagnostic(
        n_traj=n,
        threshold=m_level,
        return_fraction=float(returned.mean()),
        escape_fraction=float(escaped.mean()),
        oscillation_fraction=float(osc.mean()),
        directional_fraction=float(direc.mean()),
    )


def moment_diagnostic(cfg: SimConfig, q_list: Sequence[float]) -> dict:
    """Capped-moment growth E[min(tau, n)^q] at n = horizon/100, /10, /1.

    flag: "bounded" if the last growth ratio < 1.1, "growing" if > 1.5,
    otherwise "indeterminate".
    """
    batch = _simulate_batch(cfg)
    tau = batch["tau"].astype(float)
    tau[tau < 0] = cfg.horizon
    ns = [max(cfg.horizon // 100, 1), max(cfg.horizon // 10, 1), cfg.horizon]
    out = {}
    for q in q_list:
        vals = [float((np.minimum(tau, n) ** q).mean()) for n in ns]
        ratio = vals[-1] / vals[-2] if vals[-2] > 0 else math.inf
        flag = "bounded" if ratio < 1.1 else ("growing" if ratio > 1.5 else "indeterminate")
        out[q] = {"n": ns, "values": vals, "ratio": ratio, "flag": flag}
    return out
