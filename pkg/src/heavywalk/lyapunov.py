"""Numerical Lyapunov drift: tail quadrature vs the expansion predictions.

The one-step drift E[f(x + theta) - f(x)] is evaluated from the law's exact
tail functions via the integration-by-parts representation
E[g(X)] = g(0) + int g'(y) P[X > y] dy, applied piecewise between the kink
points of f(x +- y) and of the tails.  Because the constructed laws have
closed-form tails, the quadrature is exact up to tolerance rather than
sampling noise; a Monte Carlo oracle is provided for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DivergentError, DomainError
from .increments import BoundedUniform, ChainSpec, HeavyPareto, IncrementLaw, build_law
from .specialfn import integrate_adaptive, integrate_decaying_tail, kappa0, kappa1, kappa2
from .classify import classify as _classify_phase


def lyapunov_f(i: int, nu: float, x: float) -> float:
    """The Lyapunov test functions: power |x|^nu truncated to 1 near the origin.

    i=0 lives on the half line (x >= 0); i=1 is flat left of 1; i=2 is even.
    """
    if i == 0:
        if x < 0.0:
            raise DomainError("f0 is defined on the half line only")
        return x ** nu if x >= 1.0 else 1.0
    if i == 1:
        return x ** nu if x >= 1.0 else 1.0
    if i == 2:
        ax = abs(x)
        return ax ** nu if ax >= 1.0 else 1.0
    raise DomainError(f"i must be 0, 1 or 2, got {i}")


def _f_vec(i: int, nu: float, z: np.ndarray) -> np.ndarray:
    if i in (0, 1):
        return np.where(z >= 1.0, np.maximum(z, 1.0) ** nu, 1.0)
    az = np.abs(z)
    return np.where(az >= 1.0, np.maximum(az, 1.0) ** nu, 1.0)


def _fprime(i: int, nu: float, z: float) -> float:
    """d/dz of the test function away from its kinks (0 on the flat part)."""
    if i in (0, 1):
        return nu * z ** (nu - 1.0) if z > 1.0 else 0.0
    az = abs(z)
    if az <= 1.0:
        return 0.0
    return nu * math.copysign(az ** (nu - 1.0), z)


def _f_kinks(i: int) -> tuple[float, ...]:
    return (1.0,) if i in (0, 1) else (-1.0, 1.0)


def _side_heavy_exponent(law: IncrementLaw, sign: int) -> Optional[float]:
    exps = [c.kind.exponent for c in law.components
            if c.kind.sign == sign and isinstance(c.kind, HeavyPareto) and c.weight > 0.0]
    return min(exps) if exps else None


def _side_kinks(law: IncrementLaw, sign: int) -> list[float]:
    pts = []
    for c in law.components:
        if c.kind.sign != sign or c.weight == 0.0:
            continue
        pts.append(c.kind.scale if isinstance(c.kind, HeavyPareto) else c.kind.width)
    return pts


def drift_numeric_law(law: IncrementLaw, i: int, nu: float, x: float,
                      abs_tol: float = 1e-10) -> float:
    """E[f_i(x + theta) - f_i(x)] for theta ~ law, by piecewise tail quadrature."""
    if nu == 0.0:
        return 0.0
    total = 0.0
    for side in (+1, -1):
        tail = law.tail_pos if side == +1 else law.tail_neg
        heavy_exp = _side_heavy_exponent(law, side)
        # f seen along this jump direction: z = x + side * y
        fp = lambda y, s=side: _fprime(i, nu, x + s * y)
        f_splits = [side * (k - x) for k in _f_kinks(i) if side * (k - x) > 0.0]
        splits = sorted(set(_side_kinks(law, side) + f_splits))
        # does the integrand survive as y -> inf on this side?
        grows = (i == 2) or (side == +1)
        if heavy_exp is None:
            upper = max(_side_kinks(law, side), default=0.0)
            pts = [0.0] + [s for s in splits if s < upper] + [upper]
        else:
            if grows and nu >= heavy_exp:
                raise DivergentError(
                    f"E[f_{i}] diverges: nu={nu} >= tail exponent {heavy_exp} on side {side:+d}")
            upper = max(splits, default=1.0)
            pts = [0.0] + splits
        piece_tol = abs_tol / (2.0 * max(1, len(pts)))
        val = 0.0
        pts = sorted(set(pts))
        for lo, hi in zip(pts[:-1], pts[1:]):
            if hi > lo:
                val += integrate_adaptive(lambda y: fp(y) * tail(y), lo, hi, piece_tol)
        if heavy_exp is not None:
            if grows:
                decay = heavy_exp + 1.0 - nu
                val += integrate_decaying_tail(lambda y: fp(y) * tail(y), upper, decay, piece_tol)
            else:
                # flat side: integrand vanishes beyond the last f-kink
                last = max(f_splits, default=0.0)
                if last > upper:
                    val += integrate_adaptive(lambda y: fp(y) * tail(y), upper, last, piece_tol)
        total += side * val
    return total


def drift_numeric(spec: ChainSpec, i: int, nu: float, x: float,
                  abs_tol: float = 1e-10) -> float:
    """One-step drift D_i(x) of the chain at state x, by exact-tail quadrature."""
    _check_regime_i(spec, i)
    return drift_numeric_law(build_law(spec, x), i, nu, x, abs_tol)


def _check_regime_i(spec: ChainSpec, i: int) -> None:
    if spec.regime == "half_line":
        if i != 0:
            raise DomainError("half_line uses the i=0 test function")
    elif spec.regime == "plane":
        raise DomainError("drift verification covers the scalar regimes only")
    elif i not in (1, 2):
        raise DomainError("line regimes use the i=1 or i=2 test functions")


def expansion_exponent(spec: ChainSpec) -> float:
    """Tail exponent governing the fluctuation term x^(nu - exponent)."""
    return spec.tail.beta if spec.regime == "line_in" else spec.tail.alpha


def expansion_coefficient(spec: ChainSpec, i: int, nu: float) -> float:
    """Coefficient K of the |x|^(nu - exponent) fluctuation term of D_i."""
    _check_regime_i(spec, i)
    c = spec.tail.c
    a = spec.tail.alpha
    if spec.regime in ("half_line", "line_out"):
        return c * nu * kappa0(a, nu)
    if spec.regime == "line_in":
        b = spec.tail.beta
        return c * kappa1(b, nu) if i == 1 else c * nu * kappa2(b, nu)
    # balanced
    if i == 1:
        return c * (nu * kappa0(a, nu) + kappa1(a, nu))
    return c * nu * (kappa0(a, nu) + kappa2(a, nu))


def _check_lemma_range(spec: ChainSpec, i: int, nu: float) -> None:
    t = spec.tail
    if spec.regime in ("half_line", "line_out"):
        lo = t.alpha - t.beta if t.beta is not None else -math.inf
        if not (lo < nu < t.alpha):
            raise DomainError(f"expansion requires {lo:.3g} < nu < alpha, got nu={nu}")
    elif spec.regime == "line_in":
        # i=2 extends to (-1, 0) since the pure-Pareto tails satisfy the rate
        # condition with error exactly zero
        lo = 0.0 if i == 1 else -1.0
        if not (lo < nu < t.beta):
            raise DomainError(f"expansion (i={i}) requires {lo} < nu < beta, got nu={nu}")
    else:
        lo = 0.0 if i == 1 else -1.0
        if not (lo < nu < t.alpha):
            raise DomainError(f"expansion (i={i}) requires {lo} < nu < alpha, got nu={nu}")


def drift_predicted(spec: ChainSpec, i: int, nu: float, x: float) -> float:
    """Leading terms of the drift expansion (remainder dropped):
    the drift part nu sign(x) |x|^(nu-1) mu(x) plus K |x|^(nu - exponent)."""
    _check_regime_i(spec, i)
    _check_lemma_range(spec, i, nu)
    if i in (0, 1) and x < 1.0:
        raise DomainError("one-sided expansions hold as x -> +inf (need x >= 1)")
    if abs(x) < 1.0:
        raise DomainError("expansions hold for |x| >= 1")
    if nu == 0.0:
        return 0.0
    mu = float(spec.drift_target(x))
    ax = abs(x)
    sgn = math.copysign(1.0, x)
    drift_part = nu * (sgn if i == 2 else 1.0) * ax ** (nu - 1.0) * mu
    return drift_part + expansion_coefficient(spec, i, nu) * ax ** (nu - expansion_exponent(spec))


@dataclass
class DriftReport:
    """Quadrature drift vs the expansion along a geometric grid."""

    i: int
    nu: float
    x_grid: list[float]
    numeric: list[float]
    predicted: list[float]
    normalized_error: list[float]
    coefficient: float
    converged: bool

    def rows(self):
        for x, n, p, e in zip(self.x_grid, self.numeric, self.predicted, self.normalized_error):
            yield {"x": x, "numeric": n, "predicted": p, "normalized_error": e}


def verify_expansion(spec: ChainSpec, i: int, nu: float, x_grid: Sequence[float],
                     rel_tol: float = 0.05) -> DriftReport:
    """Check that (D_i(x) - drift term) / x^(nu-exponent) converges to the
    predicted coefficient K; converged iff the last grid point is within
    rel_tol * |K|."""
    _check_regime_i(spec, i)
    _check_lemma_range(spec, i, nu)
    xs = [float(x) for x in x_grid]
    if any(b <= a for a, b in zip(xs[:-1], xs[1:])):
        raise DomainError("x_grid must be increasing")
    if nu == 0.0:
        zeros = [0.0] * len(xs)
        return DriftReport(i, nu, xs, zeros, zeros, zeros, 0.0, True)
    k_coef = expansion_coefficient(spec, i, nu)
    e = expansion_exponent(spec)
    numeric, predicted, nerr = [], [], []
    for x in xs:
        scale = abs(x) ** (nu - e)
        quad_tol = max(abs(k_coef), 0.1) * scale * 1e-4
        d = drift_numeric(spec, i, nu, x, abs_tol=quad_tol)
        p = drift_predicted(spec, i, nu, x)
        drift_term = p - k_coef * scale
        numeric.append(d)
        predicted.append(p)
        nerr.append((d - drift_term) / scale - k_coef)
    converged = abs(nerr[-1]) < rel_tol * abs(k_coef) if k_coef != 0.0 else abs(nerr[-1]) < 1e-12
    return DriftReport(i, nu, xs, numeric, predicted, nerr, k_coef, converged)


def mc_drift(spec: ChainSpec, i: int, nu: float, x: float, n: int,
             seed: int = 0, chunk: int = 1_000_000) -> tuple[float, float]:
    """Monte Carlo oracle for drift_numeric: (mean, standard error) of
    f_i(x + theta) - f_i(x) over n sampled increments."""
    _check_regime_i(spec, i)
    law = build_law(spec, x)
    fx = lyapunov_f(i, nu, x if spec.regime != "half_line" else max(x, 0.0))
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        th = law.quantile(rng.random(m), rng.random(m))
        z = x + th
        if spec.regime == "half_line":
            z = np.maximum(z, 0.0)
        vals = _f_vec(i, nu, z) - fx
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, math.sqrt(var / n)


@dataclass
class CriteriaReport:
    """Finite-x shadow of the semimartingale drift-sign hypotheses."""

    nu: float
    probes: list[float]
    phase: str
    drifts: dict = field(default_factory=dict)          # name -> list of drift values
    all_nonpositive: dict = field(default_factory=dict)  # name -> bool


def criteria_check(spec: ChainSpec, nu: float, x_probe: Sequence[float],
                   abs_tol: float = 1e-10) -> CriteriaReport:
    """Evaluate the relevant drift signs at the probe points.

    half_line reports D0; line regimes report D2 on both sides and the
    one-sided D1 in both orientations (the mirrored orientation drives the
    directional/oscillatory criteria).  Purely diagnostic: the caller
    compares the sign pattern against the classified phase.
    """
    probes = [float(x) for x in x_probe]
    if any(x <= 0.0 for x in probes):
        raise DomainError("probe points are magnitudes; use positive values")
    phase = _classify_phase(spec).phase
    rep = CriteriaReport(nu=nu, probes=probes, phase=phase)

    def record(name, values):
        rep.drifts[name] = values
        rep.all_nonpositive[name] = all(v <= 0.0 for v in values)

    if spec.regime == "half_line":
        record("d0", [drift_numeric(spec, 0, nu, x, abs_tol) for x in probes])
        return rep
    record("d2_pos", [drift_numeric(spec, 2, nu, x, abs_tol) for x in probes])
    record("d2_neg", [drift_numeric(spec, 2, nu, -x, abs_tol) for x in probes])
    record("d1_pos", [drift_numeric(spec, 1, nu, x, abs_tol) for x in probes])
    # mirrored orientation: f1 applied to -chain, i.e. the law at -x reflected
    record("d1_neg", [drift_numeric_law(build_law(spec, -x).mirrored(), 1, nu, x, abs_tol)
                      for x in probes])
    return rep
