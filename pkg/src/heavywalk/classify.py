"""Phase classification and critical passage-time exponents.

The classifier is exact arithmetic over the Gamma/trig threshold quantities;
the only numerics is the bisection for the critical exponent nu*, which is
monotone by construction (kappa0 is strictly increasing on [0, exponent),
kappa2 non-decreasing on (0, exponent), and the plane combination inherits
monotonicity from kappa0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import NoRootError, NotRecurrentError, PoleError
from .increments import ChainSpec
from .specialfn import cospi, cotpi, kappa0, kappa2, sinpi

TIE_TOL = 1e-9

# phases
POSITIVE_RECURRENT = "PositiveRecurrent"
NULL_RECURRENT = "NullRecurrent"
TRANSIENT = "Transient"
TRANSIENT_DIRECTIONAL = "TransientDirectional"
TRANSIENT_OSCILLATORY = "TransientOscillatory"
CRITICAL = "Critical"

RECURRENT_PHASES = (POSITIVE_RECURRENT, NULL_RECURRENT)

# boundary inclusivity of the critical moment: is E[tau^q_crit] itself
# finite, infinite, or left open
INCLUSIVE_INFINITE = "infinite"
INCLUSIVE_UNKNOWN = "unknown"

# oscillatory-transient conclusions additionally need the O(y^-delta) rate
# strengthening; the pure-Pareto laws satisfy it with error exactly 0
_RATE_NOTE = "+rate_condition"


@dataclass(frozen=True)
class NuStarResult:
    nu_star: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


@dataclass(frozen=True)
class Classification:
    phase: str
    theorem_tag: str
    moment_exponent: Optional[float] = None
    boundary_inclusive: Optional[str] = None
    nu_star: Optional[float] = None

    @property
    def is_recurrent(self) -> bool:
        return self.phase in RECURRENT_PHASES

    def to_json(self) -> dict:
        out = {"phase": self.phase, "theorem_tag": self.theorem_tag}
        if self.moment_exponent is not None:
            out["q_crit"] = self.moment_exponent
            out["q_crit_inclusive"] = self.boundary_inclusive
        if self.nu_star is not None:
            out["nu_star"] = self.nu_star
        return out


def drift_threshold(spec: ChainSpec) -> float:
    """Critical-drift b threshold: recurrent strictly below, transient above."""
    t = spec.tail
    if spec.regime in ("half_line", "line_out"):
        return t.c * math.pi * abs(1.0 / sinpi(t.alpha))
    if spec.regime == "line_in":
        return -t.c * math.pi * cotpi(t.beta)
    if spec.regime == "line_balanced":
        return -t.c * math.pi * cotpi(t.alpha / 2.0)
    raise NotRecurrentError("plane regime has no drift threshold (zero drift)")


def plane_quantity(spec: ChainSpec) -> float:
    """Sign decides the plane phase: p_R c_R + 2 p_T c_T cos(pi alpha / 2)."""
    pl = spec.plane
    p_t = 1.0 - pl.p_radial
    return pl.p_radial * pl.c_radial + 2.0 * p_t * pl.c_transverse * cospi(spec.tail.alpha / 2.0)


def _gap_function(spec: ChainSpec) -> tuple[Callable[[float], float], float]:
    """Monotone increasing g(nu) whose root is nu*, and the upper bracket end."""
    t, b, c = spec.tail, spec.drift.b, spec.tail.c
    if spec.regime in ("half_line", "line_out"):
        return (lambda v: b + c * kappa0(t.alpha, v)), t.alpha
    if spec.regime == "line_in":
        return (lambda v: b + c * kappa2(t.beta, v)), t.beta
    if spec.regime == "line_balanced":
        return (lambda v: b + c * (kappa0(t.alpha, v) + kappa2(t.alpha, v))), t.alpha
    # plane: zero drift, two radial/transverse kappa0 contributions
    pl = spec.plane
    p_t = 1.0 - pl.p_radial
    a = t.alpha
    return (lambda v: pl.p_radial * pl.c_radial * kappa0(a, v)
            + p_t * pl.c_transverse * kappa0(a / 2.0, v / 2.0)), 1.0


def plane_equation_forms(spec: ChainSpec, nu: float) -> tuple[float, float]:
    """The plane nu* equation evaluated two ways: the displayed Gamma-ratio
    form and the kappa0 combination (they agree identically)."""
    from .specialfn import gamma_real
    pl = spec.plane
    a = spec.tail.alpha
    p_t = 1.0 - pl.p_radial
    direct = (pl.p_radial * pl.c_radial * gamma_real(a - nu) * gamma_real(1.0 - a) / gamma_real(1.0 - nu)
              + p_t * pl.c_transverse * gamma_real((a - nu) / 2.0) * gamma_real(1.0 - a / 2.0)
              / gamma_real(1.0 - nu / 2.0))
    combo = (pl.p_radial * pl.c_radial * kappa0(a, nu)
             + p_t * pl.c_transverse * kappa0(a / 2.0, nu / 2.0))
    return direct, combo


def _eval_shrink(g: Callable[[float], float], v: float, lo: float, hi: float) -> tuple[float, float]:
    """Evaluate g at v, nudging off Gamma poles (pole hit = bracket shrink)."""
    width = hi - lo
    shift = 1e-4 * width
    for k in range(8):
        try:
            return g(v), v
        except PoleError:
            v = v + shift if v + shift < hi else v - shift
            shift *= 2.0
    raise PoleError(f"could not sidestep pole near nu={v}")


def nu_star(spec: ChainSpec, residual_tol: float = 1e-12, max_iter: int = 200) -> NuStarResult:
    """Solve the critical-exponent equation for the spec's regime by bisection.

    Raises NoRootError when the gap function has one sign over the whole
    bracket (the transient side of the phase boundary).
    """
    g, top = _gap_function(spec)
    lo, hi = 1e-6, top - 1e-6
    g_lo, lo = _eval_shrink(g, lo, 1e-7, top)
    g_hi, hi = _eval_shrink(g, hi, lo, top)
    if g_lo >= 0.0 or g_hi <= 0.0:
        if g_lo == 0.0 or g_hi == 0.0:
            v = lo if g_lo == 0.0 else hi
            return NuStarResult(v, (lo, hi), 0.0, 0)
        raise NoRootError(
            f"no sign change on [{lo:.2g}, {hi:.2g}] (g={g_lo:.4g}, {g_hi:.4g}); "
            "spec sits on the transient side")
    iters = 0
    g_mid, mid = g_lo, lo
    while iters < max_iter:
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-15:
            break
        g_mid, mid = _eval_shrink(g, mid, lo, hi)
        if abs(g_mid) <= residual_tol:
            break
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
        iters += 1
    return NuStarResult(mid, (lo, hi), abs(g_mid), iters)


def _tagged(phase, tag, q=None, inclusive=None, nu=None) -> Classification:
    return Classification(phase=phase, theorem_tag=tag, moment_exponent=q,
                          boundary_inclusive=inclusive, nu_star=nu)


def classify(spec: ChainSpec) -> Classification:
    """Phase of the chain, with the critical moment exponent where recurrent.

    Deciding quantities within TIE_TOL of their thresholds give Critical with
    theorem_tag "uncovered...": boundary parameters the theory leaves open.
    """
    if spec.regime == "plane":
        q = plane_quantity(spec)
        if abs(q) <= TIE_TOL:
            return _tagged(CRITICAL, "uncovered: plane threshold quantity is zero")
        if q < 0.0:
            return _tagged(TRANSIENT, "plane.transient")
        ns = nu_star(spec)
        return _tagged(NULL_RECURRENT, "plane.null_recurrent",
                       q=ns.nu_star / spec.tail.alpha, inclusive=INCLUSIVE_UNKNOWN,
                       nu=ns.nu_star)

    t, d = spec.tail, spec.drift
    exp = spec.tail.beta if spec.regime == "line_in" else spec.tail.alpha
    crit_gamma = exp - 1.0
    directional = TRANSIENT if spec.regime == "half_line" else TRANSIENT_DIRECTIONAL
    oscillatory = TRANSIENT if spec.regime == "half_line" else TRANSIENT_OSCILLATORY
    tagbase = spec.regime

    drift_free = (d.b == 0.0)
    if not drift_free and abs(d.gamma - crit_gamma) <= TIE_TOL:
        # critical drift scale: compare b against the regime threshold
        thr = drift_threshold(spec)
        gap = d.b - thr
        if abs(gap) <= TIE_TOL:
            return _tagged(CRITICAL, "uncovered: b exactly at the critical-drift threshold")
        if gap > 0.0:
            tag = f"{tagbase}.transient.critical_drift"
            if spec.regime in ("line_in", "line_balanced"):
                tag += _RATE_NOTE
            return _tagged(oscillatory if spec.regime in ("line_in", "line_balanced") else directional, tag)
        ns = nu_star(spec)
        return _tagged(NULL_RECURRENT, f"{tagbase}.null_recurrent.critical_drift",
                       q=ns.nu_star / exp, inclusive=INCLUSIVE_UNKNOWN, nu=ns.nu_star)

    if drift_free or d.gamma > crit_gamma + TIE_TOL:
        # drift asymptotically negligible against the fluctuation term
        if spec.regime in ("half_line", "line_out"):
            return _tagged(NULL_RECURRENT, f"{tagbase}.null_recurrent.drift_negligible",
                           q=1.0 / exp, inclusive=INCLUSIVE_UNKNOWN)
        if spec.regime == "line_balanced":
            return _tagged(NULL_RECURRENT, f"{tagbase}.null_recurrent.drift_negligible",
                           q=1.0 - 1.0 / exp, inclusive=INCLUSIVE_UNKNOWN)
        # line_in: Rogozin-Foss split at beta = 3/2
        if abs(t.beta - 1.5) <= TIE_TOL:
            return _tagged(CRITICAL, "uncovered: line_in with beta = 3/2 exactly")
        if t.beta > 1.5:
            return _tagged(NULL_RECURRENT, "line_in.null_recurrent.inward_heavy",
                           q=(2.0 * t.beta - 3.0) / t.beta, inclusive=INCLUSIVE_UNKNOWN,
                           nu=2.0 * t.beta - 3.0)
        return _tagged(TRANSIENT_OSCILLATORY, "line_in.oscillatory.inward_heavy" + _RATE_NOTE)

    # gamma < exponent - 1: the drift term dominates
    if abs(d.b) <= TIE_TOL:
        return _tagged(CRITICAL, "uncovered: b at zero with dominant drift scale")
    if d.b < 0.0:
        return _tagged(POSITIVE_RECURRENT, f"{tagbase}.positive_recurrent",
                       q=exp / (d.gamma + 1.0), inclusive=INCLUSIVE_INFINITE)
    return _tagged(directional, f"{tagbase}.transient.supercritical_drift")


def moment_exponent(spec: ChainSpec) -> tuple[float, str]:
    """Critical q for E[tau_a^q] plus the inclusivity flag at q itself."""
    cl = classify(spec)
    if not cl.is_recurrent:
        raise NotRecurrentError(f"phase {cl.phase} has no passage-time moment exponent")
    return cl.moment_exponent, cl.boundary_inclusive
