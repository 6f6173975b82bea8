import json
import math

import numpy as np
import pytest

from heavywalk import (BoundedUniform, ChainSpec, DriftParams, HeavyPareto, PlaneParams,
                       TailParams, build_law, plane_radial_law, plane_transverse_law,
                       sample, step)
from heavywalk import specialfn as sf
from heavywalk.errors import DomainError, InfeasibleDrift, InfeasibleWeight
from heavywalk.rng import CounterStream

from conftest import balanced, half_line, line_in, line_out, plane


def quad_mean(law, tol=1e-10):
    """Quadrature oracle for the law mean: E[theta] = int T+ - int T-."""
    total = 0.0
    for sign, tail in ((1, law.tail_pos), (-1, law.tail_neg)):
        comps = [c for c in law.components if c.kind.sign == sign and c.weight > 0]
        if not comps:
            continue
        kinks = [c.kind.scale if isinstance(c.kind, HeavyPareto) else c.kind.width
                 for c in comps]
        top = max(kinks)
        val = sf.integrate_adaptive(tail, 0.0, top, tol) if top > 0 else 0.0
        heavy = [c.kind for c in comps if isinstance(c.kind, HeavyPareto)]
        if heavy:
            val += sf.integrate_decaying_tail(tail, top, min(h.exponent for h in heavy), tol)
        total += sign * val
    return total


class CountingStream:
    def __init__(self, values):
        self.values = list(values)
        self.calls = 0

    def random(self):
        self.calls += 1
        return self.values.pop(0)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_half_line_exact_tail_and_support_point():
    spec = half_line()
    law = build_law(spec, 50.0)
    y0 = (1.0 / 0.25) ** (1.0 / 1.5)
    pareto = law.components[0].kind
    assert isinstance(pareto, HeavyPareto)
    assert pareto.scale == pytest.approx(y0, rel=1e-15)
    for y in (y0, 2.0 * y0, 10.0 * y0, 4000.0):
        assert law.tail_pos(y) == pytest.approx(y ** -1.5, rel=1e-14)


def test_half_line_martingale_mean_is_zero():
    law = build_law(half_line(), 123.0)
    assert law.mean == 0.0
    assert quad_mean(law) == pytest.approx(0.0, abs=1e-9)


def test_line_in_signed_mean_and_tail():
    spec = line_in(beta=1.3, gamma=0.3, b=0.2)
    law = build_law(spec, 100.0)
    assert law.tail_neg(10.0) == pytest.approx(10.0 ** -1.3, rel=1e-14)
    # drift target at x > 0 follows lim x^gamma mu(x) = b
    assert law.mean == pytest.approx(0.2 * 100.0 ** -0.3, rel=1e-14)
    assert quad_mean(law) == pytest.approx(law.mean, abs=1e-9)
    # zero drift variant
    law0 = build_law(line_in(beta=1.3), 100.0)
    assert quad_mean(law0) == pytest.approx(0.0, abs=1e-9)


def test_line_out_negative_side_target():
    spec = line_out(alpha=1.5, gamma=0.3, b=0.2)
    law = build_law(spec, -50.0)
    assert law.mean == pytest.approx(-0.2 * 50.0 ** -0.3, rel=1e-14)
    assert law.tail_neg(20.0) == pytest.approx(20.0 ** -1.5, rel=1e-14)
    assert quad_mean(law) == pytest.approx(law.mean, abs=1e-9)


def test_balanced_two_sided_exact_tails():
    spec = balanced(alpha=1.5, gamma=0.5, b=0.1)
    law = build_law(spec, 64.0)
    for y in (8.0, 30.0):
        assert law.tail_pos(y) == pytest.approx(y ** -1.5, rel=1e-13)
        assert law.tail_neg(y) == pytest.approx(y ** -1.5, rel=1e-13)
    assert quad_mean(law) == pytest.approx(0.1 * 64.0 ** -0.5, abs=1e-9)


def test_weights_sum_to_one():
    for spec, x in ((half_line(), 30.0), (line_in(), -40.0), (balanced(), 25.0)):
        law = build_law(spec, x)
        assert sum(c.weight for c in law.components) == pytest.approx(1.0, abs=1e-15)


def test_light_side_is_bounded():
    law = build_law(half_line(), 77.0)
    uni = law.components[1].kind
    assert isinstance(uni, BoundedUniform)
    assert law.tail_neg(uni.width + 1e-12) == 0.0


def test_clamp_region_is_tail_consistent():
    # for x beyond the light width, P[x + theta < 0] = tail_neg(x) = 0
    spec = half_line()
    law = build_law(spec, 50.0)
    width = law.components[1].kind.width
    assert 50.0 > width
    assert law.tail_neg(50.0) == 0.0


def test_infeasible_drift_reports_x():
    with pytest.raises(InfeasibleDrift) as exc:
        half_line(gamma=0.0, b=10.0)
    assert exc.value.x is not None


def test_infeasible_weight():
    with pytest.raises(InfeasibleWeight):
        half_line(c=0.1, p_heavy=0.5)   # y0 < 1
    with pytest.raises(InfeasibleWeight):
        balanced(p_heavy=0.6)
    with pytest.raises(InfeasibleWeight):
        ChainSpec("half_line", TailParams(alpha=1.5), DriftParams(), 1.2)


def test_balanced_tuner_width_guard():
    with pytest.raises(InfeasibleDrift):
        balanced(gamma=0.5, b=2.5, x0=1.0)


def test_regime_parameter_validation():
    with pytest.raises(DomainError):
        ChainSpec("half_line", TailParams(alpha=2.5), DriftParams(), 0.25)
    with pytest.raises(DomainError):
        ChainSpec("line_in", TailParams(alpha=1.2, beta=1.5), DriftParams(), 0.25)
    with pytest.raises(DomainError):
        ChainSpec("plane", TailParams(alpha=1.5), DriftParams(0.0, 0.5), 0.2,
                  PlaneParams(0.5, 1.0, 1.0))
    with pytest.raises(DomainError):
        ChainSpec("plane", TailParams(alpha=1.5), DriftParams(), 0.2)
    with pytest.raises(DomainError):
        ChainSpec("no_such", TailParams(alpha=1.5), DriftParams(), 0.2)


def test_spec_json_roundtrip():
    for spec in (half_line(gamma=0.5, b=-2.0), line_in(beta=1.7, b=0.1, gamma=0.7),
                 plane(p_radial=0.7)):
        assert ChainSpec.from_json(json.loads(json.dumps(spec.to_json()))) == spec


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sample_uses_exactly_two_uniforms():
    law = build_law(half_line(), 40.0)
    stream = CountingStream([0.1, 0.5, 0.9, 0.2])
    sample(law, stream)
    assert stream.calls == 2


def test_pareto_inverse_cdf_boundary():
    law = build_law(half_line(), 40.0)
    y0 = law.components[0].kind.scale
    # u1 in the heavy band, u2 = 1 at the inverse-CDF endpoint
    assert float(law.quantile(0.0, 1.0)) == y0


def test_empirical_tail_three_sigma():
    law = build_law(half_line(), 40.0)
    rng = np.random.default_rng(11)
    n = 10 ** 6
    th = law.quantile(rng.random(n), rng.random(n))
    y0 = law.components[0].kind.scale
    yq = 4.0 * y0
    exact = yq ** -1.5
    emp = float((th > yq).mean())
    se = math.sqrt(exact * (1.0 - exact) / n)
    assert abs(emp - exact) < 3.0 * se


def test_empirical_mean_three_sigma():
    law = build_law(half_line(), 40.0)
    rng = np.random.default_rng(12)
    n = 10 ** 6
    th = law.quantile(rng.random(n), rng.random(n))
    se = float(th.std() / math.sqrt(n))
    assert abs(float(th.mean()) - law.mean) < 3.0 * se


def test_mirrored_law():
    law = build_law(line_in(beta=1.4, gamma=0.4, b=0.3), 60.0)
    mir = law.mirrored()
    assert mir.mean == -law.mean
    assert mir.tail_pos(5.0) == law.tail_neg(5.0)
    assert mir.tail_neg(5.0) == law.tail_pos(5.0)


# ---------------------------------------------------------------------------
# stepping
# ---------------------------------------------------------------------------

def test_half_line_clamps_at_zero():
    spec = half_line()
    stream = CountingStream([0.9, 1.0])   # light (negative) component, max width
    assert step(spec, 0.5, stream) == 0.0


def test_plane_step_geometry():
    spec = plane()
    st1 = step(spec, np.array([5.0, 0.0]), CountingStream([0.0, 0.0, 0.5]))
    assert st1[1] == 0.0 and st1[0] != 5.0          # radial moves along (1, 0)
    st2 = step(spec, np.array([5.0, 0.0]), CountingStream([0.99, 0.0, 0.5]))
    assert st2[0] == 5.0 and st2[1] != 0.0          # transverse along (0, 1)


def test_plane_step_uses_three_uniforms():
    spec = plane()
    stream = CountingStream([0.3, 0.3, 0.3, 0.3])
    step(spec, np.array([5.0, 0.0]), stream)
    assert stream.calls == 3


def test_plane_laws_mean_zero_and_symmetric():
    spec = plane(p_radial=0.7, c_radial=2.0, c_transverse=0.5)
    rl = plane_radial_law(spec)
    tl = plane_transverse_law(spec)
    assert quad_mean(rl) == pytest.approx(0.0, abs=1e-9)
    assert quad_mean(tl) == pytest.approx(0.0, abs=1e-12)
    for y in (3.0, 10.0):
        assert tl.tail_pos(y) == tl.tail_neg(y)
    # exact transverse tail constant
    y0t = spec.heavy_scale(0.5, 1.5)
    assert tl.tail_pos(2 * y0t) == pytest.approx(0.5 * (2 * y0t) ** -1.5, rel=1e-13)


def test_build_law_rejects_plane():
    with pytest.raises(DomainError):
        build_law(plane(), 5.0)


def test_step_with_counter_stream_reproducible():
    spec = half_line()
    s1 = CounterStream(99, 3)
    s2 = CounterStream(99, 3)
    xs1 = [20.0]
    xs2 = [20.0]
    for _ in range(20):
        xs1.append(step(spec, xs1[-1], s1))
        xs2.append(step(spec, xs2[-1], s2))
    assert xs1 == xs2
