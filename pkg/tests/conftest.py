import pytest

from heavywalk import ChainSpec, DriftParams, PlaneParams, TailParams


def half_line(alpha=1.5, gamma=0.0, b=0.0, c=1.0, p_heavy=0.25, x0=1.0, beta=2.5):
    return ChainSpec("half_line", TailParams(alpha=alpha, beta=beta, c=c, x0=x0),
                     DriftParams(gamma, b), p_heavy)


def line_out(alpha=1.5, gamma=0.0, b=0.0, c=1.0, p_heavy=0.25, x0=1.0, beta=2.5):
    return ChainSpec("line_out", TailParams(alpha=alpha, beta=beta, c=c, x0=x0),
                     DriftParams(gamma, b), p_heavy)


def line_in(beta=1.3, gamma=0.0, b=0.0, c=1.0, p_heavy=0.25, x0=1.0, alpha=2.5):
    return ChainSpec("line_in", TailParams(alpha=alpha, beta=beta, c=c, x0=x0),
                     DriftParams(gamma, b), p_heavy)


def balanced(alpha=1.5, gamma=0.0, b=0.0, c=1.0, p_heavy=0.2, x0=1.0):
    return ChainSpec("line_balanced", TailParams(alpha=alpha, c=c, x0=x0),
                     DriftParams(gamma, b), p_heavy)


def plane(alpha=1.5, p_radial=0.5, c_radial=1.0, c_transverse=1.0, p_heavy=0.2):
    return ChainSpec("plane", TailParams(alpha=alpha), DriftParams(0.0, 0.0), p_heavy,
                     PlaneParams(p_radial, c_radial, c_transverse))


@pytest.fixture
def hl_martingale():
    return half_line()
