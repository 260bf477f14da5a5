import math

import numpy as np
import pytest

from umbral.contour import (GWSchedule, QuadratureSpec, ft_line, ft_umbra, gw_integral,
                            line_integral, neville)
from umbral.errors import DecomposeFirst, DomainError, NonConvergent
from umbral.umbra_core import make_special

SQRT_PI = math.sqrt(math.pi)
GAUSS = lambda z: np.exp(-z * z)


def test_line_integral_examples():
    assert abs(line_integral(GAUSS, 0).value - SQRT_PI) < 1e-13
    assert abs(line_integral(GAUSS, 1).value - SQRT_PI) < 1e-12
    assert abs(line_integral(lambda z: 1 / (1 + z * z), 0).value - math.pi) < 1e-10


def test_gl_panels_rule():
    spec = QuadratureSpec(rule="gl-panels", X=10.0, panels=40)
    assert abs(line_integral(GAUSS, 0.5, spec).value - SQRT_PI) < 1e-12
    with pytest.raises(DomainError):
        QuadratureSpec(rule="simpson")


INTEGRANDS = [
    lambda z: np.exp(-z * z),
    lambda z: 1 / np.cosh(z),
    lambda z: np.exp(-z * z / 2) * np.cos(3 * z),
    lambda z: 1 / np.cosh(z) ** 2 * np.exp(0.3j * z),
    lambda z: z * z * np.exp(-(z - 0.5) ** 2),
]
HEIGHTS = [(-0.6, 0.0), (0.1, 0.9), (-1.0, 1.2)]


@pytest.mark.parametrize("k", range(5))
@pytest.mark.parametrize("pair", HEIGHTS)
def test_height_independence(k, pair):
    g = INTEGRANDS[k]
    r1, r2 = line_integral(g, pair[0]), line_integral(g, pair[1])
    assert abs(r1.value - r2.value) <= r1.err_est + r2.err_est + 1e-13


def test_gw_examples():
    g = lambda z: 1 / (1 + z * z) ** 2
    assert abs(gw_integral(g, 0).value - line_integral(g, 0).value) < 1e-10
    sinc = lambda z: np.where(z == 0, 1, np.sin(z) / np.where(z == 0, 1, z))
    assert abs(gw_integral(sinc, 0, tol=1e-7).value - math.pi) < 1e-7
    with pytest.raises(NonConvergent):
        gw_integral(lambda z: np.ones_like(z), 0)


def test_gw_schedule_validation():
    with pytest.raises(DomainError):
        GWSchedule(eps=(1e-2, 2e-2))
    with pytest.raises(DomainError):
        GWSchedule(order=0)


def test_neville_polynomial_exact():
    xs = [1.0, 0.5, 0.25, 0.125]
    ys = [3 + 2 * x - x ** 3 for x in xs]
    assert abs(neville(xs, ys)[-1] - 3) < 1e-13


def test_ft_line_examples():
    f = lambda z: np.exp(-z * z / 2)
    for xi in (0.0, 0.7, -2.0):
        assert abs(ft_line(f, 0.0, xi).value - math.exp(-xi * xi / 2)) < 1e-12
    # the shifted line gives the same transform
    a, b = ft_line(f, 0.0, 0.4 - 0.3j), ft_line(f, 1.0, 0.4 - 0.3j)
    assert abs(a.value - b.value) < 1e-11
    lor = lambda z: 1 / (1 + z * z)
    assert abs(ft_line(lor, 0.0, 1.0).value - math.sqrt(math.pi / 2) * math.exp(-1)) < 1e-9


def test_ft_umbra_singular_rejected():
    with pytest.raises(DecomposeFirst):
        ft_umbra(make_special("const_exp", 0.5), 0.5)
    with pytest.raises(DomainError):
        ft_umbra(make_special("B"), 1.5)


def test_ft_umbra_sech():
    E = make_special("E")
    F = ft_umbra(E, 0.0)
    xi = np.linspace(-6, 6, 25)
    want = math.sqrt(math.pi / 2) / np.cosh(math.pi * xi / 2)
    assert np.max(np.abs(F(xi + 0j) - want)) < 1e-9


def test_ft_umbra_bernoulli_decay():
    B = make_special("B")
    F = ft_umbra(B, 0.5)
    xi = np.linspace(0.5, 4, 15)
    vals = np.abs(F(xi - 0.5j))
    slope = np.polyfit(xi, np.log(vals), 1)[0]
    assert abs(slope + 2 * math.pi) < 0.1
    C = np.max(vals * np.exp(2 * math.pi * xi))
    assert np.all(vals <= C * np.exp(-2 * math.pi * xi) * (1 + 1e-12))
    with pytest.raises(DomainError):
        F(np.array([1.0 - 0.3j]))


@pytest.mark.parametrize("f", [lambda w: np.exp(0.5 * w), lambda w: w * w,
                               lambda w: np.log(w + 2)])
def test_l1_log_convexity(f):
    """t -> log of the L1 norm of A^(. - i t) f(i(. - i t)) is convex."""
    B = make_special("B")
    norms = []
    for t in (0.2, 0.5, 0.8):
        F = ft_umbra(B, t)
        st_ = F.sampled
        x = np.linspace(st_.L_minus, st_.L_plus, 6001)
        z = x - 1j * t
        norms.append(math.log(np.trapezoid(np.abs(F(z) * f(1j * z)), x)))
    assert norms[1] <= 0.5 * (norms[0] + norms[2]) + 1e-6
