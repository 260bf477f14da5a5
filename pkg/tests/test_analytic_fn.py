import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from umbral.analytic_fn import (AnalyticFn, HierarchyParams, Singularity, antiderivative,
                                as_analytic, derivative, hierarchy_check)
from umbral.errors import DomainError, SingularityError

EXP = AnalyticFn(np.exp, name="exp")
RECIP = AnalyticFn(lambda z: 1 / z, (Singularity(0j, 1.0),), name="1/z")
BERN = AnalyticFn(lambda z: z * np.exp(z) / np.expm1(z),
                  tuple(Singularity(2j * math.pi * k, 1.0) for k in (-1, 1)), name="B")

complexes = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def test_derivative_examples():
    assert abs(derivative(EXP, 0, 5) - 1) < 1e-12
    assert abs(derivative(RECIP, 1, 2) - 2) < 1e-11
    # B at a removable singularity: 4th derivative is the moment -1/30
    b = AnalyticFn(lambda z: np.where(z == 0, 1, z * np.exp(z) / np.expm1(z)),
                   BERN.singularities)
    assert abs(b.derivative(0.0, 4, radius=1.0) + 1 / 30) < 1e-12


def test_derivative_at_singularity_refused():
    with pytest.raises(SingularityError):
        RECIP.derivative(0.0, 1)


def test_antiderivative_examples():
    one = as_analytic(lambda z: np.ones_like(z))
    assert abs(antiderivative(one, 0, 2 + 1j) - (2 + 1j)) < 1e-14
    assert abs(antiderivative(RECIP, 1, 2) - math.log(2)) < 1e-14
    sq = as_analytic(lambda z: z * z)
    assert abs(antiderivative(sq, 0, 3) - 9) < 1e-13


def test_antiderivative_path_through_pole():
    with pytest.raises(SingularityError):
        antiderivative(RECIP, -1, 1)


@settings(max_examples=25, deadline=None)
@given(complexes)
def test_derivative_matches_finite_difference(z):
    f = AnalyticFn(lambda w: np.sin(w) * np.exp(w / 3), name="g")
    h = 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.derivative(z, 1) - fd) < 1e-8 * max(1, abs(fd))


@settings(max_examples=25, deadline=None)
@given(complexes, complexes, complexes)
def test_path_independence(z0, z1, z2):
    f = AnalyticFn(lambda w: np.cos(w) + w ** 3, name="g")
    lhs = antiderivative(f, z0, z1) + antiderivative(f, z1, z2)
    rhs = antiderivative(f, z0, z2)
    assert abs(lhs - rhs) < 1e-11 * max(1, abs(rhs))


@settings(max_examples=15, deadline=None)
@given(st.complex_numbers(min_magnitude=0.5, max_magnitude=3, allow_nan=False,
                          allow_infinity=False))
def test_fundamental_theorem(z):
    f = AnalyticFn(lambda w: np.exp(-w * w / 4) + np.cos(w), name="g")
    F = AnalyticFn(lambda w: np.vectorize(lambda u: antiderivative(f, 1, u, tol=1e-14),
                                          otypes=[complex])(w), name="F")
    assert abs(F.derivative(z, 1, radius=0.25) - f(z)) < 1e-9


def test_taylor_coefficients():
    c = EXP.taylor(np.asarray(0j), 10)
    want = [1 / math.factorial(k) for k in range(11)]
    assert np.max(np.abs(c - want)) < 1e-14


def test_shifted_and_derivative_fn():
    g = RECIP.shifted(2.0)
    assert abs(g(1.0) - 1 / 3) < 1e-15
    assert g.singularities[0].point == -2
    d = RECIP.derivative_fn(1)
    assert abs(d(2.0) + 0.25) < 1e-12


def test_hierarchy_examples():
    hp = HierarchyParams(-2 * math.pi, 0, 2 * math.pi, 0, 0)
    rep = hierarchy_check(RECIP, hp, (5, 10, 20))
    assert rep.consistent
    assert rep.norms_plus[0] > rep.norms_plus[1] > rep.norms_plus[2]

    grow = AnalyticFn(lambda z: np.exp(3 * math.pi * z), name="e^{3 pi z}")
    assert not hierarchy_check(grow, hp).consistent

    one = AnalyticFn(lambda z: np.ones_like(z), name="1")
    rep = hierarchy_check(one, HierarchyParams(-2 * math.pi, 0, 2 * math.pi, 0, 1))
    assert rep.consistent
    assert max(rep.norms_plus + rep.norms_minus) == 0


def test_hierarchy_params_validation():
    with pytest.raises(DomainError):
        HierarchyParams(0, -1, 0, 0)


def test_call_broadcasts_scalars():
    const = AnalyticFn(lambda z: 2.0)
    assert const(np.zeros(3)).shape == (3,)
    assert const(1j) == 2
    assert isinstance(EXP(0.0), complex)
    assert abs(EXP(1j * math.pi) + 1) < 1e-15
    assert cmath.isclose(EXP(1.0), math.e)
