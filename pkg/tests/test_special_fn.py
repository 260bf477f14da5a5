import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from umbral.errors import DomainError
from umbral.special_fn import (bernoulli_fractions, bernoulli_moments, bernoulli_numbers,
                               bernoulli_poly, constants, digamma, eta_borwein,
                               euler_numbers, gamma_complex, gamma_product,
                               loggamma_stirling, zeta_complex, zeta_derivative)


def test_bernoulli_examples():
    B = bernoulli_numbers(4)
    assert B[2] == pytest.approx(1 / 6, abs=1e-16)
    assert B[1] == -0.5
    assert bernoulli_moments(3)[1] == 0.5
    assert bernoulli_moments(3)[3] == 0.0
    assert bernoulli_poly(2, 0.5) == pytest.approx(-1 / 12, abs=1e-16)


def test_bernoulli_against_oracle():
    B1 = bernoulli_moments(40)
    for n in range(41):
        assert B1[n] == pytest.approx(O.bernoulli_at_one(n), rel=1e-14, abs=1e-300)


def test_bernoulli_recurrence_exact():
    B = bernoulli_fractions(30)
    for n in range(1, 30):
        assert sum(math.comb(n + 1, k) * B[k] for k in range(n + 1)) == 0


def test_bernoulli_bounds():
    with pytest.raises(DomainError):
        bernoulli_numbers(61)
    with pytest.raises(DomainError):
        bernoulli_numbers(-1)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
@pytest.mark.parametrize("x", [0.5, -1.25, 3, 0.3 + 0.7j, -2 - 1j])
def test_bernoulli_poly_oracle(n, x):
    want = O.bernpoly(n, x)
    assert abs(bernoulli_poly(n, x) - want) <= 1e-12 * max(1, abs(want))


def test_euler_numbers():
    E = euler_numbers(12)
    assert E[:7] == [1, 0, -1, 0, 5, 0, -61]
    for n in range(0, 13, 2):
        assert E[n] == pytest.approx(O.euler_moment(n), rel=1e-12)


def test_gamma_examples():
    assert gamma_complex(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma_complex(5) == pytest.approx(24, rel=1e-13)
    g = gamma_complex(1 + 1j)
    assert g.real == pytest.approx(0.49802, abs=1e-5)
    assert abs(g) == pytest.approx(0.5215640468649, abs=1e-12)
    assert abs(g - gamma_product(1 + 1j)) < 1e-9
    with pytest.raises(DomainError):
        gamma_complex(-3)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=12, allow_nan=False, allow_infinity=False))
def test_gamma_functional_equation(z):
    if min(abs(z - k) for k in range(0, -15, -1)) < 0.05:
        return
    lhs, rhs = gamma_complex(z + 1), z * gamma_complex(z)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs) + 1e-300


@pytest.mark.parametrize("z", [0.3, 2.5 + 1j, -1.7 + 0.2j, 11 - 4j, 25.5])
def test_gamma_oracle(z):
    want = O.gamma(z)
    assert abs(gamma_complex(z) - want) <= 1e-12 * abs(want)


def test_legendre_duplication():
    z = 0.25
    lhs = gamma_complex(z) * gamma_complex(z + 0.5)
    rhs = 2 ** (1 - 2 * z) * math.sqrt(math.pi) * gamma_complex(2 * z)
    assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_loggamma_and_digamma():
    for z in (3.5, 1 + 2j, 10 - 1j):
        assert abs(loggamma_stirling(z) - O.loggamma(z)) < 1e-12
    import mpmath as mp
    for z in (0.5, 2 + 1j, -0.5 + 3j):
        assert abs(digamma(z) - complex(mp.digamma(z))) < 1e-11


def test_zeta_examples():
    assert zeta_complex(2) == pytest.approx(math.pi ** 2 / 6, abs=1e-13)
    assert zeta_complex(-1) == pytest.approx(-1 / 12, abs=1e-13)
    assert zeta_complex(0) == pytest.approx(-0.5, abs=1e-13)
    assert zeta_derivative(0).real == pytest.approx(-O.LOG_SQRT_2PI, abs=1e-10)
    with pytest.raises(DomainError):
        zeta_complex(1)


@pytest.mark.parametrize("s", [0.5, 1.5 + 3j, -2.5, -7 + 1j, 3, 0.5 + 14.1j, 1 + 1e-4])
def test_zeta_oracle(s):
    want = O.zeta(s)
    assert abs(zeta_complex(s) - want) <= 1e-10 * max(1, abs(want))


def test_eta():
    assert eta_borwein(1 + 0j) == pytest.approx(math.log(2), abs=1e-13)


def test_zeta_pole_behaviour():
    for s in (1e-2, 1e-3, 1e-4):
        assert abs(zeta_complex(1 + s) * s - 1) < 2 * s
    # the finite part tends to +gamma; the O(s) term is -gamma_1 s ~ 7.3e-6 here
    s = 1e-4
    assert abs(zeta_complex(1 + s) - 1 / s - O.EULER_GAMMA) < 1e-5
    assert abs(zeta_complex(1 + s) - 1 / s - O.EULER_GAMMA - 0.0728158454836767 * s) < 1e-8


def test_constants_table():
    K = constants()
    assert K.euler_gamma == pytest.approx(O.EULER_GAMMA, abs=1e-12)
    assert K.log_sqrt_2pi == pytest.approx(O.LOG_SQRT_2PI, abs=1e-15)
    assert K.glaisher_log == pytest.approx(O.GLAISHER_LOG, abs=1e-12)
    assert set(K.provenance) == {"euler_gamma", "log_sqrt_2pi", "glaisher_log"}
