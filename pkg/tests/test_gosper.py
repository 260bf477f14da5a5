import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from umbral.errors import DomainError
from umbral.gosper import (KernelSpec, NORMALIZATION, bessel, bessel_kernel, cos_kernel,
                           direct_sum, gosper_direct_cos, gosper_direct_sin, gosper_expansion,
                           gosper_rhs, gosper_termwise, gosper_umbral, growth_validate,
                           sin_kernel, umbral_rhs)

PI = math.pi
S, C = sin_kernel(), cos_kernel()
SQ = math.sqrt(2 / PI)


def test_kernel_examples():
    assert abs(bessel_kernel(0.5, 2) - SQ * math.sin(2) / 2) < 1e-15
    assert abs(bessel_kernel(-0.5, 2) - SQ * math.cos(2)) < 1e-15
    assert abs(bessel_kernel(0.5, 0) - SQ) < 1e-15
    with pytest.raises(DomainError):
        bessel_kernel(-2, 1.0)


@pytest.mark.parametrize("nu", [0, 0.3, 1, 2.5, -0.3, -1.5])
@pytest.mark.parametrize("z", [0.1, 3 + 1j, 7.9j, 12, 30 - 5j, -4 + 2j, 45])
def test_kernel_oracle(nu, z):
    want = O.besselj_normalized(nu, z)
    assert abs(bessel_kernel(nu, z) - want) <= 1e-12 * max(1, abs(want))


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=40, allow_nan=False, allow_infinity=False),
       st.sampled_from([0.5, -0.5, 0.0, 1.3]))
def test_kernel_evenness(z, nu):
    assert bessel_kernel(nu, z) == bessel_kernel(nu, -z)


def test_kernel_spec_validation():
    with pytest.raises(DomainError):
        KernelSpec()
    with pytest.raises(DomainError):
        KernelSpec(nu=0.5, coeffs=(1,))
    poly = KernelSpec(coeffs=(1.0, -2.0))  # 1 - z^2
    assert abs(poly(3.0) - (1 - 9)) < 1e-13
    assert abs(poly.d_over_z(3.0) + 2) < 1e-13


def test_named_kernels():
    for z in (0.7, 2 + 1j, 9.0):
        assert abs(S(z) - cmath.sin(z) / z) < 1e-14
        assert abs(C(z) - cmath.cos(z)) < 1e-14
        assert abs(C.d_over_z(z) + cmath.sin(z) / z) < 1e-14


@pytest.mark.parametrize("b", [1e-8, 0.5, 1, 2, 1 + 1j, 2j])
def test_identity_closure(b):
    for fam, J in (("sin", S), ("cos", C)):
        r = direct_sum(J, b, fam)
        assert abs(r.value - gosper_rhs(J, b, fam)) < 1e-6
        assert r.err_est < 1e-6


def test_direct_examples():
    assert abs(gosper_direct_sin(S, 1e-8) - PI / 2) < 1e-6
    assert abs(gosper_direct_sin(S, 1) - 1.3217795320407) < 1e-7
    b = 1 + 1j
    assert abs(gosper_direct_sin(S, b) - PI * cmath.sin(b) / (2 * b)) < 1e-6
    assert abs(gosper_direct_cos(C, 0) - PI ** 2 / 6) < 1e-6
    assert abs(gosper_direct_cos(C, 1) - PI ** 2 / 4 * (math.sin(1) - math.cos(1) / 3)) < 1e-6
    b = 2j
    want = PI ** 2 / 4 * (cmath.sin(b) / b - cmath.cos(b) / 3)
    assert abs(gosper_direct_cos(C, b) - want) < 1e-6


@pytest.mark.parametrize("nu", [0.3, 1.0, 2.5])
def test_general_bessel(nu):
    J = bessel(nu)
    for b in (0.7, 1.5 + 0.5j):
        assert abs(direct_sum(J, b, "sin").value - gosper_rhs(J, b, "sin")) < 1e-8
        assert abs(direct_sum(J, b, "cos").value - gosper_rhs(J, b, "cos")) < 1e-8


@pytest.mark.parametrize("b", [0.5, 1.0])
def test_route_agreement(b):
    for fam, J in (("sin", S), ("cos", C)):
        u = gosper_umbral(J, b, fam)
        assert abs(u - NORMALIZATION[fam] * direct_sum(J, b, fam).value) < 1e-5


def test_umbral_examples():
    J = bessel(0.5)
    assert abs(gosper_umbral(J, 1, "sin") - PI * SQ * math.sin(1)) < 1e-8
    want = -PI ** 2 * J(1.0) / 3 - PI ** 2 * J.d_over_z(1.0)
    assert abs(gosper_umbral(J, 1, "cos") - want) < 1e-8
    assert abs(gosper_umbral(J, 1e-9, "sin") - PI * SQ) < 1e-7
    assert abs(umbral_rhs(J, 1, "cos") - want) < 1e-14


def test_expansion_reassembles_kernel():
    neg, pos = gosper_expansion(S, 1.0, "sin", terms=25)
    n = 0.3
    val = sum(b * n ** -m for m, b in neg.items())
    val += sum(a * n ** k / math.factorial(k) for k, a in enumerate(pos))
    want = S(cmath.sqrt(1 + (2 * PI * n) ** 2)) / n
    assert abs(val - want) < 1e-12


def test_termwise():
    for fam, J in (("sin", S), ("cos", C)):
        r = gosper_termwise(J, 1.0, fam)
        assert r.licensed
        assert r.gap < 1e-6
        assert abs(r.termwise - umbral_rhs(J, 1.0, fam)) < 1e-6
    r = gosper_termwise(S, 1.0, "sin")
    assert abs(r.termwise - PI * math.sin(1)) < 1e-6


def test_growth_reports():
    r = growth_validate(bessel(0.5))
    assert abs(r.nu_a + 1) < 0.05
    assert r.nu_J <= 0.05  # the exponent bound nu_J = 0 holds (measured about -1)
    r = growth_validate(bessel(-0.5))
    assert abs(r.nu_a) < 0.05 and abs(r.nu_J) < 0.05
    assert r.admissible_n == pytest.approx(1, abs=0.05)
    assert growth_validate(KernelSpec(coeffs=(1.0,))).nu_a == 0
    assert growth_validate(S).permits("sin") and growth_validate(C).permits("cos")
