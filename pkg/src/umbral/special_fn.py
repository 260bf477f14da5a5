"""Reference oracles: Bernoulli and Euler numbers, complex gamma, zeta and
digamma, and the constants gamma, ln sqrt(2 pi) and ln A (Glaisher-Kinkelin).

These routines are deliberately independent of the umbral engine so that they
can serve as its oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .analytic_fn import AnalyticFn
from .errors import DomainError, NonConvergent

N_MAX = 60


@lru_cache(maxsize=None)
def _bernoulli_table(n_max: int) -> tuple:
    # sum_{k=0}^{m} C(m+1, k) B_k = 0, B_1 = -1/2
    B = [Fraction(1)]
    for m in range(1, n_max + 1):
        s = sum(comb(m + 1, k) * B[k] for k in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli_fractions(n_max: int, plus: bool = False) -> list:
    """Exact B_0..B_{n_max}; ``plus=True`` gives B_n(1) (B_1 = +1/2)."""
    if n_max < 0 or n_max > N_MAX:
        raise DomainError(f"n_max must lie in [0, {N_MAX}]")
    B = list(_bernoulli_table(n_max))
    if plus and n_max >= 1:
        B[1] = -B[1]
    return B


def bernoulli_numbers(n_max: int, plus: bool = False) -> list:
    return [float(b) for b in bernoulli_fractions(n_max, plus)]


def bernoulli_moments(n_max: int) -> list:
    """B_n(1), the moments of the Bernoulli umbra z e^z/(e^z-1)."""
    return bernoulli_numbers(n_max, plus=True)


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float) and math.isfinite(x):
        return Fraction(x)
    if isinstance(x, complex) and x.imag == 0 and math.isfinite(x.real):
        return Fraction(x.real)
    return None


def bernoulli_poly(n: int, x):
    """B_n(x) = sum_k C(n,k) B_k x^{n-k}.

    Real arguments are evaluated in exact rational arithmetic and rounded
    once; complex arguments use Horner's rule in floating point.
    """
    B = bernoulli_fractions(n)
    xe = _exact(x)
    if xe is not None:
        return float(sum(comb(n, k) * B[k] * xe ** (n - k) for k in range(n + 1)))
    x = complex(x)
    acc = 0j
    for k in range(n + 1):  # coefficient of x^{n-k}, highest power first
        acc = acc * x + comb(n, k) * float(B[k])
    return acc


@lru_cache(maxsize=None)
def _euler_table(n_max: int) -> tuple:
    E = [0] * (n_max + 1)
    E[0] = 1
    for n in range(2, n_max + 1, 2):
        E[n] = -sum(comb(n, k) * E[k] for k in range(0, n, 2))
    return tuple(E)


def euler_numbers(n_max: int) -> list:
    """Euler numbers E_0..E_{n_max} (moments of sech z): 1, 0, -1, 0, 5, ..."""
    if n_max < 0 or n_max > N_MAX:
        raise DomainError(f"n_max must lie in [0, {N_MAX}]")
    return list(_euler_table(n_max))


# -- Gamma ----------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _check_pole(z: complex):
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Gamma has a pole at {z.real:g}")


def gamma_complex(z) -> complex:
    """Complex Gamma via the Lanczos approximation (g=7, 9 terms) with reflection."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1 - z))
    z -= 1
    x = _LANCZOS_C[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def loggamma_stirling(z) -> complex:
    """ln Gamma(z) for Re z > 0 by upward recurrence and the Stirling series."""
    z = complex(z)
    if z.real <= 0:
        raise DomainError("loggamma_stirling needs Re z > 0")
    shift = 0j
    while abs(z) < 20:
        shift += cmath.log(z)
        z += 1
    B = bernoulli_numbers(20)
    s = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2 * math.pi)
    for k in range(1, 11):
        s += B[2 * k] / (2 * k * (2 * k - 1) * z ** (2 * k - 1))
    return s - shift


def gamma_product(z) -> complex:
    """Independent Gamma route: Gamma(z) = Gamma(z+N) / (z (z+1) ... (z+N-1))
    with Gamma(z+N) from the Stirling series."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_product(1 - z))
    return cmath.exp(loggamma_stirling(z))


def digamma(z) -> complex:
    """psi(z) by recurrence to |z| >= 20 and the asymptotic Bernoulli series."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        return digamma(1 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0j
    while abs(z) < 20:
        acc -= 1 / z
        z += 1
    B = bernoulli_numbers(20)
    s = cmath.log(z) - 1 / (2 * z)
    for k in range(1, 11):
        s -= B[2 * k] / (2 * k * z ** (2 * k))
    return s + acc


# -- Zeta -------------------------------------------------------------------

_BORWEIN_N = 60


@lru_cache(maxsize=None)
def _borwein_d(n: int) -> np.ndarray:
    d = []
    acc = 0.0
    for i in range(n + 1):
        acc += math.exp(math.lgamma(n + i) - math.lgamma(n - i + 1) - math.lgamma(2 * i + 1)
                        + i * math.log(4)) * n
        d.append(acc)
    return np.array(d)


def eta_borwein(s) -> complex:
    """Dirichlet eta by Borwein's accelerated alternating series."""
    s = complex(s)
    n = _BORWEIN_N
    d = _borwein_d(n)
    k = np.arange(n)
    terms = (-1.0) ** k * (d[:-1] - d[-1]) * np.exp(-s * np.log(k + 1.0))
    return complex(-np.sum(terms) / d[-1])


def zeta_complex(s) -> complex:
    """Riemann zeta: eta series for Re s >= 0, functional equation below."""
    s = complex(s)
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if s.real >= 0:
        denom = -cmath.exp((1 - s) * math.log(2)) + 1
        if abs(1 - s) < 1e-3:
            # 1 - 2^{1-s} = -expm1((1-s) ln 2), series to avoid cancellation
            u = (1 - s) * math.log(2)
            denom = -(u + u * u / 2 + u ** 3 / 6 + u ** 4 / 24)
        return eta_borwein(s) / denom
    if s.imag == 0 and s.real == math.floor(s.real) and int(s.real) % 2 == 0:
        return 0j  # trivial zeros
    return (2 ** s * math.pi ** (s - 1) * cmath.sin(math.pi * s / 2)
            * gamma_complex(1 - s) * zeta_complex(1 - s))


def zeta_derivative(s, radius: float = 0.25) -> complex:
    f = AnalyticFn(np.vectorize(zeta_complex, otypes=[complex]), name="zeta")
    return complex(f.derivative(complex(s), 1, radius=radius))


# -- Constants -------------------------------------------------------------


@dataclass(frozen=True)
class ConstantsTable:
    euler_gamma: float
    log_sqrt_2pi: float
    glaisher_log: float
    provenance: dict


_GUARD = {
    "euler_gamma": 0.57721566490153286,
    "log_sqrt_2pi": 0.91893853320467274,
    "glaisher_log": 0.24875447703378426,
}


def euler_gamma_harmonic(n: int = 1000) -> float:
    """gamma = lim (H_n - ln n), with the Bernoulli asymptotic correction."""
    H = math.fsum(1.0 / k for k in range(1, n + 1))
    B = bernoulli_numbers(12)
    corr = 1 / (2 * n) - math.fsum(B[2 * k] / (2 * k * n ** (2 * k)) for k in range(1, 7))
    return H - math.log(n) - corr


def euler_gamma_from_gamma() -> float:
    """gamma = -Gamma'(1), Cauchy derivative of the Lanczos Gamma."""
    g = AnalyticFn(np.vectorize(gamma_complex, otypes=[complex]), name="Gamma")
    return -complex(g.derivative(1.0, 1, radius=0.5)).real


@lru_cache(maxsize=1)
def constants() -> ConstantsTable:
    g1 = euler_gamma_harmonic()
    g2 = euler_gamma_from_gamma()
    if abs(g1 - g2) > 1e-10:
        raise NonConvergent(f"Euler gamma routes disagree: {g1} vs {g2}")
    lnA = 1 / 12 - zeta_derivative(-1.0).real
    table = ConstantsTable(
        euler_gamma=g1,
        log_sqrt_2pi=0.5 * math.log(2 * math.pi),
        glaisher_log=lnA,
        provenance={
            "euler_gamma": "H_n - ln n with Bernoulli correction; checked against -Gamma'(1)",
            "log_sqrt_2pi": "arithmetic",
            "glaisher_log": "1/12 - zeta'(-1), Cauchy derivative of the zeta oracle",
        },
    )
    for k, v in _GUARD.items():
        if abs(getattr(table, k) - v) > 1e-12:
            raise NonConvergent(f"constant {k} drifted from its regression digits")
    return table
