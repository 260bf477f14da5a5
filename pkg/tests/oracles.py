"""Independent reference values computed with mpmath at 30 digits.

Nothing here imports the package under test.
"""

import mpmath as mp

mp.mp.dps = 30


def c(x) -> complex:
    return complex(x)


EULER_GAMMA = float(mp.euler)
LOG_SQRT_2PI = float(mp.log(mp.sqrt(2 * mp.pi)))
GLAISHER_LOG = float(mp.log(mp.glaisher))
PI = float(mp.pi)


def zeta(s) -> complex:
    return c(mp.zeta(mp.mpc(s)))


def bernoulli_at_one(n: int) -> float:
    """B_n(1): the moments of the Bernoulli umbra."""
    return float(mp.bernpoly(n, 1))


def bernpoly(n: int, x) -> complex:
    return c(mp.bernpoly(n, mp.mpc(x)))


def euler_moment(n: int) -> float:
    """n-th derivative of sech at 0."""
    return float(mp.diff(mp.sech, 0, n))


def gen_B(z) -> complex:
    z = mp.mpc(z)
    return c(1 if z == 0 else z * mp.exp(z) / (mp.exp(z) - 1))


def gen_E(z) -> complex:
    return c(mp.sech(mp.mpc(z)))


def loggamma(z) -> complex:
    return c(mp.loggamma(mp.mpc(z)))


def gamma(z) -> complex:
    return c(mp.gamma(mp.mpc(z)))


def harmonic(z) -> complex:
    return c(mp.harmonic(mp.mpc(z)))


def hurwitz_sum(s: int, x, y) -> complex:
    """sum_{k=x}^{y} k^-s = zeta(s, x) - zeta(s, y+1) for s >= 2."""
    return c(mp.zeta(s, mp.mpc(x)) - mp.zeta(s, mp.mpc(y) + 1))


def msum_reciprocal(x, y) -> complex:
    """sum_{k=x}^{y} 1/k = psi(y+1) - psi(x)."""
    return c(mp.digamma(mp.mpc(y) + 1) - mp.digamma(mp.mpc(x)))


def msum_log(x, y) -> complex:
    return c(mp.loggamma(mp.mpc(y) + 1) - mp.loggamma(mp.mpc(x)))


def besselj_normalized(nu, z) -> complex:
    """z^-nu J_nu(z), continued to z = 0."""
    z = mp.mpc(z)
    if z == 0:
        return c(1 / (mp.mpf(2) ** nu * mp.gamma(nu + 1)))
    return c(mp.besselj(nu, z) * z ** (-nu))


def em_value_zlogz() -> float:
    """B ln B."""
    return float((1 - mp.log(2 * mp.pi)) / 2)


def em_value_z2logz() -> float:
    return float(mp.mpf(1) / 4 - 2 * mp.log(mp.glaisher))


def bz(z) -> complex:
    """B^z = -z zeta(1-z)."""
    z = mp.mpc(z)
    return c(-z * mp.zeta(1 - z))
