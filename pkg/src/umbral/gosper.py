"""Gosper-type Bessel series.

Kernels are even entire functions J(z) = sum_n a_{2n} z^{2n} / (2n)!, the
main family being J(z) = z^-nu J_nu(z).  Two families of series are checked:

    sin:  sum_{n>=0} (-1)^n/(n+1/2) J(sqrt(b^2 + pi^2 (n+1/2)^2)) = pi/2 J(b)
    cos:  sum_{n>=1} (-1)^n/n^2     J(sqrt(b^2 + pi^2 n^2))       = -pi^2 J(b)/12 - pi^2 J'(b)/(4b)

and their fractional-sum counterparts (twice and four times these values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special as sp

from .analytic_fn import AnalyticFn, Singularity
from .errors import DomainError, NonConvergent
from .fracsum import TermwiseResult, frac_sum, termwise_sum

SERIES_RADIUS = 8.0
FAMILIES = ("sin", "cos")
# direct-sum value = umbral value / NORMALIZATION[family]
NORMALIZATION = {"sin": 2.0, "cos": 4.0}


def _bessel_series(nu: float, z2: np.ndarray) -> np.ndarray:
    """sum_n (-z^2/4)^n / (2^nu n! Gamma(n+nu+1)), as a function of z^2."""
    t = np.full(z2.shape, 1.0 / (2.0 ** nu * math.gamma(nu + 1)), dtype=complex)
    s = t.copy()
    q = -z2 / 4
    bound = float(np.max(np.abs(z2), initial=0.0))
    for n in range(400):
        t = t * q / ((n + 1) * (n + 1 + nu))
        s = s + t
        if n > math.sqrt(bound) / 2 + 2 and np.all(np.abs(t) <= 1e-17 * np.abs(s)):
            break
    return s


def bessel_kernel(nu: float, z):
    """z^-nu J_nu(z), even and entire in z.

    Power series for |z| <= 8, closed forms for nu = +-1/2, and scipy's
    complex J_nu further out (evaluated at the root with Re z >= 0 so that
    z and -z give the same bits).
    """
    nu = float(nu)
    if nu < 0 and nu == int(nu):
        raise DomainError(f"nu = {nu:g}: Gamma(nu+1) is singular")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    flip = (z.real < 0) | ((z.real == 0) & (z.imag < 0))
    z = np.where(flip, -z, z)
    if nu == 0.5:
        tiny = np.abs(z) < 1e-4
        safe = np.where(tiny, 1.0, z)
        z2 = z * z
        # sin z / z = 1 - z^2/6 + z^4/120 below 1e-4
        out = math.sqrt(2 / math.pi) * np.where(tiny, 1 - z2 / 6 + z2 * z2 / 120,
                                                np.sin(safe) / safe)
    elif nu == -0.5:
        out = math.sqrt(2 / math.pi) * np.cos(z)
    else:
        out = np.empty(z.shape, dtype=complex)
        small = np.abs(z) <= SERIES_RADIUS
        if np.any(small):
            out[small] = _bessel_series(nu, z[small] ** 2)
        if np.any(~small):
            zl = z[~small]
            out[~small] = sp.jv(nu, zl) * zl ** (-nu)
    return complex(out[0]) if scalar else out


def _bessel_coeffs(nu: float, count: int) -> np.ndarray:
    """a_{2n} = (2n)! (-1)^n / (2^{nu+2n} n! Gamma(n+nu+1)), n < count."""
    n = np.arange(count)
    la = (sp.gammaln(2 * n + 1) - (nu + 2 * n) * math.log(2) - sp.gammaln(n + 1)
          - sp.gammaln(n + nu + 1))
    return (-1.0) ** n * np.exp(la) * sp.gammasgn(n + nu + 1)


@dataclass(frozen=True)
class KernelSpec:
    """An even kernel J, given either as scale * z^-nu J_nu(z) or by its
    coefficients a_0, a_2, a_4, ... (J(z) = sum a_{2n} z^{2n}/(2n)!).

    nu_a and nu_J are the growth exponents; None means "measure them".
    """
    nu: Optional[float] = None
    coeffs: Optional[tuple] = None
    scale: complex = 1.0
    nu_a: Optional[float] = None
    nu_J: Optional[float] = None
    name: str = "J"

    def __post_init__(self):
        if (self.nu is None) == (self.coeffs is None):
            raise DomainError("give exactly one of nu or coeffs")
        if self.nu is not None and self.nu < 0 and self.nu == int(self.nu):
            raise DomainError(f"nu = {self.nu:g}: Gamma(nu+1) is singular")

    def __call__(self, z):
        if self.nu is not None:
            return self.scale * bessel_kernel(self.nu, z)
        return self.scale * self._poly(np.asarray(z, dtype=complex) ** 2, 0)

    def of_square(self, w):
        """J(sqrt(w)); branch free since J is even."""
        return self(np.sqrt(np.asarray(w, dtype=complex)))

    def d_over_z(self, z):
        """J'(z)/z, finite at z = 0."""
        if self.nu is not None:
            return -self.scale * bessel_kernel(self.nu + 1, z)
        return self.scale * self._poly(np.asarray(z, dtype=complex) ** 2, 1)

    def _poly(self, z2, shift):
        # sum_n a_{2n} z^{2n-2 shift} / (2n - shift)!
        out = np.zeros(np.shape(z2), dtype=complex)
        if np.any(np.abs(z2) > 50.0 ** 2):
            raise DomainError("coefficient kernels are limited to |z| <= 50")
        for n in range(len(self.coeffs) - 1, shift - 1, -1):
            out = out * z2 + self.coeffs[n] / math.factorial(2 * n - shift)
        return out

    def a2n(self, count: int) -> np.ndarray:
        if self.nu is not None:
            return self.scale * _bessel_coeffs(self.nu, count)
        c = np.zeros(count, dtype=complex)
        m = min(count, len(self.coeffs))
        c[:m] = np.asarray(self.coeffs[:m], dtype=complex) * self.scale
        return c

    @property
    def decay(self) -> float:
        """lam with |J(x)| ~ x^-lam on the positive axis (phase removed)."""
        if self.nu is not None:
            return self.nu + 0.5
        raise DomainError("direct series need a Bessel-type kernel")


def bessel(nu: float, scale: complex = 1.0, name: Optional[str] = None) -> KernelSpec:
    return KernelSpec(nu=float(nu), scale=scale, name=name or f"z^-{nu:g} J_{nu:g}")


def sin_kernel() -> KernelSpec:
    """sin z / z."""
    return bessel(0.5, math.sqrt(math.pi / 2), "sin z/z")


def cos_kernel() -> KernelSpec:
    """cos z."""
    return bessel(-0.5, math.sqrt(math.pi / 2), "cos z")


def gosper_rhs(J: KernelSpec, b, family: str) -> complex:
    """Closed form of the direct series."""
    b = complex(b)
    if family == "sin":
        return complex(math.pi / 2 * J(b))
    if family == "cos":
        return complex(-math.pi ** 2 * J(b) / 12 - math.pi ** 2 * J.d_over_z(b) / 4)
    raise DomainError(f"unknown family {family!r}")


@dataclass
class DirectSum:
    value: complex
    err_est: float
    N: list
    partials: list
    extrapolated: list = field(default_factory=list)


def _richardson(Ns, vals, exps) -> list:
    """Successive elimination of c_k N^-e_k for N doubling.  Returns the
    diagonal (best estimate using the first 1, 2, ... levels)."""
    T = [complex(v) for v in vals]
    diag = [T[-1]]
    for k, e in enumerate(exps[: len(vals) - 1]):
        f = 2.0 ** e
        T = [(f * T[i + 1] - T[i]) / (f - 1) for i in range(len(T) - 1)]
        diag.append(T[-1])
    return diag


def _direct(J: KernelSpec, b, family: str, N0: int, levels: int, tol: float) -> DirectSum:
    b2 = complex(b) ** 2
    if family == "sin":
        m = np.arange(N0 * 2 ** (levels - 1)) + 0.5
        sign = (-1.0) ** np.arange(len(m))
        terms = sign / m * J.of_square(b2 + (math.pi * m) ** 2)
        lead = J.decay
    elif family == "cos":
        m = np.arange(1, N0 * 2 ** (levels - 1) + 1, dtype=float)
        terms = (-1.0) ** m / m ** 2 * J.of_square(b2 + (math.pi * m) ** 2)
        lead = J.decay + 1
    else:
        raise DomainError(f"unknown family {family!r}")
    if lead <= 0:
        raise NonConvergent(f"{J.name}: terms do not decay (exponent {lead:g})")
    Ns = [N0 * 2 ** j for j in range(levels)]
    parts = [complex(math.fsum(terms[:N].real), math.fsum(terms[:N].imag)) for N in Ns]
    diag = _richardson(Ns, parts, [lead + k for k in range(levels)])
    value = diag[-1]
    err = abs(diag[-1] - diag[-2]) + 1e-15 * float(np.sum(np.abs(terms)))
    if not np.isfinite(value) or err > max(tol, 1e-6 * max(1.0, abs(value))):
        raise NonConvergent(f"direct {family} series stalls (spread {err:.3g})")
    return DirectSum(value, err, Ns, parts, diag)


def direct_sum(J: KernelSpec, b, family: str, N0: int = 256, levels: int = 7,
               tol: float = 1e-9) -> DirectSum:
    return _direct(J, b, family, N0, levels, tol)


def gosper_direct_sin(J: KernelSpec, b, N0: int = 256, levels: int = 7) -> complex:
    return direct_sum(J, b, "sin", N0, levels).value


def gosper_direct_cos(J: KernelSpec, b, N0: int = 256, levels: int = 7) -> complex:
    return direct_sum(J, b, "cos", N0, levels).value


def gosper_fn(J: KernelSpec, b, family: str) -> AnalyticFn:
    """n -> J(sqrt(b^2 + (2 pi n)^2)) / n^k with k = 1 (sin) or 2 (cos)."""
    k = {"sin": 1, "cos": 2}.get(family)
    if k is None:
        raise DomainError(f"unknown family {family!r}")
    b2 = complex(b) ** 2

    def f(n):
        n = np.asarray(n, dtype=complex)
        return J.of_square(b2 + (2 * math.pi * n) ** 2) / n ** k

    return AnalyticFn(f, (Singularity(0j, float(k)),), name=f"{J.name}[{family}]")


def gosper_umbral(J: KernelSpec, b, family: str, **kw) -> complex:
    f = gosper_fn(J, b, family)
    if family == "sin":
        return frac_sum(f, 0.25, -0.25, **kw)
    return frac_sum(f, 1, -0.5, **kw)


def umbral_rhs(J: KernelSpec, b, family: str) -> complex:
    return NORMALIZATION[family] * gosper_rhs(J, b, family)


def gosper_expansion(J: KernelSpec, b, family: str, terms: int = 25):
    """Laurent data of gosper_fn about 0 in the form termwise_sum expects.

    J(sqrt(b^2 + w)) = sum_j C_j w^j with
    C_j = sum_{m>=j} a_{2m}/(2m)! binom(m, j) b^{2(m-j)}, and w = (2 pi n)^2.
    """
    k = {"sin": 1, "cos": 2}[family]
    M = terms + 40
    a = J.a2n(M)
    b2 = complex(b) ** 2
    C = np.zeros(terms, dtype=complex)
    for j in range(terms):
        acc = 0j
        for m in range(j, M):
            acc += a[m] / math.factorial(2 * m) * math.comb(m, j) * b2 ** (m - j)
        C[j] = acc * (4 * math.pi ** 2) ** j
    neg = {}
    pos = [0j] * (2 * terms)
    for j in range(terms):
        p = 2 * j - k
        if p < 0:
            neg[-p] = neg.get(-p, 0j) + C[j]
        elif p < len(pos):
            pos[p] += C[j] * math.factorial(p)
    return neg, pos


def gosper_termwise(J: KernelSpec, b, family: str, terms: int = 25,
                    with_direct: bool = True) -> TermwiseResult:
    neg, pos = gosper_expansion(J, b, family, terms)
    x, y = (0.25, -0.25) if family == "sin" else (1, -0.5)
    f = gosper_fn(J, b, family) if with_direct else None
    return termwise_sum(neg, pos, x, y, f_direct=f)


@dataclass
class GrowthReport:
    nu_a: float
    nu_J: float
    admissible_n: float
    notes: list = field(default_factory=list)

    def permits(self, family: str) -> bool:
        limit = 0.0 if family == "sin" else 1.0
        return self.nu_a < limit + 1e-9 and self.nu_J < limit + 1e-9


def _slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def growth_validate(J: KernelSpec, count: int = 200) -> GrowthReport:
    """Fit |a_n| <= C (1+n)^nu_a and |J(z)| <= C e^|Im z| (1+|z|)^nu_J (Re z > 0)."""
    notes = []
    a = np.abs(J.a2n(count))
    idx = np.nonzero(a > 1e-300)[0]
    if len(idx) < 3:
        nu_a = 0.0
        notes.append("finitely many nonzero coefficients: bounded, nu_a = 0")
    else:
        sel = idx[idx >= count // 4] if np.sum(idx >= count // 4) >= 3 else idx
        nu_a = _slope(1 + 2 * sel, a[sel])
    if J.nu is None:
        nu_J = max(0.0, nu_a) if len(idx) >= 3 else 0.0
        notes.append("nu_J not measurable from coefficients alone; bounded by nu_a")
    else:
        R = 10.0 * 2.0 ** np.arange(6)
        env = []
        for r in R:
            rr = np.linspace(r, 2 * r, 400)
            best = 0.0
            for th in np.linspace(-np.pi / 4, np.pi / 4, 5):
                z = rr * np.exp(1j * th)
                best = max(best, float(np.max(np.abs(J(z)) * np.exp(-np.abs(z.imag)))))
            env.append(best)
        nu_J = _slope(1 + R, np.array(env))
    if J.nu_a is not None and nu_a > J.nu_a + 0.05:
        notes.append(f"declared nu_a = {J.nu_a:g} is below the measured {nu_a:.3g}")
    if J.nu_J is not None and nu_J > J.nu_J + 0.05:
        notes.append(f"declared nu_J = {J.nu_J:g} is below the measured {nu_J:.3g}")
    return GrowthReport(nu_a, nu_J, max(nu_a, nu_J) + 1, notes)
