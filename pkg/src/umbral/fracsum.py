"""Fractional sums sum_{k=x}^{y} f(k) with complex endpoints.

For Re x, Re y > -1 the sum is the limit as n -> inf of

    int_{n+x-1}^{n+y} f
      + sum_{k=1}^{p} B_k(1)/k! (f^(k-1)(n+y) - f^(k-1)(n+x-1))
      + sum_{j=1}^{n} (f(j+x-1) - f(j+y)),

which is F(B+y) - F(B+x-1) with the Euler-Maclaurin tail written out.
Endpoints further left are reached by peeling integer steps with
S(x, y) = S(x, y+1) - f(y+1) and S(x, y) = S(x+1, y) + f(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analytic_fn import (AnalyticFn, HierarchyParams, antiderivative, as_analytic,
                          degree_at_most, derivative_envelope, hierarchy_check)
from .contour import neville
from .errors import DomainError, NonConvergent, RouteInadmissible, SingularityError
from .special_fn import bernoulli_moments, bernoulli_poly

ETA = 1e-6
EPS = np.finfo(float).eps
_BM = bernoulli_moments(16)


@dataclass
class FracSumRequest:
    f: AnalyticFn
    x: complex
    y: complex
    n: int = 40
    p: int = 10
    tol: float = 1e-11
    n_max: int = 640

    def __post_init__(self):
        self.f = as_analytic(self.f)
        self.x, self.y = complex(self.x), complex(self.y)
        if not 1 <= self.p <= 16:
            raise DomainError("p must lie in [1, 16]")
        if self.n < 1 or self.tol <= 0:
            raise DomainError("n and tol must be positive")


@dataclass
class FracSumResult:
    value: complex
    err_est: float
    diagnostics: dict = field(default_factory=dict)


def _edge_terms(f: AnalyticFn, z: complex, p: int):
    """sum_{k=1}^{p} B_k(1)/k! f^(k-1)(z) = sum_k B_k(1) c_{k-1}(z) / k."""
    w = np.array([_BM[k] / k for k in range(1, p + 1)])
    c, level, _ = f.taylor_weighted(z, p - 1, w)
    return complex(np.dot(w, c[:p])), level


def _partial(f: AnalyticFn, x: complex, y: complex, n: int, p: int):
    a, b = n + x - 1, n + y
    integral = antiderivative(f, a, b, tol=1e-14)
    ey, ly = _edge_terms(f, b, p)
    ex, lx = _edge_terms(f, a, p)
    j = np.arange(1, n + 1)
    with np.errstate(all="ignore"):
        d = np.asarray(f.func(j + x - 1), dtype=complex) - np.asarray(f.func(j + y), dtype=complex)
    if not np.all(np.isfinite(d)):
        raise SingularityError(f"{f.name} is singular at a summation node")
    total = integral + ey - ex + complex(math.fsum(d.real), math.fsum(d.imag))
    level = lx + ly + 10 * EPS * (float(np.sum(np.abs(d))) + abs(integral))
    return total, level


def _admission(f: AnalyticFn, x: complex, y: complex, n: int, p: int, hierarchy: bool):
    diag = {}
    try:
        probe = derivative_envelope(f, [m + y.real for m in (n, 2 * n, 4 * n)], p)
    except (SingularityError, NonConvergent, DomainError) as e:
        raise RouteInadmissible(f"derivative probe failed: {e}") from e
    diag["probe"] = probe
    scale = abs(f(complex(n + y))) + 1e-300
    if not (max(probe) < 1e-9 * scale or probe[2] <= probe[1] * (1 + 1e-9) <= probe[0] * (1 + 2e-9)):
        raise RouteInadmissible(f"f^({p}) does not decay along the positive axis")
    if hierarchy:
        rep = hierarchy_check(f, HierarchyParams(-2 * math.pi, 0, 2 * math.pi, 0, p - 1))
        diag["hierarchy"] = rep.verdict
        if not rep.consistent:
            raise RouteInadmissible(f"hierarchy test failed: {'; '.join(rep.notes)}")
    return diag


def _core(req: FracSumRequest, hierarchy: bool) -> FracSumResult:
    f, x, y, p = req.f, req.x, req.y, req.p
    diag = _admission(f, x, y, req.n, p, hierarchy)
    ns, vals, levels = [], [], []
    n = req.n
    if degree_at_most(f, p - 1):
        # the bracket is exact at every n; small n avoids cancellation
        diag["polynomial"] = True
        n = 1
    while True:
        v, lev = _partial(f, x, y, n, p)
        ns.append(n)
        vals.append(v)
        levels.append(lev)
        if len(vals) >= 2:
            diff = abs(vals[-1] - vals[-2])
            if diff <= req.tol * max(1.0, abs(v)) + levels[-1] + levels[-2]:
                diag.update({"n_trail": ns, "trail": vals})
                return FracSumResult(v, diff + levels[-1], diag)
        if n >= req.n_max:
            break
        n *= 2
    # algebraic tails (oscillating f): extrapolate in 1/n
    h = [1.0 / k for k in ns]
    est = neville(h[::-1], vals[::-1])
    value, err = est[-1], abs(est[-1] - est[-2]) + max(levels)
    diag.update({"n_trail": ns, "trail": vals, "richardson": est})
    if err > 1e3 * req.tol * max(1.0, abs(value)) and err > 1e-7 * max(1.0, abs(value)):
        raise NonConvergent(f"fractional sum did not settle (extrapolation spread {err:.3g})")
    return FracSumResult(value, err, diag)


def frac_sum_full(req: FracSumRequest, hierarchy: bool = False) -> FracSumResult:
    """Fractional sum with error estimate and diagnostics."""
    f, x, y = req.f, req.x, req.y
    edge = -1 + ETA
    extra = 0j
    peeled = []
    while y.real <= edge:
        # S(x, y) = S(x, y+1) - f(y+1)
        y += 1
        extra -= f(y)
        peeled.append(("y", y))
    while x.real <= edge:
        # S(x, y) = S(x+1, y) + f(x)
        extra += f(x)
        x += 1
        peeled.append(("x", x - 1))
    inner = FracSumRequest(f, x, y, req.n, req.p, req.tol, req.n_max)
    r = _core(inner, hierarchy)
    r.value += extra
    r.diagnostics["peeled"] = peeled
    return r


def frac_sum(f, x, y, n: int = 40, p: int = 10, tol: float = 1e-11,
             hierarchy: bool = False) -> complex:
    return frac_sum_full(FracSumRequest(as_analytic(f), x, y, n, p, tol), hierarchy).value


def frac_sum_poly(coeffs: Sequence[complex], x, y) -> complex:
    """sum_{k=x}^{y} sum_m coeffs[m] k^m via
    sum_{k=x}^{y} k^m = (B_{m+1}(y+1) - B_{m+1}(x)) / (m+1)."""
    x, y = complex(x), complex(y)
    total = 0j
    for m, a in enumerate(coeffs):
        if a == 0:
            continue
        s = (bernoulli_poly(m + 1, _real_if(y + 1)) - bernoulli_poly(m + 1, _real_if(x))) / (m + 1)
        total += a * s
    return complex(total)


def _real_if(z: complex):
    return z.real if z.imag == 0 else z


@dataclass
class DerivativeGap:
    lhs: complex
    rhs: complex
    c_f: complex
    gap: float


def frac_sum_derivative(f, z, radius: float = 0.1, nodes: int = 16, **kw) -> DerivativeGap:
    """d/dz sum_{k=1}^{z} f(k) against f(B) + sum_{k=1}^{z} f'(k)."""
    from .eval_engine import eval_em
    f = as_analytic(f)
    z = complex(z)
    pts = z + radius * np.exp(2j * math.pi * np.arange(nodes) / nodes)
    vals = np.array([frac_sum(f, 1, w, **kw) for w in pts])
    lhs = complex(np.fft.fft(vals)[1] / nodes / radius)
    c_f = eval_em(f).value
    rhs = c_f + frac_sum(f.derivative_fn(1), 1, z, **kw)
    return DerivativeGap(lhs, rhs, c_f, abs(lhs - rhs))


@dataclass
class TermwiseResult:
    termwise: complex
    direct: Optional[complex]
    gap: Optional[float]
    licensed: bool
    notes: list = field(default_factory=list)


def coefficient_licence(a: Sequence[complex]) -> tuple:
    """Numeric test of sum_n (2 pi)^-n |a_n| < inf from the available terms:
    geometric decay, or algebraic decay with exponent above 1."""
    n = np.arange(len(a))
    t = np.abs(np.asarray(a, dtype=complex)) * (2 * np.pi) ** (-n.astype(float))
    nz = np.nonzero(t > 1e-300)[0]
    if len(nz) < 4:
        return True, "finitely many terms"
    idx = nz[len(nz) // 2:]
    if len(idx) < 3:
        return True, "finitely many terms"
    # two envelope models for log t: -sigma log n (algebraic) and r n (geometric)
    lt, x = np.log(t[idx]), idx.astype(float)
    alg, res_a = np.polyfit(np.log(x), lt, 1, full=True)[:2]
    geo, res_g = np.polyfit(x, lt, 1, full=True)[:2]
    res_a = float(res_a[0]) if len(res_a) else 0.0
    res_g = float(res_g[0]) if len(res_g) else 0.0
    sigma, ratio = -alg[0], geo[0]
    if res_g < res_a and ratio < -0.01:
        return True, f"geometric decay (log-ratio {ratio:.3g})"
    return bool(sigma > 1.0), f"algebraic decay exponent {sigma:.3g}"


def termwise_sum(neg: dict, pos: Sequence[complex], x, y, f_direct=None,
                 **kw) -> TermwiseResult:
    """sum over monomials of fractional sums against the fractional sum of the
    assembled function.

    ``neg`` maps m >= 1 to b_m (terms b_m k^-m); ``pos`` lists a_n for the
    terms a_n k^n / n!.
    """
    licensed, why = coefficient_licence(pos)
    notes = [why]
    total = 0j
    for m, b in sorted(neg.items()):
        if b == 0:
            continue
        mono = AnalyticFn(lambda z, m=m: np.asarray(z, dtype=complex) ** (-m),
                          _pole(m), name=f"k^-{m}")
        total += b * frac_sum(mono, x, y, **kw)
    coeffs = [a / math.factorial(k) for k, a in enumerate(pos)]
    total += frac_sum_poly(coeffs, x, y)
    direct = gap = None
    if f_direct is not None:
        direct = frac_sum(f_direct, x, y, **kw)
        gap = abs(total - direct)
    if not licensed:
        notes.append("interchange not licensed by the coefficient test")
    return TermwiseResult(total, direct, gap, licensed, notes)


def _pole(m):
    from .analytic_fn import Singularity
    return (Singularity(0j, float(m)),)
