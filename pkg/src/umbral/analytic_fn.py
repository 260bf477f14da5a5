"""Analytic function wrapper: evaluation, Cauchy-circle derivatives, path
antiderivatives and the weighted-L1 hierarchy test along vertical lines.

Every function handled by the engine is an :class:`AnalyticFn`.  The wrapped
callable must accept numpy arrays of complex numbers and return an array of the
same shape; scalars are handled by :meth:`AnalyticFn.__call__`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, NonConvergent, SingularityError

EPS = np.finfo(float).eps

_GL_NODES, _GL_WEIGHTS = leggauss(20)


@dataclass(frozen=True)
class Singularity:
    point: complex
    order: float = 1.0
    kind: str = "pole"  # "pole" or "branch"


@dataclass(frozen=True)
class Growth:
    """Advisory exponential-type bound |f(z)| <= C exp(rate |z|)."""

    rate: float
    note: str = ""


@dataclass(frozen=True)
class HierarchyParams:
    """Weights of the space T^{(p-1)}_{a,k;b,l}.

    ``a`` and ``k`` control the half line xi < 0, ``b`` and ``l`` the half line
    xi > 0; ``p`` is the number of Taylor terms subtracted.
    """

    a: float
    k: float
    b: float
    l: float
    p: int = 0

    def __post_init__(self):
        if self.k < 0 or self.l < 0 or self.p < 0:
            raise DomainError("k, l and p must be nonnegative")


@dataclass
class HierarchyReport:
    verdict: str
    t_grid: list
    norms_plus: list
    norms_minus: list
    notes: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"


@dataclass(frozen=True, eq=False)
class AnalyticFn:
    """An evaluatable analytic function.

    Parameters
    ----------
    func
        Vectorised callable ``complex ndarray -> complex ndarray``.
    singularities
        Known poles and branch points; the Cauchy radius policy keeps clear
        of them.
    domain
        Optional object with a ``contains(z) -> bool`` method (e.g. a strip).
        Cauchy circles are kept inside it.
    growth
        Advisory growth metadata. Route admission never trusts it.
    """

    func: Callable[[np.ndarray], np.ndarray]
    singularities: tuple = ()
    domain: object = None
    growth: Optional[Growth] = None
    name: str = "f"
    parent: Optional[tuple] = None  # (AnalyticFn, order) for derived functions

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        out = np.asarray(self.func(arr), dtype=complex)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        if arr.ndim == 0:
            return complex(out)
        return out

    # -- geometry ---------------------------------------------------------

    def distance_to_singularity(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        d = np.full(z.shape, np.inf)
        for s in self.singularities:
            d = np.minimum(d, np.abs(z - s.point))
        if self.domain is not None and hasattr(self.domain, "distance_to_boundary"):
            d = np.minimum(d, self.domain.distance_to_boundary(z))
        return d

    def default_radius(self, z) -> np.ndarray:
        """Cauchy radius policy: min(1, half the distance to trouble)."""
        d = self.distance_to_singularity(z)
        if np.any(d == 0):
            raise SingularityError(f"{self.name}: derivative requested at a singularity")
        return np.minimum(1.0, 0.5 * d)

    # -- Taylor coefficients ----------------------------------------------

    def taylor(self, z0, K: int, radius=None, m_start: int = 64, m_max: int = 4096,
               tol: float = 1e-12) -> np.ndarray:
        """Taylor coefficients c_0..c_K of f about each point of ``z0``.

        Returns an array of shape ``z0.shape + (K+1,)``.  The trapezoid rule on
        a circle is doubled until two successive estimates of the scaled
        coefficients c_j rho^j agree to ``tol`` relative to the largest one.
        """
        if self.parent is not None:
            base, order = self.parent
            c = base.taylor(z0, K + order, radius=radius, m_start=m_start,
                            m_max=m_max, tol=tol)
            j = np.arange(K + 1)
            # c'_j = c_{j+order} (j+order)!/j!
            fac = np.array([math.perm(i + order, order) for i in j], dtype=float)
            return c[..., order:] * fac
        z0 = np.asarray(z0, dtype=complex)
        rho = self.default_radius(z0) if radius is None else np.broadcast_to(
            np.asarray(radius, dtype=float), z0.shape)
        if np.any(rho <= 0):
            raise SingularityError("Cauchy radius must be positive")
        M = max(m_start, 2 * (K + 1))
        prev = None
        while True:
            scaled = self._scaled_coeffs(z0, rho, K, M)
            if prev is not None:
                scale = np.max(np.abs(scaled), axis=-1, keepdims=True)
                scale = np.where(scale == 0, 1.0, scale)
                if np.all(np.abs(scaled - prev) <= tol * scale):
                    break
            if 2 * M > m_max:
                if prev is None:
                    break
                raise NonConvergent(f"{self.name}: Cauchy trapezoid did not settle at M={M}")
            prev = scaled
            M *= 2
        powers = rho[..., None] ** np.arange(K + 1)
        return scaled / powers

    def _scaled_coeffs(self, z0, rho, K, M):
        w = np.exp(2j * np.pi * np.arange(M) / M)
        pts = z0[..., None] + rho[..., None] * w
        if self.domain is not None and hasattr(self.domain, "contains"):
            if not np.all(self.domain.contains(pts)):
                raise SingularityError(f"{self.name}: Cauchy circle leaves the domain")
        vals = np.asarray(self.func(pts), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise SingularityError(f"{self.name}: non-finite values on Cauchy circle")
        return np.fft.fft(vals, axis=-1)[..., : K + 1] / M

    def taylor_auto(self, z0: complex, K: int, r_max: float | None = None) -> np.ndarray:
        """Coefficients c_0..c_K at one point with the radius picked to
        minimise the estimated rounding error eps*max|f|/rho^K of c_K.

        Large radii tame the k!/rho^k amplification of rounding; the radius is
        capped at 3/4 of the distance to the nearest singularity so that the
        aliasing error stays geometric.
        """
        d = float(self.distance_to_singularity(np.asarray(z0)))
        cap = 0.75 * d if np.isfinite(d) else (r_max or 64.0)
        if r_max is not None:
            cap = min(cap, r_max)
        best, best_err = None, np.inf
        for j in range(10):
            rho = cap * 2.0 ** (-j)
            try:
                c = self.taylor(np.asarray(z0), K, radius=rho, m_start=max(64, 4 * K),
                                m_max=8192)
            except (NonConvergent, SingularityError):
                continue
            w = np.exp(2j * np.pi * np.arange(64) / 64)
            fmax = float(np.max(np.abs(self.func(z0 + rho * w))))
            err = EPS * fmax / rho**K
            if err < best_err:
                best, best_err = c, err
        if best is None:
            raise SingularityError(f"{self.name}: no usable Cauchy radius at {z0}")
        return best

    def taylor_weighted(self, z0: complex, K: int, weights, cap: float = 8.0):
        """Coefficients c_0..c_K at one point for a known linear use
        sum_k w_k c_k.  The radius minimises eps * max|f| * sum_k |w_k| / rho^k
        over cap * 2^-j, cap clipped to half the distance to trouble.

        Returns (coefficients, rounding level of the weighted sum, radius).
        """
        z0 = complex(z0)
        d = float(self.distance_to_singularity(np.asarray(z0)))
        top = min(0.5 * d, cap)
        w = np.abs(np.asarray(weights, dtype=float))
        k = np.arange(K + 1)
        ring = np.exp(2j * np.pi * np.arange(64) / 64)
        best = None
        for j in range(8):
            rho = top * 2.0 ** -j
            try:
                c = self.taylor(np.asarray(z0), K, radius=rho, m_start=max(64, 4 * K),
                                m_max=8192)
            except (NonConvergent, SingularityError):
                continue
            with np.errstate(all="ignore"):
                fmax = float(np.max(np.abs(self.func(z0 + rho * ring))))
                level = 10 * EPS * fmax * float(np.sum(w / rho ** k))
            if np.isfinite(level) and (best is None or level < best[1]):
                best = (c, level, rho)
        if best is None:
            raise SingularityError(f"{self.name}: no usable Cauchy radius at {z0}")
        return best

    def derivative(self, z, k: int = 1, radius=None):
        """k-th derivative by the Cauchy circle integral; k=0 returns f(z)."""
        if k < 0:
            raise DomainError("derivative order must be nonnegative")
        if k == 0:
            return self(z)
        scalar = np.ndim(z) == 0
        za = np.atleast_1d(np.asarray(z, dtype=complex))
        rho = self.default_radius(za) if radius is None else np.broadcast_to(
            np.asarray(radius, dtype=float), za.shape)
        if np.any(math.lgamma(k + 1) - k * np.log(rho) > 690):
            raise DomainError(f"order {k} too large for Cauchy radius {rho.min():.3g}")
        c = self.taylor(za, k, radius=rho)
        out = c[..., k] * math.factorial(k)
        return complex(out[0]) if scalar else out

    def derivative_fn(self, k: int = 1) -> "AnalyticFn":
        if k == 0:
            return self
        if self.parent is not None:
            base, order = self.parent
            return base.derivative_fn(order + k)
        return AnalyticFn(lambda z: self.derivative(z, k), self.singularities, self.domain,
                          None, f"{self.name}^({k})", parent=(self, k))

    def shifted(self, s: complex) -> "AnalyticFn":
        """z -> f(z + s)."""
        sings = tuple(Singularity(p.point - s, p.order, p.kind) for p in self.singularities)
        return AnalyticFn(lambda z: self.func(np.asarray(z) + s), sings, None, self.growth,
                          f"{self.name}(z+{s})")


def as_analytic(f, name: str = "f", singularities: Sequence[Singularity] = ()) -> AnalyticFn:
    if isinstance(f, AnalyticFn):
        return f
    return AnalyticFn(f, tuple(singularities), name=name)


def derivative(f: AnalyticFn, z, k: int = 1, radius=None):
    return f.derivative(z, k, radius)


def derivative_envelope(f: AnalyticFn, starts: Sequence[float], k: int,
                        window: float = 2 * math.pi, points: int = 8) -> list:
    """max |f^(k)| over ``points`` nodes of [m, m + window) for each start m.

    Taking the max over a window keeps oscillating f (sin z / z^3, say) from
    passing or failing a decay test by where its zeros happen to fall.
    """
    unit = [0.0] * k + [1.0]
    out = []
    for m in starts:
        nodes = m + np.linspace(0.0, window, points, endpoint=False)
        c = [abs(f.taylor_weighted(complex(z), k, unit)[0][k]) for z in nodes]
        out.append(max(c) * math.factorial(k))
    return out


def degree_at_most(f: AnalyticFn, d: int) -> bool:
    """Numerically f^(d+1) = f^(d+2) = f^(d+3) = 0 at two points."""
    for z0 in (1.0, 3.0):
        try:
            c = f.taylor(np.asarray(complex(z0)), d + 3, radius=0.5)
        except (SingularityError, NonConvergent, DomainError):
            return False
        size = float(np.max(np.abs(c[: d + 1] * 0.5 ** np.arange(d + 1))))
        if np.max(np.abs(c[d + 1:] * 0.5 ** np.arange(d + 1, d + 4))) > 1e-13 * size:
            return False
    return True


def antiderivative(f: AnalyticFn, z0: complex, z1: complex, tol: float = 1e-12,
                   max_panels: int = 4096) -> complex:
    """Integral of f along the straight segment z0 -> z1 (Gauss-Legendre panels)."""
    z0, z1 = complex(z0), complex(z1)
    if z0 == z1:
        return 0j
    d = z1 - z0
    for s in f.singularities:
        u = ((s.point - z0) * d.conjugate()).real / abs(d) ** 2
        u = min(max(u, 0.0), 1.0)
        if abs(z0 + u * d - s.point) < 1e-13 * (1 + abs(d)):
            raise SingularityError(f"{f.name}: singularity {s.point} on integration path")
    n = 1
    prev = _panel_integral(f, z0, d, n)
    while True:
        n *= 2
        cur = _panel_integral(f, z0, d, n)
        if abs(cur - prev) <= tol * (1 + abs(cur)):
            return cur
        if n >= max_panels:
            raise NonConvergent(f"{f.name}: segment integral did not converge")
        prev = cur


def _panel_integral(f, z0, d, n):
    edges = np.arange(n) / n
    u = edges[:, None] + (_GL_NODES[None, :] + 1) / (2 * n)
    vals = np.asarray(f.func(z0 + u * d), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise SingularityError(f"{f.name}: non-finite value on integration path")
    return complex(np.sum(vals * _GL_WEIGHTS[None, :]) * d / (2 * n))


def _gl_half_line(length: float, panels: int):
    edges = np.linspace(0.0, length, panels + 1)
    h = np.diff(edges)
    x = edges[:-1, None] + (_GL_NODES[None, :] + 1) * h[:, None] / 2
    w = _GL_WEIGHTS[None, :] * h[:, None] / 2
    return x.ravel(), w.ravel()


def hierarchy_check(f: AnalyticFn, hp: HierarchyParams,
                    t_grid: Sequence[float] = (5.0, 10.0, 20.0)) -> HierarchyReport:
    """Numerical membership test for T^{(p-1)}_{a,k;b,l}.

    For each t the weighted L1 norms of f(t+i xi) minus its p-term Taylor
    polynomial in (i xi) are computed on both half lines.  Membership is
    reported consistent when every norm is finite and the norms do not grow
    along ``t_grid``.
    """
    notes = []
    plus, minus = [], []
    verdict = "consistent"
    for t in t_grid:
        coeffs = f.taylor(np.asarray(complex(t)), hp.p - 1) if hp.p > 0 else np.zeros(0)
        for side, (rate, power, store) in {
            +1: (hp.b, hp.l, plus),
            -1: (-hp.a, hp.k, minus),
        }.items():
            # weight on this side: exp(-rate*|xi|) (1+|xi|)^power
            length = 40.0 / rate if rate > 0 else 60.0
            length = min(max(length, 8.0), 200.0)
            xi, w = _gl_half_line(length, 200)
            z = t + 1j * side * xi
            with np.errstate(all="ignore"):
                vals = np.asarray(f.func(z), dtype=complex)
                weight = np.exp(-rate * xi) * (1 + xi) ** power
                mag = float(np.sum(np.abs(vals) * weight * w))
                if hp.p > 0:
                    taylor = np.polyval(coeffs[::-1], 1j * side * xi)
                    vals = vals - taylor
                weighted = np.abs(vals) * weight
            if not np.all(np.isfinite(weighted)):
                store.append(math.inf)
                notes.append(f"t={t}, side {side:+d}: overflow in integrand")
                verdict = "inconsistent"
                continue
            norm = float(np.sum(weighted * w))
            if norm <= 1e-10 * mag:
                # f is its own Taylor polynomial up to rounding
                store.append(0.0)
                continue
            tail = float(np.max(weighted[-20:]))
            mid = float(np.max(weighted[len(weighted) // 2: len(weighted) // 2 + 20]))
            if tail > 1e-10 * (1 + norm) and tail >= mid:
                notes.append(f"t={t}, side {side:+d}: weighted integrand does not decay")
                verdict = "inconsistent"
                norm = math.inf
            store.append(norm)
    for name, norms in (("xi>0", plus), ("xi<0", minus)):
        for a_, b_ in zip(norms, norms[1:]):
            if not b_ <= a_ * (1 + 1e-9) + 1e-14:
                notes.append(f"{name}: norms grow along t_grid")
                verdict = "inconsistent"
                break
    return HierarchyReport(verdict, list(t_grid), plus, minus, notes)
