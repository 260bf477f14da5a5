"""Quadrature along horizontal lines R - i t, Gauss-Weierstrass damping with
extrapolation in the damping parameter, and the generalised Fourier transform
of generating functions.

Lines are parametrised by their real part x, so a line integral of g along
R - i t is the ordinary integral of x -> g(x - i t).
"""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .analytic_fn import AnalyticFn
from .errors import DecomposeFirst, DivergentTail, DomainError, NonConvergent

SQRT_2PI = math.sqrt(2 * math.pi)
EPS = np.finfo(float).eps
_GL20 = leggauss(20)


@dataclass(frozen=True)
class QuadratureSpec:
    """``rule`` is "tanh-sinh" (double exponential, sinh-sinh map onto R) or
    "gl-panels" (Gauss-Legendre panels on [-X, X], X doubled until the
    integrand has decayed)."""

    rule: str = "tanh-sinh"
    X: float = 20.0
    panels: int = 80
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12

    def __post_init__(self):
        if self.rule not in ("tanh-sinh", "gl-panels"):
            raise DomainError(f"unknown quadrature rule {self.rule!r}")
        if not (self.X > 0 and self.abs_tol > 0 and self.rel_tol > 0 and self.panels > 0):
            raise DomainError("X, panels and tolerances must be positive")


@dataclass(frozen=True)
class GWSchedule:
    """Damping parameters eps_0 2^-j and the degree of the extrapolating
    polynomial in eps."""

    eps: tuple = tuple(1e-2 * 2.0 ** -j for j in range(6))
    order: int = 5

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=float)
        if e.size < 2 or np.any(e <= 0) or np.any(np.diff(e) >= 0):
            raise DomainError("eps schedule must be positive and strictly decreasing")
        if not 1 <= self.order < e.size:
            raise DomainError("extrapolation order must lie in [1, len(eps) - 1]")


@dataclass
class LineResult:
    value: complex
    err_est: float
    info: dict = field(default_factory=dict)


def _line_values(g, x, t):
    with np.errstate(all="ignore"):
        return np.asarray(g(np.asarray(x) - 1j * t), dtype=complex)


# -- double exponential rule ------------------------------------------------


def _sinh_sinh(g, t, h, U):
    k = np.arange(-int(round(U / h)), int(round(U / h)) + 1)
    u = k * h
    s = 0.5 * math.pi * np.sinh(u)
    x = np.sinh(s)
    w = 0.5 * math.pi * np.cosh(u) * np.cosh(s) * h
    vals = _line_values(g, x, t) * w
    return _drop_far_overflow(vals, x)


def _drop_far_overflow(vals, x):
    """Zero non-finite values at far nodes when the weighted integrand has
    already decayed below 1e-30 of its peak at the outermost finite nodes (complex overflow in
    e.g. cosh at |x| ~ 1e6)."""
    bad = ~np.isfinite(vals)
    if not np.any(bad):
        return vals
    ax = np.abs(x)
    r = float(np.min(ax[bad]))
    inner = ax < r
    if not np.any(inner):
        return vals
    peak = float(np.max(np.abs(vals[inner])))
    idx = np.nonzero(inner)[0]
    rim = np.abs(vals[[idx[0], idx[-1]]])  # outermost finite node on each side
    if float(np.max(rim)) <= 1e-30 * peak:
        vals = vals.copy()
        vals[bad] = 0
    return vals


def _tanh_sinh(g, t, spec: QuadratureSpec) -> LineResult:
    U = 3.0
    while True:
        vals = _sinh_sinh(g, t, 0.5, U)
        finite = np.isfinite(vals)
        edge = np.abs(vals[[0, 1, -2, -1]]) if np.all(finite) else np.array([np.inf])
        tail = float(np.sum(edge))
        if np.all(finite) and tail < spec.abs_tol / 10:
            break
        if U >= 6.5:
            raise DivergentTail(f"integrand along R-{t}i does not decay (tail {tail:.3g})")
        U += 0.5
    h = 0.5
    prev = complex(np.sum(vals))
    trail = [prev]
    while True:
        h /= 2
        vals = _sinh_sinh(g, t, h, U)
        if not np.all(np.isfinite(vals)):
            raise DivergentTail("non-finite integrand on the quadrature nodes")
        cur = complex(np.sum(vals))
        trail.append(cur)
        diff = abs(cur - prev)
        if diff <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            X = math.sinh(0.5 * math.pi * math.sinh(U))
            return LineResult(cur, diff + tail, {"rule": "tanh-sinh", "h": h, "U": U,
                                                 "X": X, "trail": trail})
        if h < 2.0 ** -9:
            raise NonConvergent(f"double exponential rule did not settle (last change {diff:.3g})")
        prev = cur


# -- Gauss-Legendre panels ---------------------------------------------------


def gl_nodes(X: float, panels: int, n: int = 20):
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on [-X, X]."""
    xg, wg = _GL20 if n == 20 else leggauss(n)
    edges = np.linspace(-X, X, panels + 1)
    half = (edges[1] - edges[0]) / 2
    x = (edges[:-1, None] + half * (xg[None, :] + 1)).ravel()
    w = np.tile(wg * half, panels)
    return x, w


def _gl_panels(g, t, spec: QuadratureSpec) -> LineResult:
    X, panels = spec.X, spec.panels
    width = 2 * X / panels
    while True:
        ends = _line_values(g, np.array([-X, X]), t)
        if np.all(np.isfinite(ends)):
            x, w = gl_nodes(X, panels)
            vals = _line_values(g, x, t)
            if np.all(np.isfinite(vals)):
                scale = float(np.max(np.abs(vals))) or 1.0
                tail = float(np.sum(np.abs(ends))) * max(1.0, width)
                if tail < max(spec.abs_tol, spec.rel_tol * scale) / 10:
                    break
        if X > 1e5:
            raise DivergentTail(f"integrand along R-{t}i does not decay by X={X:g}")
        X *= 2
        panels *= 2
    coarse = complex(np.sum(vals * w))
    x2, w2 = gl_nodes(X, panels, 32)
    fine = complex(np.sum(_line_values(g, x2, t) * w2))
    diff = abs(fine - coarse)
    if diff > max(spec.abs_tol, spec.rel_tol * abs(fine)) * 1e3:
        raise NonConvergent(f"panel rule unresolved at width {width:g} (change {diff:.3g})")
    return LineResult(fine, diff + tail, {"rule": "gl-panels", "X": X, "panels": panels})


def line_integral(g, t: float = 0.0, spec: QuadratureSpec = QuadratureSpec()) -> LineResult:
    """Integral of g along R - i t with an error estimate."""
    func = g.func if isinstance(g, AnalyticFn) else g
    if spec.rule == "tanh-sinh":
        return _tanh_sinh(func, t, spec)
    return _gl_panels(func, t, spec)


# -- Gauss-Weierstrass -------------------------------------------------------


def neville(xs: Sequence[float], ys: Sequence[complex], x0: float = 0.0) -> list:
    """Values at x0 of the interpolating polynomials through the first
    1, 2, ..., len(xs) points."""
    P = [complex(y) for y in ys]
    xs = list(xs)
    out = [P[0]]
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            P[i] = ((x0 - xs[i + m]) * P[i] + (xs[i] - x0) * P[i + 1]) / (xs[i] - xs[i + m])
        out.append(P[0])
    return out


def extrapolate(eps: Sequence[float], vals: Sequence[complex], order: int):
    est = neville(eps[: order + 1], vals[: order + 1])
    return est[order], abs(est[order] - est[order - 1])


def _power_fit(eps, vals, exps) -> complex:
    """Constant term of the least-squares fit vals ~ c + sum_p a_p eps^p."""
    A = np.array([[1.0] + [e ** p for p in exps] for e in eps])
    return complex(np.linalg.lstsq(A, np.asarray(vals, dtype=complex), rcond=None)[0][0])


# algebraically decaying g leave eps^{m-1/2} terms in the damped integral
_HALF_BASES = ((1.0, 1.5, 2.0, 2.5, 3.0), (0.5, 1.0, 1.5, 2.0, 2.5))


def gw_integral(g, t: float = 0.0, sched: GWSchedule = GWSchedule(),
                spec: QuadratureSpec = QuadratureSpec(rule="gl-panels", X=16.0, panels=32,
                                                      abs_tol=1e-13, rel_tol=1e-13),
                tol: float = 1e-8) -> LineResult:
    """lim_{eps->0} of the integrals of exp(-eps z^2) g(z) along R - i t.

    Polynomial extrapolation in eps first; if its residual is too large the
    schedule is extended by two halvings and fitted with half-integer powers.
    """
    func = g.func if isinstance(g, AnalyticFn) else g

    def damped_value(e):
        return line_integral(lambda z: np.exp(-e * z * z) * func(z), t, spec).value

    eps = list(sched.eps)
    per_eps = [damped_value(e) for e in eps]
    value, err = extrapolate(eps, per_eps, sched.order)
    info = {"eps": list(eps), "values": per_eps, "basis": "integer"}
    if not err <= tol * max(1.0, abs(value)):
        eps += [eps[-1] / 2, eps[-1] / 4]
        per_eps += [damped_value(e) for e in eps[-2:]]
        for exps in _HALF_BASES:
            v = _power_fit(eps, per_eps, exps)
            r = abs(v - _power_fit(eps[:-1], per_eps[:-1], exps))
            if r < err:
                value, err, info["basis"] = v, r, exps
        info.update({"eps": eps, "values": per_eps})
    if not err <= tol * max(1.0, abs(value)):
        raise NonConvergent(f"Gauss-Weierstrass extrapolation residual {err:.3g} above tolerance")
    return LineResult(value, err, info)


# -- Fourier transforms ------------------------------------------------------


def ft_line(f, t: float, zeta: complex, spec: QuadratureSpec = QuadratureSpec()) -> LineResult:
    """(1/sqrt(2 pi)) * integral of f(z) exp(-i zeta z) along R - i t.

    Written as exp(-zeta t) / sqrt(2 pi) times the integral over x of
    exp(-s x) f(x - i t) exp(-i xi x) with zeta = xi - i s.  When the
    integrand decays too slowly for the direct rule the Gauss-Weierstrass
    limit is used instead.
    """
    zeta = complex(zeta)
    xi, s = zeta.real, -zeta.imag
    func = f.func if isinstance(f, AnalyticFn) else f

    def integrand(z):
        x = np.real(z)
        return np.exp(-s * x - 1j * xi * x) * func(x - 1j * t)

    pref = np.exp(-zeta * t) / SQRT_2PI
    try:
        r = line_integral(integrand, 0.0, spec)
        r.info["method"] = "direct"
    except (DivergentTail, NonConvergent):
        r = gw_integral(integrand, 0.0)
        r.info["method"] = "gauss-weierstrass"
    return LineResult(complex(pref * r.value), float(abs(pref) * r.err_est), r.info)


def _cheb_nodes(n):
    j = np.arange(n)
    nodes = -np.cos(np.pi * j / (n - 1))
    bw = (-1.0) ** j
    bw[0] *= 0.5
    bw[-1] *= 0.5
    return nodes, bw


class SampledTransform:
    """Piecewise Chebyshev interpolant of xi -> A^(xi - i s) on panels of
    fixed width, sampled once and then read-shared.

    Calls outside ``[-L, L]`` raise :class:`DomainError`.
    """

    PANEL = 0.5
    NODES = 24
    FLOOR = 1e-22
    XI_MAX = 200.0

    FRACS = (0.25, 0.5, 0.75)
    INF_HEIGHTS = (0.5, 1.0, 2.0, 4.0, 6.0)

    def __init__(self, A, s: float):
        self.A = A
        self.s = float(s)
        self.heights = (self._candidates(+1), self._candidates(-1))
        self._lock = threading.Lock()
        self._grids = {h: self._x_grid(h) for h in set(self.heights[0] + self.heights[1])}
        self._mass = {h: float(np.sum(np.abs(v))) for h, (_, v) in self._grids.items()}
        self._cnodes, self._bw = _cheb_nodes(self.NODES)
        self._build()

    def _candidates(self, side):
        """Line heights used for xi of the given sign.  Heights toward the
        strip edge on that side make exp(-xi t) small; each sample takes the
        candidate with the lowest rounding level."""
        lo, hi = self.A.strip.lower, self.A.strip.upper
        edge, other = (hi, lo) if side > 0 else (lo, hi)
        if side * edge <= 0:
            # the strip does not reach across 0 on this side: hug the near edge
            span = min(hi - lo, 1.0)
            return (edge - side * 0.05 * span,)
        if math.isinf(edge):
            return tuple(side * h for h in self.INF_HEIGHTS if self.A.strip.contains_height(side * h))
        return tuple(f * edge for f in self.FRACS if self.A.strip.contains_height(f * edge))

    def _x_grid(self, tp):
        g = self.A.gen.func
        X = 16.0
        while True:
            x = np.linspace(-X, X, 801)
            with np.errstate(all="ignore"):
                v = np.abs(np.exp(-self.s * x) * np.asarray(g(x - 1j * tp), dtype=complex))
            if not np.all(np.isfinite(v)):
                raise DivergentTail(f"{self.A.label}: e^(-sx) gen overflows at s={self.s}")
            if max(v[0], v[-1]) < 1e-18 * np.max(v):
                break
            if X >= 4096:
                raise DivergentTail(f"{self.A.label}: e^(-sx) gen does not decay at s={self.s}")
            X *= 2
        # trim: first and last points where the envelope is above the floor
        keep = np.nonzero(v >= 1e-18 * np.max(v))[0]
        X = max(abs(x[keep[0]]), abs(x[keep[-1]])) + 1.0
        panels = int(math.ceil(2 * X / 0.25))
        xs, ws = gl_nodes(X, panels)
        vals = np.exp(-self.s * xs) * np.asarray(g(xs - 1j * tp), dtype=complex) * ws
        return xs, vals

    def _best_height(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.empty(xi.shape)
        for side, cands in ((xi >= 0, self.heights[0]), (xi < 0, self.heights[1])):
            if not np.any(side):
                continue
            levels = np.array([np.log(self._mass[h]) - xi[side] * h for h in cands])
            out[side] = np.asarray(cands)[np.argmin(levels, axis=0)]
        return out

    def direct(self, xi) -> np.ndarray:
        """A^ at xi - i s straight from the quadrature, no interpolation."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.empty(xi.shape, dtype=complex)
        hs = self._best_height(xi)
        for tp in np.unique(hs):
            sel = hs == tp
            xs, vals = self._grids[tp]
            q = np.exp(-1j * np.outer(xi[sel], xs)) @ vals
            zeta = xi[sel] - 1j * self.s
            out[sel] = np.exp(-zeta * tp) * q / SQRT_2PI
        return out

    def noise(self, xi: float) -> float:
        """Rounding level of a direct sample at xi."""
        tp = float(self._best_height(np.array([xi]))[0])
        return 10 * EPS * math.exp(-xi * tp) * self._mass[tp] / SQRT_2PI

    def _panel_samples(self, k):
        a = k * self.PANEL
        xi = a + (self._cnodes + 1) * self.PANEL / 2
        return self.direct(xi)

    def _build(self):
        panels = {}
        peak = 0.0
        for direction in (+1, -1):
            k = 0 if direction > 0 else -1
            while True:
                v = self._panel_samples(k)
                panels[k] = v
                m = float(np.max(np.abs(v)))
                peak = max(peak, m)
                if m < max(self.FLOOR * peak, 10 * self.noise(k * self.PANEL + 0.5 * self.PANEL)):
                    break
                k += direction
                if abs(k) * self.PANEL > self.XI_MAX:
                    raise DivergentTail(f"{self.A.label}: transform does not decay by |xi|={self.XI_MAX}")
        self.peak = peak
        self._set_panels(panels)

    def _set_panels(self, panels):
        self.k_min, self.k_max = min(panels), max(panels)
        self.samples = np.array([panels[k] for k in range(self.k_min, self.k_max + 1)])
        self.L_minus = self.k_min * self.PANEL
        self.L_plus = (self.k_max + 1) * self.PANEL
        # interpolation check at off-node points
        ks = np.arange(self.k_min, self.k_max + 1, 3)
        mids = (ks + 0.37) * self.PANEL
        self.accuracy = float(np.max(np.abs(self(mids) - self.direct(mids)))) + 1e-16 * self.peak

    def extend(self, factor: float = 1.5) -> bool:
        """Widen the sampled range on both sides; False once the samples have
        underflowed or XI_MAX is reached."""
        with self._lock:
            edge = np.abs(np.concatenate([self.samples[0], self.samples[-1]]))
            if np.max(edge) < 1e-300:
                return False
            lo = max(int(math.floor(self.k_min * factor)), -int(self.XI_MAX / self.PANEL))
            hi = min(int(math.ceil((self.k_max + 1) * factor)) - 1, int(self.XI_MAX / self.PANEL))
            if lo == self.k_min and hi == self.k_max:
                return False
            panels = {k: self.samples[k - self.k_min] for k in range(self.k_min, self.k_max + 1)}
            for k in list(range(lo, self.k_min)) + list(range(self.k_max + 1, hi + 1)):
                panels[k] = self._panel_samples(k)
            self._set_panels(panels)
            return True

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        flat = np.atleast_1d(xi).ravel()
        if np.any(flat < self.L_minus) or np.any(flat > self.L_plus):
            raise DomainError(f"xi outside the sampled range [{self.L_minus}, {self.L_plus}]")
        k = np.clip(np.floor(flat / self.PANEL).astype(int), self.k_min, self.k_max)
        u = 2 * (flat - k * self.PANEL) / self.PANEL - 1
        diff = u[:, None] - self._cnodes[None, :]
        exact = diff == 0
        diff[exact] = 1.0
        c = self._bw[None, :] / diff
        S = self.samples[k - self.k_min]
        out = np.sum(c * S, axis=1) / np.sum(c, axis=1)
        hit = np.any(exact, axis=1)
        if np.any(hit):
            out[hit] = S[hit][exact[hit]]
        return out.reshape(xi.shape) if xi.ndim else complex(out[0])


_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_CACHE_LOCK = threading.Lock()


def sampled_transform(A, t: float) -> SampledTransform:
    if A.index.singular:
        raise DecomposeFirst(f"{A.label} is singular (index {A.index}); decompose first")
    lo, hi = A.index.alpha, A.index.beta
    if not lo < t < hi:
        raise DomainError(f"height {t} outside the regular interval ({lo}, {hi})")
    with _CACHE_LOCK:
        per = _CACHE.setdefault(A, {})
        if t not in per:
            per[t] = SampledTransform(A, t)
        return per[t]


def ft_umbra(A, t_target: float, grid: Optional[dict] = None) -> AnalyticFn:
    """A^ on the line R - i t_target as an evaluatable function of z = xi - i t."""
    st = sampled_transform(A, t_target) if not grid else SampledTransform(A, t_target, **grid)

    def func(z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z.imag + st.s) > 1e-12):
            raise DomainError("sampled transform is only available on its own line")
        return np.asarray(st(z.real), dtype=complex)

    fn = AnalyticFn(func, name=f"FT[{A.label}]@{t_target:g}")
    object.__setattr__(fn, "sampled", st)
    return fn
