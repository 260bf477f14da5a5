"""Evaluation of f(A) by independent routes.

Routes
------
series
    sum_n f^(n)(0) A^n / n!, admitted when the exponential type of f is below
    the distance from 0 to the edge of A's strip.
contour
    (1/sqrt(2 pi)) * integral of A^(z) f(iz) along R - i t, t in the regular
    interval.  The constant is fixed by e^{cz}(A) = gen_A(c).
gw
    The same integrand damped by exp(-eps z^2), extrapolated to eps = 0.
euler_maclaurin
    Bernoulli umbra only: the limit of
    L(n, p) = sum_{k<=p} B_k(1) f^(k)(n)/k! - sum_{j<=n} f'(j).

Singular umbrae go through catalog identities or the mollifier split
A = A+ [-] A-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import erfc

from .analytic_fn import (AnalyticFn, HierarchyParams, as_analytic, degree_at_most,
                          derivative_envelope, hierarchy_check)
from .contour import (SQRT_2PI, GWSchedule, QuadratureSpec, extrapolate, ft_line, neville,
                      sampled_transform)
from .errors import (DecomposeFirst, DivergentTail, DomainError,
                     NonConvergent, RouteInadmissible, SingularityError, UmbralError)
from .special_fn import bernoulli_moments
from .umbra_core import ExpIndex, Strip, Umbra, add, make_special, moment

ROUTES = ("series", "contour", "gw", "euler_maclaurin")
EPS = np.finfo(float).eps


@dataclass
class EvalRequest:
    f: AnalyticFn
    A: Umbra
    route: str = "auto"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.route not in ROUTES + ("auto",):
            raise DomainError(f"unknown route {self.route!r}")
        if self.params.get("tol", 1e-10) <= 0:
            raise DomainError("tol must be positive")


@dataclass
class EvalResult:
    value: complex
    err_est: float
    route_used: str
    diagnostics: dict = field(default_factory=dict)


def evaluate(req: EvalRequest) -> EvalResult:
    f = as_analytic(req.f)
    p = dict(req.params)
    if req.route == "auto":
        return eval_auto(f, req.A, **p)
    if req.route == "series":
        return eval_series(f, req.A, N=p.get("N", 40))
    if req.route == "contour":
        return eval_contour(f, req.A, t=p.get("t"))
    if req.route == "gw":
        return eval_gw(f, req.A, t=p.get("t"))
    if not is_bernoulli(req.A):
        raise RouteInadmissible("the Euler-Maclaurin route evaluates at the Bernoulli umbra only")
    return eval_em(f, n=p.get("n", 40), p=p.get("p", 10), tol=p.get("tol", 1e-10))


def is_bernoulli(A: Umbra) -> bool:
    return A.label == "B" and A.strip == Strip(-2 * math.pi, 2 * math.pi)


# -- series ---------------------------------------------------------------


def _strip_radius(A: Umbra) -> float:
    return min(-A.strip.lower, A.strip.upper)


def _series_coeffs(f: AnalyticFn, N: int, mom: np.ndarray):
    """Taylor coefficients at 0 on the circle that minimises the rounding
    error of sum c_n A^n, i.e. eps * max|f| * sum |A^n| / rho^n."""
    d = float(f.distance_to_singularity(np.asarray(0j)))
    cap = min(0.75 * d, 64.0)
    best = None
    n = np.arange(N + 1)
    w = np.exp(2j * np.pi * np.arange(64) / 64)
    for j in range(10):
        rho = cap * 2.0 ** -j
        try:
            c = f.taylor(np.asarray(0j), N, radius=rho, m_start=max(64, 4 * N), m_max=8192)
            fmax = float(np.max(np.abs(f.func(rho * w))))
        except (NonConvergent, SingularityError):
            continue
        with np.errstate(over="ignore"):
            floor = EPS * fmax * float(np.sum(np.abs(mom) / rho ** n.astype(float)))
        if np.isfinite(floor) and (best is None or floor < best[1]):
            best = (c, floor, rho)
    if best is None:
        raise RouteInadmissible(f"no Taylor expansion of {f.name} at 0")
    return best


def eval_series(f, A: Umbra, N: int = 40) -> EvalResult:
    """Moment series.  ``f`` is an AnalyticFn or the sequence a_n = f^(n)(0).

    Admission is the coefficient test: the terms c_n A^n must decay
    geometrically, which for A^n ~ n!/R^n says the exponential type of f is
    below the strip radius R.
    """
    if not A.strip.contains_height(0.0):
        raise RouteInadmissible(f"0 is not interior to the strip of {A.label}")
    finite = not (isinstance(f, AnalyticFn) or callable(f))
    if not finite:
        f = as_analytic(f)
        mom = np.array([moment(A, k) for k in range(N + 1)])
        c, floor, rho = _series_coeffs(f, N, mom)
    else:
        a = np.asarray(f, dtype=complex)
        N = len(a) - 1
        mom = np.array([moment(A, k) for k in range(N + 1)])
        c = a / np.array([math.factorial(k) for k in range(N + 1)], dtype=float)
        floor, rho = EPS * float(np.sum(np.abs(c * mom))), None
    R = _strip_radius(A)
    terms = c * mom
    value = complex(np.sum(terms))
    mag = np.abs(terms)
    last = float(np.max(mag[-5:]))
    mid = float(np.max(mag[N // 2 - 4: N // 2 + 1]))
    if finite or last <= floor:  # an explicit coefficient list is a polynomial
        q, tail = 0.0, 0.0
    else:
        q = (last / mid) ** (1.0 / (N - N // 2)) if mid > 0 else 1.0
        if q >= 0.9:
            raise RouteInadmissible(f"coefficient test failed: term ratio {q:.3g} "
                                    f"(type about {q * R:.3g}, strip radius {R:.3g})")
        tail = last * q / (1 - q)
        if tail > 1e-6 * max(1.0, abs(value)):
            raise RouteInadmissible(f"series not converged by N={N} (tail {tail:.3g})")
    rounding = floor + 10 * EPS * float(np.sum(mag))
    return EvalResult(value, tail + rounding, "series",
                      {"N": N, "term_ratio": q, "type_estimate": q * R, "strip_radius": R,
                       "radius": rho})


# -- contour and Gauss-Weierstrass ------------------------------------------


_GL_A = leggauss(20)
_GL_B = leggauss(32)


def _default_height(A: Umbra) -> float:
    a, b = A.index.alpha, A.index.beta
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a):
        return b - 1.0
    if math.isinf(b):
        return a + 1.0
    return 0.5 * (a + b)


def _line_nodes(st, rule):
    xg, wg = rule
    h = st.PANEL / 2
    ks = np.arange(st.k_min, st.k_max + 1)
    x = (ks[:, None] * st.PANEL + h * (xg[None, :] + 1)).ravel()
    w = np.tile(wg * h, len(ks))
    return x, w


def _contour_parts(f: AnalyticFn, A: Umbra, t: float):
    if A.index.singular:
        raise DecomposeFirst(f"{A.label} is singular; use decompose_singular or a catalog identity")
    a, b = A.index.alpha, A.index.beta
    if not a < t < b:
        raise RouteInadmissible(f"height {t} outside the regular interval ({a:g}, {b:g})")
    try:
        st = sampled_transform(A, t)
    except (DivergentTail, DomainError) as e:
        raise RouteInadmissible(f"transform of {A.label} unavailable at t={t}: {e}") from e
    while True:
        parts = []
        for rule in (_GL_A, _GL_B):
            xi, w = _line_nodes(st, rule)
            with np.errstate(all="ignore"):
                fv = np.asarray(f.func(t + 1j * xi), dtype=complex)
            if not np.all(np.isfinite(fv)):
                raise RouteInadmissible(f"{f.name} is not finite on the line Re z = {t}")
            parts.append((xi, w, st(xi) * fv, fv))
        xi, _, g, _ = parts[1]
        mag = np.abs(g)
        edge = np.abs(xi) > max(abs(st.L_minus), abs(st.L_plus)) - st.PANEL
        if np.max(mag[edge]) <= 1e-17 * (np.max(mag) or 1.0) or not st.extend():
            return st, parts


def _decay_check(st, xi, integrand, tol):
    # the integrand on the outermost panels must be negligible
    mag = np.abs(integrand)
    peak = float(np.max(mag)) or 1.0
    edge = np.abs(xi) > max(abs(st.L_minus), abs(st.L_plus)) - st.PANEL
    tail = float(np.max(mag[edge])) * st.PANEL
    if tail > max(tol, 1e-12 * peak):
        raise RouteInadmissible(f"integrand A^(z) f(iz) does not decay (edge {tail:.3g})")
    return tail


def eval_contour(f, A: Umbra, t: Optional[float] = None, tol: float = 1e-10) -> EvalResult:
    f = as_analytic(f)
    t = _default_height(A) if t is None else float(t)
    st, parts = _contour_parts(f, A, t)
    vals = [complex(np.sum(w * g)) / SQRT_2PI for _, w, g, _ in parts]
    xi, w, g, fv = parts[1]
    tail = _decay_check(st, xi, g, tol)
    interp = st.accuracy * float(np.sum(w * np.abs(fv))) / SQRT_2PI
    err = abs(vals[1] - vals[0]) + interp + tail + 10 * EPS * float(np.sum(w * np.abs(g)))
    return EvalResult(vals[1], err, "contour",
                      {"t": t, "xi_range": (st.L_minus, st.L_plus),
                       "transform_accuracy": st.accuracy})


def eval_gw(f, A: Umbra, t: Optional[float] = None, sched: GWSchedule = GWSchedule(),
            tol: float = 1e-8) -> EvalResult:
    f = as_analytic(f)
    t = _default_height(A) if t is None else float(t)
    st, parts = _contour_parts(f, A, t)
    xi, w, g, _ = parts[1]
    z = xi - 1j * t
    per_eps = []
    for e in sched.eps:
        damped = np.exp(-e * z * z) * g
        per_eps.append(complex(np.sum(w * damped)) / SQRT_2PI)
    damped = np.exp(-sched.eps[-1] * z * z) * g
    mag = np.abs(damped)
    edge = np.abs(xi) > max(abs(st.L_minus), abs(st.L_plus)) - st.PANEL
    cut = float(np.max(mag[edge])) * st.PANEL
    value, resid = extrapolate(sched.eps, per_eps, sched.order)
    scale = max(1.0, abs(value))
    if cut > tol * scale or not resid <= tol * scale:
        raise NonConvergent(f"damped integrals do not settle (residual {resid:.3g}, cutoff {cut:.3g})")
    err = resid + cut + _contour_floor(st, parts)
    return EvalResult(value, err, "gw", {"t": t, "eps": list(sched.eps), "values": per_eps})


def _contour_floor(st, parts):
    (_, wa, ga, _), (_, wb, gb, fv) = parts
    va = complex(np.sum(wa * ga)) / SQRT_2PI
    vb = complex(np.sum(wb * gb)) / SQRT_2PI
    return abs(va - vb) + st.accuracy * float(np.sum(wb * np.abs(fv))) / SQRT_2PI


# -- Euler-Maclaurin ---------------------------------------------------------


_BM = bernoulli_moments(16)


def _taylor_at(f: AnalyticFn, z0: complex, K: int) -> np.ndarray:
    return f.taylor_weighted(z0, K, _BM[: K + 1])[0]


def em_partial(f: AnalyticFn, n: int, p: int, shift: complex = 0, with_floor: bool = False):
    """L(n, p) for z -> f(z + shift); optionally with its rounding level."""
    c = _taylor_at(f, n + shift, p)
    head = sum(_BM[k] * c[k] for k in range(p + 1))
    j = np.arange(1, n + 1) + shift
    d1 = np.asarray(f.derivative(j.astype(complex), 1))
    val = complex(head - math.fsum(d1.real) - 1j * math.fsum(d1.imag))
    if not with_floor:
        return val
    floor = 10 * EPS * (float(np.sum(np.abs(d1))) + sum(abs(_BM[k] * c[k]) for k in range(p + 1)))
    return val, floor


def em_admission(f: AnalyticFn, n: int, p: int, hierarchy: bool = True) -> dict:
    """Derivative probe (f^(p) decays along the positive axis) and optional
    hierarchy test of f' against the Bernoulli weights."""
    diag = {}
    try:
        probe = derivative_envelope(f, (n, 2 * n, 4 * n), p)
        scale = abs(f(complex(n))) + 1.0
    except (SingularityError, NonConvergent, DomainError) as e:
        raise RouteInadmissible(f"derivative probe failed: {e}") from e
    diag["probe"] = probe
    tiny = all(v < 1e-9 * scale for v in probe)
    if not (tiny or (probe[2] <= probe[1] <= probe[0] * (1 + 1e-9))):
        raise RouteInadmissible(f"f^({p}) does not decay along the positive axis")
    if hierarchy:
        rep = hierarchy_check(f.derivative_fn(1),
                              HierarchyParams(-2 * math.pi, 0, 2 * math.pi, 0, p))
        diag["hierarchy"] = rep.verdict
        if not rep.consistent:
            raise RouteInadmissible(f"hierarchy test failed: {'; '.join(rep.notes)}")
    return diag


def eval_em(f, n: int = 40, p: int = 10, tol: float = 1e-10, n_max: int = 640,
            shift: complex = 0, hierarchy: bool = True) -> EvalResult:
    """f(B + shift) as the limit of L(n, p), n doubled up to n_max."""
    f = as_analytic(f)
    if not 0 <= p <= 16:
        raise DomainError("p must lie in [0, 16]")
    g = f.shifted(shift) if shift else f
    diag = em_admission(g, n, p, hierarchy)
    if degree_at_most(g, p):
        # L(n, p) is exact at every n; small n avoids cancellation in the sums
        diag["polynomial"] = True
        n = 1
    first, fl = em_partial(f, n, p, shift, True)
    ns, Ls, floors = [n], [first], [fl]
    while True:
        m = 2 * ns[-1]
        val, fl = em_partial(f, m, p, shift, True)
        ns.append(m)
        Ls.append(val)
        floors.append(fl)
        diff = abs(Ls[-1] - Ls[-2])
        scale = max(1.0, abs(Ls[-1]))
        if diff <= tol * scale + floors[-1] + floors[-2]:
            value, err = Ls[-1], diff + floors[-1]
            break
        if m >= n_max:
            h = [1.0 / k for k in ns]
            est = neville(h[::-1], Ls[::-1])
            value, err = est[-1], abs(est[-1] - est[-2]) + floors[-1]
            if err > tol * 1e2 * scale:
                raise NonConvergent(f"EM limit did not settle by n={m} (last change {diff:.3g})")
            diag["richardson"] = True
            break
    diag.update({"n_trail": ns, "L_trail": Ls, "p": p})
    return EvalResult(value, err, "euler_maclaurin", diag)


def eval_power(z: complex, n: int = 40, p: int = 10, tol: float = 1e-12) -> EvalResult:
    """B^z: moments for nonnegative integers, the EM route on t^z otherwise."""
    z = complex(z)
    if z.imag == 0 and z.real >= 0 and z.real == int(z.real):
        k = int(z.real)
        if k == 0:
            return EvalResult(1 + 0j, 0.0, "moment", {"k": 0})
        return EvalResult(moment(make_special("B"), k), 1e-12 * (1 + math.factorial(min(k, 20))),
                          "moment", {"k": k})
    if z.real <= -1:
        raise RouteInadmissible("B^z needs Re z > -1 on the Euler-Maclaurin route")
    from .analytic_fn import Singularity
    f = AnalyticFn(lambda w: np.exp(z * np.log(np.asarray(w, dtype=complex))),
                   (Singularity(0j, 1.0, "branch"),), name=f"t^{z}")
    r = eval_em(f, n=n, p=p, tol=tol)
    r.diagnostics["exponent"] = z
    return r


# -- shifts ------------------------------------------------------------------


def eval_shifted(f, A: Umbra, z0: complex, route: str = "auto", **kw) -> EvalResult:
    """f(A + z0) = g(A) with g(z) = f(z + z0)."""
    f = as_analytic(f)
    z0 = complex(z0)
    if route == "euler_maclaurin" or (route == "auto" and is_bernoulli(A) and kw.pop("prefer_em", False)):
        return eval_em(f, shift=z0, **kw)
    g = f.shifted(z0) if z0 else f
    if route == "auto":
        return eval_auto(g, A, **kw)
    return evaluate(EvalRequest(g, A, route, kw))


def eval_special_shift(f, which: str, z: complex) -> complex:
    """f(D + z) = f'(z) and f(Delta + z) = f(z + 1) - f(z)."""
    f = as_analytic(f)
    z = complex(z)
    if which == "D":
        return complex(f.derivative(z, 1))
    if which == "Delta":
        return f(z + 1) - f(z)
    raise DomainError("which must be 'D' or 'Delta'")


@dataclass
class ShiftDerivative:
    lhs: complex  # d/dz0 f(A + z0) at 0
    rhs: Optional[complex]  # f'(A)
    gap: Optional[float]
    notes: list = field(default_factory=list)


def eval_derivative_in_shift(f, A: Umbra, radius: float = 0.1, route: str = "auto",
                             nodes: int = 16, **kw) -> ShiftDerivative:
    """Cauchy derivative of z0 -> f(A + z0) at 0, set beside f'(A)."""
    f = as_analytic(f)
    w = radius * np.exp(2j * math.pi * np.arange(nodes) / nodes)
    vals = np.array([eval_shifted(f, A, z0, route, **kw).value for z0 in w])
    lhs = complex(np.fft.fft(vals)[1] / nodes / radius)
    notes = []
    try:
        rhs = eval_shifted(f.derivative_fn(1), A, 0, route, **kw).value
        gap = abs(lhs - rhs)
    except UmbralError as e:
        rhs, gap = None, None
        notes.append(f"f'(A) not evaluated: {e}")
    return ShiftDerivative(lhs, rhs, gap, notes)


def gaussian_pole_umbra() -> Umbra:
    """(z^-1 exp(-z^2), Omega_{0,inf}): the umbra for which f(A + D) and f'(A)
    differ although both are defined."""
    from .analytic_fn import Singularity
    strip = Strip(0.0, math.inf)
    gen = AnalyticFn(lambda z: np.exp(-np.asarray(z) ** 2) / np.asarray(z),
                     (Singularity(0j, 1.0),), strip, name="exp(-z^2)/z")
    return Umbra(gen, strip, ExpIndex(-math.inf, math.inf), "G")


def interchange_guard(f, A: Umbra) -> dict:
    """Evaluate f(A + D) and f'(A) separately; never assume they agree."""
    f = as_analytic(f)
    AD = add(A, make_special("D"))
    AD = Umbra(AD.gen, AD.strip, ExpIndex(-math.inf, math.inf), AD.label, True)
    out = {"f(A+D)": eval_contour(f, AD, t=0.5).value}
    df = f.derivative_fn(1)
    probe = np.asarray(df.func(np.array([0.3, 1.7 + 0.4j, -2.1 - 1j])))
    if np.all(np.abs(probe) < 1e-12):
        out["f'(A)"] = 0j  # linearity: the zero function evaluates to 0 at any umbra
    else:
        out["f'(A)"] = eval_contour(df, A, t=0.5).value
    out["equal"] = bool(abs(out["f(A+D)"] - out["f'(A)"]) < 1e-8)
    return out


# -- singular umbrae ----------------------------------------------------------

DELTA = 0.5


def mollifier(sign: int) -> Callable:
    """rho_+(w) = erfc(-w/2)/2 and rho_-(w) = -erfc(w/2)/2: inverse transforms of
    exp(-z^2)/(i sqrt(2 pi) z) along lines below and above the pole."""
    if sign > 0:
        return lambda w: 0.5 * erfc(-np.asarray(w, dtype=complex) / 2)
    return lambda w: -0.5 * erfc(np.asarray(w, dtype=complex) / 2)


def mollifier_numeric(sign: int, w, delta: float = DELTA) -> np.ndarray:
    """The same mollifier by quadrature on the line R - i(sign*delta)."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    lam = lambda z: np.exp(-z * z) / (1j * SQRT_2PI * z)
    out = []
    for wk in w:
        # inverse transform: (1/sqrt(2pi)) int lam(z) e^{i z w} dz = ft_line at zeta = -w
        r = ft_line(lam, sign * delta, -wk, QuadratureSpec(rule="gl-panels", X=12.0, panels=96))
        out.append(r.value)
    return np.array(out)


def mollifier_gap(points=(0.0, 0.7, -1.3, 2.0 + 0.5j)) -> complex:
    """c0 = rho_+ - rho_- measured by quadrature; constant in w."""
    diffs = mollifier_numeric(+1, points) - mollifier_numeric(-1, points)
    spread = float(np.max(np.abs(diffs - diffs[0])))
    if spread > 1e-10:
        raise NonConvergent(f"mollifier gap is not constant (spread {spread:.3g})")
    return complex(np.mean(diffs))


def decompose_singular(A: Umbra):
    """A+ = A rho_+ and A- = A rho_-, with A = (A+ [-] A-)/c0."""
    out = []
    for sign in (+1, -1):
        rho = mollifier(sign)
        g = A.gen
        gen = AnalyticFn(lambda z, rho=rho: g.func(z) * rho(z), g.singularities, A.strip,
                         None, f"({g.name})*rho{'+' if sign > 0 else '-'}")
        idx = ExpIndex(A.index.alpha, math.inf) if sign > 0 else ExpIndex(-math.inf, A.index.beta)
        out.append(Umbra(gen, A.strip, idx, f"{A.label}{'+' if sign > 0 else '-'}", True))
    return out[0], out[1]


def eval_singular(f, A: Umbra, route: str = "contour") -> EvalResult:
    """f(A) = f(A+) - f(A-) (c0 = 1) for a singular umbra."""
    f = as_analytic(f)
    Ap, Am = decompose_singular(A)
    ev = eval_contour if route == "contour" else eval_gw
    rp, rm = ev(f, Ap), ev(f, Am)
    return EvalResult(rp.value - rm.value, rp.err_est + rm.err_est, f"decomposed-{route}",
                      {"plus": rp.value, "minus": rm.value})


def eval_catalog_singular(f, A: Umbra) -> Optional[EvalResult]:
    """Closed forms for the singular catalog entries, or None."""
    f = as_analytic(f)
    lab = A.label
    if lab == "D":
        return EvalResult(complex(f.derivative(0j, 1)), 1e-12, "identity", {"rule": "f'(0)"})
    if lab == "Delta":
        return EvalResult(f(1.0) - f(0.0), 1e-15, "identity", {"rule": "f(1)-f(0)"})
    if lab.startswith("(") and A.index.alpha == A.index.beta:
        c = complex(lab[1:-1].replace(" ", ""))
        return EvalResult(f(c), 1e-15, "identity", {"rule": "f(c)"})
    if lab.startswith("["):
        c = complex(A.gen(0.0))
        return EvalResult(c * f(0.0), 1e-15, "identity", {"rule": "c f(0)"})
    return None


# -- reconciliation -------------------------------------------------------------


def eval_auto(f, A: Umbra, routes: Sequence[str] = ROUTES, strict: bool = True,
              **params) -> EvalResult:
    """Run every admissible route; return the value with the smallest error
    estimate and check pairwise agreement."""
    f = as_analytic(f)
    if A.index.singular:
        r = eval_catalog_singular(f, A)
        if r is None:
            r = eval_singular(f, A)
        return r
    results, refused = {}, {}
    for route in routes:
        try:
            if route == "series":
                r = eval_series(f, A, N=params.get("N", 40))
            elif route == "contour":
                r = eval_contour(f, A, t=params.get("t"))
            elif route == "gw":
                r = eval_gw(f, A, t=params.get("t"))
            else:
                if not is_bernoulli(A):
                    raise RouteInadmissible("Euler-Maclaurin applies to the Bernoulli umbra only")
                r = eval_em(f, n=params.get("n", 40), p=params.get("p", 10),
                            tol=params.get("tol", 1e-10))
        except (UmbralError, FloatingPointError) as e:
            refused[route] = f"{type(e).__name__}: {e}"
            continue
        results[route] = r
    if not results:
        raise RouteInadmissible(f"no admissible route for {f.name} at {A.label}: {refused}")
    names = list(results)
    disagreements = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ra, rb = results[a], results[b]
            gap = abs(ra.value - rb.value)
            if gap > ra.err_est + rb.err_est + 1e-13 * max(1.0, abs(ra.value)):
                disagreements.append((a, b, gap))
    best = min(names, key=lambda k: results[k].err_est)
    out = results[best]
    diag = {"routes": {k: (v.value, v.err_est) for k, v in results.items()},
            "refused": refused, "disagreements": disagreements, "chosen": best}
    if disagreements and strict:
        raise NonConvergent(f"routes disagree: {disagreements}")
    return EvalResult(out.value, out.err_est, best, {**out.diagnostics, **diag})


# -- iterated evaluation -----------------------------------------------------


def eval_iterated(f2: Callable, A1: Umbra, A2: Umbra, order: str = "12", N: int = 30,
                  radius: float = 8.0) -> complex:
    """Evaluate f(z1, z2) at (A1, A2) one variable at a time.

    The inner variable goes through the moment series (Taylor coefficients by
    FFT on a circle of ``radius``); the outer variable through the contour
    route.  ``order`` "12" means A2 inner, A1 outer.
    """
    inner, outer = (A2, A1) if order == "12" else (A1, A2)
    mom = np.array([moment(inner, k) for k in range(N + 1)])
    M = 128
    circle = radius * np.exp(2j * math.pi * np.arange(M) / M)

    def g(z):
        z = np.asarray(z, dtype=complex)
        zz = z[..., None]
        vals = f2(zz, circle) if order == "12" else f2(circle, zz)
        c = np.fft.fft(vals, axis=-1)[..., : N + 1] / M / radius ** np.arange(N + 1)
        return c @ mom

    return eval_contour(AnalyticFn(g, name="inner"), outer).value
