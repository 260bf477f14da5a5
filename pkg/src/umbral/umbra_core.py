"""Umbrae: generating functions on horizontal strips, their indices and the
umbral calculus operations (scaling, addition, umbral sum and difference).

Strips follow the convention Omega_{a,b} = {x - i t : x real, t in (a, b)},
so a point z belongs to the strip when -Im z lies in the open interval (a, b).
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analytic_fn import AnalyticFn, Singularity
from .errors import DivergentTail, DomainError, EmptyStripError, MomentUndefined
from .special_fn import bernoulli_moments

INF = math.inf


@dataclass(frozen=True)
class Strip:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise EmptyStripError(f"empty strip ({self.lower}, {self.upper})")

    def contains(self, z):
        t = -np.imag(np.asarray(z, dtype=complex))
        return (self.lower < t) & (t < self.upper)

    def contains_height(self, t: float) -> bool:
        return self.lower < t < self.upper

    def distance_to_boundary(self, z):
        t = -np.imag(np.asarray(z, dtype=complex))
        return np.minimum(t - self.lower, self.upper - t)

    def intersect(self, other: "Strip") -> "Strip":
        lo, hi = max(self.lower, other.lower), min(self.upper, other.upper)
        if not lo < hi:
            raise EmptyStripError(f"strips {self} and {other} do not intersect")
        return Strip(lo, hi)

    def scaled(self, r: float) -> "Strip":
        """The strip r^{-1} Omega."""
        lo, hi = self.lower / r, self.upper / r
        return Strip(min(lo, hi), max(lo, hi))

    def probe_height(self) -> float:
        lo, hi = self.lower, self.upper
        if math.isinf(lo) and math.isinf(hi):
            return 0.0
        if math.isinf(lo):
            return hi - 1.0
        if math.isinf(hi):
            return lo + 1.0
        return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ExpIndex:
    """Positive index alpha (growth as x -> +inf) and negative index beta."""

    alpha: float
    beta: float

    @property
    def regular(self) -> bool:
        return self.alpha < self.beta

    @property
    def singular(self) -> bool:
        return not self.regular


@dataclass(frozen=True, eq=False)
class Umbra:
    gen: AnalyticFn
    strip: Strip
    index: ExpIndex
    label: str = "A"
    index_is_estimate: bool = False
    _moments: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def regular(self) -> bool:
        return self.index.regular

    def regular_interval(self):
        if not self.regular:
            return None
        return (self.index.alpha, self.index.beta)

    def __repr__(self):
        return (f"Umbra({self.label}, strip=({self.strip.lower:g}, {self.strip.upper:g}), "
                f"index=({self.index.alpha:g}, {self.index.beta:g}))")


# -- catalog generating functions ----------------------------------------

_B_TAYLOR = np.array([b / math.factorial(k) for k, b in enumerate(bernoulli_moments(11))])


def _bernoulli_gen(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < 1e-2
    pos = ~small & (z.real >= 0)
    neg = ~small & (z.real < 0)
    with np.errstate(all="ignore"):
        out[pos] = z[pos] / (-np.expm1(-z[pos]))
        out[neg] = z[neg] * np.exp(z[neg]) / np.expm1(z[neg])
    out[small] = np.polyval(_B_TAYLOR[::-1], z[small])
    return out


def _sech_gen(z):
    z = np.asarray(z, dtype=complex)
    s = np.where(z.real >= 0, -z, z)  # Re s <= 0
    with np.errstate(all="ignore"):
        e = np.exp(s)
        return 2 * e / (1 + e * e)


def _const(c):
    return lambda z: np.full(np.shape(z), c, dtype=complex)


def _strip_sings(kind_points):
    return tuple(Singularity(p, 1.0) for p in kind_points)


CATALOG = ("const_exp", "const_num", "D", "Delta", "B", "E")


@functools.lru_cache(maxsize=64)
def make_special(name: str, param: Optional[complex] = None) -> Umbra:
    """Catalog umbrae: (c), [c], D, Delta, B and E.

    Umbrae are immutable, so repeated requests share one instance and with it
    the cached moments and sampled transforms."""
    whole = Strip(-INF, INF)
    if name == "const_exp":
        c = complex(param if param is not None else 0)
        gen = AnalyticFn(lambda z: np.exp(c * np.asarray(z)), name=f"exp({c}z)")
        return Umbra(gen, whole, ExpIndex(c.real, c.real), f"({c:g})")
    if name == "const_num":
        c = complex(param if param is not None else 0)
        idx = ExpIndex(-INF, INF) if c == 0 else ExpIndex(0.0, 0.0)
        return Umbra(AnalyticFn(_const(c), name=f"{c}"), whole, idx, f"[{c:g}]")
    if name == "D":
        return Umbra(AnalyticFn(lambda z: np.asarray(z, dtype=complex), name="z"), whole,
                     ExpIndex(0.0, 0.0), "D")
    if name == "Delta":
        return Umbra(AnalyticFn(lambda z: np.expm1(np.asarray(z, dtype=complex)),
                                name="e^z-1"), whole, ExpIndex(1.0, 0.0), "Delta")
    if name == "B":
        strip = Strip(-2 * math.pi, 2 * math.pi)
        sings = _strip_sings([2j * math.pi * k for k in range(-8, 9) if k])
        gen = AnalyticFn(_bernoulli_gen, sings, strip, name="z e^z/(e^z-1)")
        return Umbra(gen, strip, ExpIndex(0.0, 1.0), "B")
    if name == "E":
        strip = Strip(-math.pi / 2, math.pi / 2)
        sings = _strip_sings([1j * math.pi * (k + 0.5) for k in range(-8, 8)])
        gen = AnalyticFn(_sech_gen, sings, strip, name="sech z")
        return Umbra(gen, strip, ExpIndex(-1.0, 1.0), "E")
    raise DomainError(f"unknown catalog umbra {name!r}; choose from {CATALOG}")


def custom(gen: AnalyticFn, strip: Strip, index: Optional[ExpIndex] = None,
           label: str = "A") -> Umbra:
    """An umbra from a user generating function; the index is measured if absent."""
    probe = Umbra(gen, strip, ExpIndex(0.0, 0.0), label)
    if index is None:
        return Umbra(gen, strip, index_estimate(probe), label, index_is_estimate=True)
    return Umbra(gen, strip, index, label)


# -- calculus -------------------------------------------------------------


def scale(r: float, A: Umbra) -> Umbra:
    """rA = (gen(r z), r^{-1} Omega)."""
    if r == 0:
        raise DomainError("scale factor must be nonzero")
    g = A.gen
    sings = tuple(Singularity(s.point / r, s.order, s.kind) for s in g.singularities)
    strip = A.strip.scaled(r)
    gen = AnalyticFn(lambda z: g.func(r * np.asarray(z)), sings, strip, None,
                     f"{g.name}({r:g}z)")
    a, b = r * A.index.alpha, r * A.index.beta
    idx = ExpIndex(a, b) if r > 0 else ExpIndex(b, a)
    return Umbra(gen, strip, idx, f"{r:g}{A.label}", A.index_is_estimate)


def add(A1: Umbra, A2: Umbra) -> Umbra:
    """A1 + A2 = (gen1 gen2, Omega1 & Omega2); the index sum is an estimate."""
    strip = A1.strip.intersect(A2.strip)
    g1, g2 = A1.gen, A2.gen
    gen = AnalyticFn(lambda z: g1.func(z) * g2.func(z), g1.singularities + g2.singularities,
                     strip, None, f"({g1.name})*({g2.name})")
    idx = ExpIndex(A1.index.alpha + A2.index.alpha, A1.index.beta + A2.index.beta)
    return Umbra(gen, strip, idx, f"{A1.label}+{A2.label}", index_is_estimate=True)


def _combine(A1: Umbra, A2: Umbra, sign: int, op: str) -> Umbra:
    strip = A1.strip.intersect(A2.strip)
    g1, g2 = A1.gen, A2.gen
    gen = AnalyticFn(lambda z: g1.func(z) + sign * g2.func(z),
                     g1.singularities + g2.singularities, strip, None,
                     f"({g1.name}){op}({g2.name})")
    label = f"{A1.label}[{op}]{A2.label}"
    probe = Umbra(gen, strip, ExpIndex(0.0, 0.0), label)
    return Umbra(gen, strip, index_estimate(probe), label, index_is_estimate=True)


def usum(A1: Umbra, A2: Umbra) -> Umbra:
    """A1 [+] A2: generating functions add."""
    return _combine(A1, A2, +1, "+")


def udiff(A1: Umbra, A2: Umbra) -> Umbra:
    """A1 [-] A2: generating functions subtract."""
    return _combine(A1, A2, -1, "-")


def moment(A: Umbra, n: int) -> complex:
    """A^n = n-th derivative of the generating function at 0."""
    if n < 0:
        raise DomainError("moment order must be nonnegative")
    if not A.strip.contains_height(0.0):
        raise MomentUndefined(f"0 is not interior to the strip of {A.label}")
    with A._lock:
        if n in A._moments:
            return A._moments[n]
    K = max(n, 8)
    c = A.gen.taylor_auto(0j, K)
    vals = {k: complex(c[k] * math.factorial(k)) for k in range(K + 1)}
    with A._lock:
        for k, v in vals.items():
            A._moments.setdefault(k, v)
        return A._moments[n]


@dataclass(frozen=True)
class ProbePolicy:
    t: Optional[float] = None
    x_min: float = 20.0
    x_max: float = 60.0
    points: int = 41


def index_estimate(A: Umbra, probe: ProbePolicy = ProbePolicy()) -> ExpIndex:
    """Least-squares slopes of ln|gen(x - i t)| for x -> +inf (alpha) and
    x -> -inf (beta).  A ray on which the generating function underflows to
    zero is reported as infinite decay."""
    t = A.strip.probe_height() if probe.t is None else probe.t
    x = np.linspace(probe.x_min, probe.x_max, probe.points)
    slopes = []
    for side in (+1, -1):
        xs = side * x
        with np.errstate(all="ignore"):
            vals = np.abs(np.asarray(A.gen.func(xs - 1j * t), dtype=complex))
        if np.any(np.isinf(vals)) or np.any(np.isnan(vals)):
            raise DivergentTail(f"{A.label}: generating function overflows along the probe ray")
        if np.any(vals == 0):
            slopes.append(-INF if side > 0 else INF)
            continue
        slopes.append(float(np.polyfit(xs, np.log(vals), 1)[0]))
    return ExpIndex(slopes[0], slopes[1])
