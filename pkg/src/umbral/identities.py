"""Executable identity suites.

Every entry computes a value by the engine and compares it with an
independently obtained expected value.  ``run_suite("core")`` covers the
acceptance grid; ``"full"`` adds wider parameter sweeps.
"""

from __future__ import annotations

import cmath
import functools
import math
import time
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .errors import UmbralError
from .eval_engine import eval_auto, eval_contour, eval_em, eval_power
from .exprlang import compile_source
from .fracsum import frac_sum, frac_sum_derivative
from .gosper import (cos_kernel, direct_sum, gosper_rhs, gosper_termwise, gosper_umbral,
                     sin_kernel)
from .special_fn import constants, zeta_complex, zeta_derivative
from .umbra_core import make_special

SUITES = ("core", "full")


@dataclass
class Identity:
    name: str
    group: int  # acceptance criterion number
    compute: Callable[[], complex]
    expected: Callable[[], complex]
    tol: float


@dataclass
class IdentityResult:
    name: str
    group: int
    expected: complex | None
    computed: complex | None
    gap: float
    tol: float
    passed: bool
    seconds: float
    error: str = ""


def _f(src: str):
    return compile_source(src)


_CONST = None


def _consts():
    global _CONST
    if _CONST is None:
        _CONST = constants()
    return _CONST


# -- individual computations ---------------------------------------------------

def _stirling_em() -> complex:
    # ln n! = F(B+n) - F(B), F = z ln z - z; the n-free part is -F(B)
    return -eval_em(_f("z*log(z) - z")).value


def _stirling_limit() -> complex:
    """lim ln n! - (n+1/2) ln n + n by Richardson on n = 1000 * 2^j."""
    ns = [1000 * 2 ** j for j in range(6)]
    vals = [math.lgamma(n + 1) - (n + 0.5) * math.log(n) + n for n in ns]
    T = vals
    for k in range(1, len(ns)):
        T = [(2 ** k * T[i + 1] - T[i]) / (2 ** k - 1) for i in range(len(T) - 1)]
    return T[-1]


def _half_factorial_chain() -> complex:
    """ln((-1/2)!) = F(B - 1/2) - F(B) with (B-1/2) ln(B-1/2) obtained from
    2B [+] (2B-1) = [2] + B applied to (z/2) ln(z/2)."""
    zlz = eval_em(_f("z*log(z)")).value
    half = eval_em(_f("(z/2)*log(z/2)")).value
    shifted = 2 * half - zlz
    return shifted + 0.5 - zlz


def _half_factorial_shift() -> complex:
    """Same quantity with (B-1/2) ln(B-1/2) from the shifted EM route."""
    zlz = eval_em(_f("z*log(z)")).value
    shifted = eval_em(_f("z*log(z)"), shift=-0.5).value
    return shifted + 0.5 - zlz


def _zeta_pole(s: float, route: str) -> complex:
    """zeta(1+s) - 1/s with zeta(1+s) = B^-s / s."""
    if route == "oracle":
        return zeta_complex(1 + s) - 1 / s
    f = _f(f"exp({-s!r}*log(z))")
    r = eval_power(-s) if route == "euler_maclaurin" else eval_contour(f, make_special("B"))
    return (r.value - 1) / s


def _zeta_slope(s: float, route: str) -> complex:
    """(zeta(s) + 1/2)/s with zeta(s) = B^{1-s}/(s-1)."""
    if route == "oracle":
        return (zeta_complex(s) + 0.5) / s
    r = eval_power(1 - s) if route == "euler_maclaurin" else eval_contour(
        _f(f"exp({1 - s!r}*log(z))"), make_special("B"))
    return (r.value / (s - 1) + 0.5) / s


@functools.lru_cache(maxsize=None)
def _derivative_gap(src: str, z: float):
    return frac_sum_derivative(_f(src), z)


def _bz(z: complex, route: str) -> complex:
    if route == "euler_maclaurin":
        return eval_power(z).value
    zs = f"({z.real!r}+{z.imag!r}*i)"
    return eval_contour(_f(f"exp({zs}*log(z))"), make_special("B")).value


# -- route consistency grid -------------------------------------------------------

ROUTE_GRID = (
    [(f"z^{k}", "B") for k in range(1, 7)]
    + [("1 + z - z^3/2 + z^6/7", "B"), ("z^2", "E"), ("z^4", "E"), ("1 - z + z^3", "E"),
       ("z^6", "E")]
    + [(f"exp({c}*z)", "B") for c in ("0.5", "-0.5", "0.9", "-0.9", "(0.3+1*i)", "(-0.7+2*i)")]
    + [(f"exp({c}*z)", "E") for c in ("0.5", "-0.6", "0.9", "(0.2+0.5*i)")]
    + [(f"log(z+{s})", "B") for s in ("1", "2", "0.5", "3", "1+i")]
    + [(f"log(z+{s})", "E") for s in ("2", "3", "1.5", "1+i")]
)


@dataclass
class RouteCase:
    expr: str
    umbra: str
    values: dict
    refused: dict
    disagreements: list
    passed: bool


def route_consistency(grid=ROUTE_GRID) -> List[RouteCase]:
    out = []
    for expr, lab in grid:
        r = eval_auto(_f(expr), make_special(lab), strict=False)
        d = r.diagnostics
        ok = len(d["routes"]) >= 2 and not d["disagreements"]
        out.append(RouteCase(expr, lab, d["routes"], d["refused"], d["disagreements"], ok))
    return out


def _route_score() -> complex:
    cases = route_consistency()
    return sum(c.passed for c in cases) / len(cases)


# -- suite assembly ---------------------------------------------------------------


def _core() -> List[Identity]:
    K = _consts
    ids = [
        Identity("ln B = -gamma", 1, lambda: eval_em(_f("log(z)")).value,
                 lambda: -K().euler_gamma, 1e-8),
        Identity("B ln B = (1 - ln 2pi)/2", 1, lambda: eval_em(_f("z*log(z)")).value,
                 lambda: (1 - math.log(2 * math.pi)) / 2, 1e-8),
        Identity("B^2 ln B = 1/4 - 2 ln A", 1, lambda: eval_em(_f("z^2*log(z)")).value,
                 lambda: 0.25 - 2 * K().glaisher_log, 1e-7),
        Identity("MS sum 1/k, 1/4 -> -1/4", 2, lambda: frac_sum(_f("1/z"), 0.25, -0.25),
                 lambda: math.pi, 1e-8),
        Identity("MS sum 1/k^2, 1 -> -1/2", 2, lambda: frac_sum(_f("1/z^2"), 1, -0.5),
                 lambda: -math.pi ** 2 / 3, 1e-8),
        Identity("MS sum 1, 1 -> -1/2", 2, lambda: frac_sum(_f("1"), 1, -0.5),
                 lambda: -0.5, 1e-8),
    ]
    for m in (1, 2):
        ids.append(Identity(f"MS sum k^{2 * m - 1}, 1/4 -> -1/4", 2,
                            lambda m=m: frac_sum(_f(f"z^{2 * m - 1}"), 0.25, -0.25),
                            lambda: 0.0, 1e-8))
        ids.append(Identity(f"MS sum k^{2 * m}, 1 -> -1/2", 2,
                            lambda m=m: frac_sum(_f(f"z^{2 * m}"), 1, -0.5),
                            lambda: 0.0, 1e-8))
    for z in (2, 3, 4, 0.5, 1.5, 2 + 1j):
        z = complex(z)
        for route in ("euler_maclaurin", "contour"):
            ids.append(Identity(f"B^{_c(z)} = -z zeta(1-z) [{route}]", 3,
                                lambda z=z, route=route: _bz(z, route),
                                lambda z=z: -z * zeta_complex(1 - z), 1e-6))
    S, C = sin_kernel(), cos_kernel()
    for b in (0.5, 1, 2, 1 + 1j, 2j):
        b = complex(b)
        ids.append(Identity(f"Gosper sin, b={_c(b)}", 4,
                            lambda b=b: direct_sum(S, b, "sin").value,
                            lambda b=b: math.pi * cmath.sin(b) / (2 * b), 1e-6))
        ids.append(Identity(f"Gosper cos, b={_c(b)}", 4,
                            lambda b=b: direct_sum(C, b, "cos").value,
                            lambda b=b: math.pi ** 2 / 4 * (cmath.sin(b) / b - cmath.cos(b) / 3),
                            1e-6))
    for b in (0.5, 1.0):
        ids.append(Identity(f"Gosper sin umbral = 2 direct, b={b:g}", 4,
                            lambda b=b: gosper_umbral(S, b, "sin"),
                            lambda b=b: 2 * direct_sum(S, b, "sin").value, 1e-5))
        ids.append(Identity(f"Gosper cos umbral = 4 direct, b={b:g}", 4,
                            lambda b=b: gosper_umbral(C, b, "cos"),
                            lambda b=b: 4 * direct_sum(C, b, "cos").value, 1e-5))
    ids += [
        Identity("Stirling constant (EM route)", 5, _stirling_em,
                 lambda: K().log_sqrt_2pi, 1e-6),
        Identity("Stirling constant (limit)", 5, _stirling_limit,
                 lambda: K().log_sqrt_2pi, 1e-6),
        Identity("ln (-1/2)! (multiplication theorem)", 5, _half_factorial_chain,
                 lambda: 0.5 * math.log(math.pi), 1e-8),
        Identity("ln (-1/2)! (shifted EM)", 5, _half_factorial_shift,
                 lambda: 0.5 * math.log(math.pi), 1e-8),
        Identity("route consistency grid (fraction passing)", 6, _route_score,
                 lambda: 1.0, 0.0),
    ]
    for src in ("z", "1/z", "log(z)"):
        for z in (1.0, 1.5, 2.0):
            ids.append(Identity(f"d/dz MS sum {src} at z={z:g}", 7,
                                lambda src=src, z=z: _derivative_gap(src, z).lhs,
                                lambda src=src, z=z: _derivative_gap(src, z).rhs, 1e-6))
    for fam, J in (("sin", S), ("cos", C)):
        ids.append(Identity(f"termwise Gosper {fam} expansion, b=1", 8,
                            lambda fam=fam, J=J: gosper_termwise(J, 1.0, fam).termwise,
                            lambda fam=fam, J=J: gosper_umbral(J, 1.0, fam), 1e-6))
    s = 1e-4
    for route in ("euler_maclaurin", "contour"):
        ids.append(Identity(f"zeta(1+s) - 1/s at s=1e-4 [{route}]", 10,
                            lambda route=route: _zeta_pole(s, route),
                            lambda: _zeta_pole(s, "oracle"), 1e-5))
        ids.append(Identity(f"(zeta(s) + 1/2)/s at s=1e-4 [{route}]", 10,
                            lambda route=route: _zeta_slope(s, route),
                            lambda: _zeta_slope(s, "oracle"), 1e-5))
    ids += [
        Identity("zeta(1+s) - 1/s -> -ln B", 10, lambda: _zeta_pole(s, "euler_maclaurin"),
                 lambda: -eval_em(_f("log(z)")).value, 1e-4),
        Identity("zeta'(0) = -ln sqrt(2 pi)", 10, lambda: zeta_derivative(0.0),
                 lambda: -K().log_sqrt_2pi, 1e-8),
    ]
    return ids


def _full() -> List[Identity]:
    ids = _core()
    for z in (-0.5, 0.3 + 2j, 2.5, 0.25 - 0.75j, 5):
        z = complex(z)
        ids.append(Identity(f"B^{_c(z)} = -z zeta(1-z)", 3, lambda z=z: eval_power(z).value,
                            lambda z=z: -z * zeta_complex(1 - z), 1e-6))
    S, C = sin_kernel(), cos_kernel()
    for b in (1e-8, 3, 0.5 + 2j, -1.5j):
        b = complex(b)
        for fam, J in (("sin", S), ("cos", C)):
            ids.append(Identity(f"Gosper {fam}, b={_c(b)}", 4,
                                lambda b=b, fam=fam, J=J: direct_sum(J, b, fam).value,
                                lambda b=b, fam=fam, J=J: gosper_rhs(J, b, fam), 1e-6))
    for c in (0.5, -0.8, 0.4 + 1j):
        for lab in ("B", "E"):
            ids.append(Identity(f"exp({_c(complex(c))} z) at {lab} = gen({_c(complex(c))})", 9,
                                lambda c=c, lab=lab: eval_contour(
                                    _f(f"exp(({complex(c).real!r}+{complex(c).imag!r}*i)*z)"),
                                    make_special(lab)).value,
                                lambda c=c, lab=lab: make_special(lab).gen(c), 1e-10))
    for x, y in ((1, 2.5), (0.5, 3 + 1j), (-1.5, 0.75)):
        ids.append(Identity(f"MS sum log k, {_c(complex(x))} -> {_c(complex(y))}", 2,
                            lambda x=x, y=y: frac_sum(_f("log(z)"), x, y),
                            lambda x=x, y=y: _loggamma_diff(x, y), 1e-8))
    return ids


def _loggamma_diff(x, y) -> complex:
    from scipy.special import loggamma
    return complex(loggamma(complex(y) + 1) - loggamma(complex(x)))


def _c(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:g}"
    if z.real == 0:
        return f"{z.imag:g}i"
    return f"{z.real:g}{z.imag:+g}i"


def suite(name: str) -> List[Identity]:
    if name == "core":
        return _core()
    if name == "full":
        return _full()
    raise ValueError(f"unknown suite {name!r}")


def run_identity(ident: Identity) -> IdentityResult:
    t0 = time.perf_counter()
    try:
        got = complex(ident.compute())
        want = complex(ident.expected())
        gap = abs(got - want)
        ok = bool(gap <= ident.tol) and np.isfinite(gap)
        err = ""
    except UmbralError as e:
        got, want, gap, ok, err = None, None, math.inf, False, f"{type(e).__name__}: {e}"
    return IdentityResult(ident.name, ident.group, want, got, gap, ident.tol, ok,
                          time.perf_counter() - t0, err)


def run_suite(name: str = "core") -> List[IdentityResult]:
    return [run_identity(i) for i in suite(name)]
