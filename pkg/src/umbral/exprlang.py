"""A small expression language for analytic functions of z.

Grammar (whitespace is insignificant, no implicit multiplication)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := unary ('^' factor)?
    unary   := '-'? primary
    primary := number | 'i' | 'z' | ident '(' args ')' | '(' expr ')'

Note that ``-z^2`` is ``(-z)^2`` under this grammar.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .analytic_fn import AnalyticFn, Singularity
from .errors import DomainError


class ExprSyntaxError(DomainError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} at offset {offset}")
        self.offset = offset


# -- AST ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[object, ...]


ARITY = {"sin": 1, "cos": 1, "tan": 1, "exp": 1, "log": 1, "sqrt": 1, "sinh": 1,
         "cosh": 1, "pow": 2, "besselj": 2, "besseljn": 2}

# -- lexer / parser -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|"
                    r"(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))")


def _tokens(src: str):
    pos, out = 0, []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", _bytes(src, pos))
        kind = m.lastgroup
        out.append((kind, m.group(kind), _bytes(src, m.start(kind))))
        pos = m.end()
    out.append(("end", "", _bytes(src, len(src))))
    return out


def _bytes(src: str, pos: int) -> int:
    return len(src[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokens(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, text=None):
        tok = self.toks[self.i]
        if text is not None and tok[1] != text:
            raise ExprSyntaxError(f"expected {text!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        base = self.unary()
        if self.peek()[1] == "^":
            self.take()
            return Pow(base, self.factor())
        return base

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.primary())
        return self.primary()

    def primary(self):
        kind, text, off = self.peek()
        if kind == "num":
            self.take()
            return Num(float(text))
        if kind == "ident":
            self.take()
            if text == "i":
                return Imag()
            if text == "z":
                return Var()
            if text not in ARITY:
                raise ExprSyntaxError(f"unknown identifier {text!r}", off)
            self.take("(")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.take(")")
            if len(args) != ARITY[text]:
                raise ExprSyntaxError(
                    f"{text} takes {ARITY[text]} argument(s), got {len(args)}", off)
            return Call(text, tuple(args))
        if text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", off)


def parse(src: str):
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    p = _Parser(src)
    node = p.expr()
    kind, text, off = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {text!r}", off)
    return node


# -- printer --------------------------------------------------------------

_LEVEL = {Add: 1, Sub: 1, Mul: 2, Div: 2, Pow: 3, Neg: 3}


def _level(e) -> int:
    return _LEVEL.get(type(e), 4)


def _num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_str(e) -> str:
    """Canonical text; parse(to_str(e)) == e."""
    if isinstance(e, Num):
        return _num(e.value)
    if isinstance(e, Imag):
        return "i"
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Call):
        return f"{e.name}({', '.join(to_str(a) for a in e.args)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _level(e.arg) < 4)
    if isinstance(e, Pow):
        left = _wrap(e.left, not (_level(e.left) == 4 or isinstance(e.left, Neg)))
        return f"{left}^{_wrap(e.right, _level(e.right) < 3)}"
    op = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}[type(e)]
    lv = _level(e)
    return f"{_wrap(e.left, _level(e.left) < lv)}{op}{_wrap(e.right, _level(e.right) <= lv)}"


def _wrap(e, paren: bool) -> str:
    s = to_str(e)
    return f"({s})" if paren else s


# -- compiler -------------------------------------------------------------

def _depends_on_z(e) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, (Num, Imag)):
        return False
    if isinstance(e, Neg):
        return _depends_on_z(e.arg)
    if isinstance(e, Call):
        return any(_depends_on_z(a) for a in e.args)
    return _depends_on_z(e.left) or _depends_on_z(e.right)


def _const(e) -> complex:
    return complex(_build(e)(np.asarray(0j)))


def _bessel(name):
    from .gosper import bessel_kernel

    def call(nu, z):
        if name == "besseljn":
            return bessel_kernel(nu, z)
        return bessel_kernel(nu, z) * z ** nu
    return call


_UNARY = {"sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp, "log": np.log,
          "sqrt": np.sqrt, "sinh": np.sinh, "cosh": np.cosh}


def _build(e):
    if isinstance(e, Num):
        # a real scalar keeps numpy on its real-exponent fast paths
        v = float(e.value)
        return lambda z: v
    if isinstance(e, Imag):
        return lambda z: 1j
    if isinstance(e, Var):
        return lambda z: z
    if isinstance(e, Neg):
        a = _build(e.arg)
        return lambda z: -a(z)
    if isinstance(e, Call):
        if e.name in _UNARY:
            fn, a = _UNARY[e.name], _build(e.args[0])
            return lambda z: fn(a(z))
        if e.name == "pow":
            a, b = _build(e.args[0]), _build(e.args[1])
            return lambda z: a(z) ** b(z)
        if _depends_on_z(e.args[0]):
            raise DomainError(f"{e.name}: the order must not depend on z")
        nu = _const(e.args[0])
        if nu.imag != 0:
            raise DomainError(f"{e.name}: the order must be real")
        a, call = _build(e.args[1]), _bessel(e.name)
        return lambda z: call(nu.real, a(z))
    a, b = _build(e.left), _build(e.right)
    if isinstance(e, Add):
        return lambda z: a(z) + b(z)
    if isinstance(e, Sub):
        return lambda z: a(z) - b(z)
    if isinstance(e, Mul):
        return lambda z: a(z) * b(z)
    if isinstance(e, Div):
        return lambda z: a(z) / b(z)
    return lambda z: a(z) ** b(z)


def _affine(e):
    """(a, b) when e = a z + b with constants a, b; None otherwise."""
    if not _depends_on_z(e):
        return 0j, _const(e)
    if isinstance(e, Var):
        return 1 + 0j, 0j
    if isinstance(e, Neg):
        inner = _affine(e.arg)
        return None if inner is None else (-inner[0], -inner[1])
    if isinstance(e, (Add, Sub)):
        l, r = _affine(e.left), _affine(e.right)
        if l is None or r is None:
            return None
        sg = 1 if isinstance(e, Add) else -1
        return l[0] + sg * r[0], l[1] + sg * r[1]
    if isinstance(e, Mul):
        l, r = _affine(e.left), _affine(e.right)
        if l is None or r is None:
            return None
        if l[0] == 0:
            return l[1] * r[0], l[1] * r[1]
        if r[0] == 0:
            return r[1] * l[0], r[1] * l[1]
        return None
    if isinstance(e, Div) and not _depends_on_z(e.right):
        l, d = _affine(e.left), _const(e.right)
        return None if l is None or d == 0 else (l[0] / d, l[1] / d)
    return None


def _linear_root(e):
    """The zero of e when e is affine in z."""
    ab = _affine(e)
    if ab is None or ab[0] == 0:
        return None
    return -ab[1] / ab[0]


def _singularities(e, out: dict):
    if isinstance(e, (Num, Imag, Var)):
        return
    if isinstance(e, Neg):
        _singularities(e.arg, out)
        return
    if isinstance(e, Call):
        for a in e.args:
            _singularities(a, out)
        root = _linear_root(e.args[-1])
        if e.name in ("log", "sqrt") and root is not None:
            _add(out, root, 0.0, "branch")
        if e.name == "tan" and root is not None:
            for k in range(-16, 16):
                _add(out, root + (k + 0.5) * math.pi, 1.0, "pole")
        if e.name == "pow":
            _power(e.args[0], e.args[1], out)
        if e.name == "besselj" and root is not None and not _const(e.args[0]).real.is_integer():
            _add(out, root, 0.0, "branch")
        return
    _singularities(e.left, out)
    _singularities(e.right, out)
    if isinstance(e, Div):
        den = e.right
        root = _linear_root(den)
        if root is not None:
            _add(out, root, 1.0, "pole")
        elif isinstance(den, Pow):
            _power(den.left, den.right, out, sign=-1)
    if isinstance(e, Pow):
        _power(e.left, e.right, out)


def _power(base, expo, out, sign=1):
    root = _linear_root(base)
    if root is None or _depends_on_z(expo):
        return
    p = sign * _const(expo)
    if p.imag == 0 and p.real.is_integer():
        if p.real < 0:
            _add(out, root, -p.real, "pole")
    else:
        _add(out, root, 0.0, "branch")


def _add(out, point, order, kind):
    point = complex(point)
    key = (complex(point.real + 0.0, point.imag + 0.0), kind)
    out[key] = max(out.get(key, order), order)


def compile_expr(e, name: str | None = None) -> AnalyticFn:
    fn = _build(e)

    def func(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            out = np.asarray(fn(z), dtype=complex)
        if out.shape != z.shape:
            out = np.broadcast_to(out, z.shape).copy()
        return out

    found: dict = {}
    _singularities(e, found)
    sings = tuple(Singularity(p, o, k) for (p, k), o in sorted(
        found.items(), key=lambda kv: (kv[0][0].real, kv[0][0].imag, kv[0][1])))
    return AnalyticFn(func, sings, name=name or to_str(e))


def compile_source(src: str) -> AnalyticFn:
    return compile_expr(parse(src))
