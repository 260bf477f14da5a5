"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 route inadmissible or a
limit that did not settle, 3 an identity check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .errors import DomainError, UmbralError
from .eval_engine import ROUTES, EvalRequest, evaluate
from .exprlang import compile_source
from .fracsum import FracSumRequest, frac_sum_full
from .gosper import (FAMILIES, NORMALIZATION, bessel, cos_kernel, direct_sum, gosper_rhs,
                     gosper_umbral, sin_kernel)
from .identities import SUITES, run_suite
from .special_fn import constants
from .umbra_core import CATALOG, make_special

EXIT_OK, EXIT_USAGE, EXIT_ROUTE, EXIT_CHECK = 0, 1, 2, 3

RESULT_SCHEMA = {
    "type": "object",
    "required": ["value", "err_est", "route", "params", "checks"],
    "additionalProperties": False,
    "properties": {
        "value": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/complex"}]},
        "err_est": {"type": ["number", "null"]},
        "route": {"type": ["string", "null"]},
        "params": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "expected": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/complex"}]},
                    "computed": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/complex"}]},
                    "gap": {"type": ["number", "null"]},
                    "tol": {"type": ["number", "null"]},
                    "pass": {"type": "boolean"},
                },
            },
        },
    },
    "$defs": {
        "complex": {
            "type": "object",
            "required": ["re", "im"],
            "additionalProperties": False,
            "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
        }
    },
}


@dataclass
class RunManifest:
    command: str
    params: dict
    tolerances: dict
    diagnostics: dict
    wall_time: float
    version: str = __version__


@dataclass
class Report:
    value: Optional[complex]
    err_est: Optional[float]
    route: Optional[str]
    params: dict
    checks: list = field(default_factory=list)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """'a', 'bi', 'a+bi', 'a-bi' (no spaces, mandatory i for the imaginary part)."""
    s = text.strip()
    if not s or s != text or "j" in s or " " in s:
        raise argparse.ArgumentTypeError(f"bad complex literal {text!r}")
    try:
        return complex(s[:-1] + "j" if s.endswith("i") else s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex literal {text!r}") from None


def _cjson(z) -> Optional[dict]:
    if z is None:
        return None
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _clean(obj):
    """JSON-safe copy of diagnostics."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return _cjson(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def fmt(z, digits: int = 11) -> str:
    z = complex(z)
    if abs(z.imag) <= 1e-14 * max(1.0, abs(z.real)):
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def _check(name, expected, computed, gap, tol, ok) -> dict:
    return {"name": name, "expected": _cjson(expected), "computed": _cjson(computed),
            "gap": _num(gap), "tol": _num(tol), "pass": bool(ok)}


# -- commands ---------------------------------------------------------------


def _umbra(args):
    if args.umbra not in CATALOG:
        raise DomainError(f"unknown umbra {args.umbra!r}; choose from {', '.join(CATALOG)}")
    return make_special(args.umbra, args.param)


def cmd_eval(args):
    f = compile_source(args.f)
    A = _umbra(args)
    params = {"tol": args.tol}
    if args.n is not None:
        params["n"] = args.n
    if args.p is not None:
        params["p"] = args.p
    if args.t is not None:
        params["t"] = args.t
    r = evaluate(EvalRequest(f, A, args.route, params))
    shown = {"f": args.f, "umbra": A.label, **params, "route_requested": args.route}
    diag = {k: r.diagnostics[k] for k in ("routes", "refused", "disagreements", "chosen")
            if k in r.diagnostics}
    return Report(r.value, r.err_est, r.route_used, shown), diag


def cmd_fracsum(args):
    f = compile_source(args.f)
    req = FracSumRequest(f, args.from_, args.to, n=args.n, p=args.p, tol=args.tol)
    r = frac_sum_full(req, hierarchy=args.hierarchy)
    shown = {"f": args.f, "from": _cjson(args.from_), "to": _cjson(args.to), "n": args.n,
             "p": args.p, "tol": args.tol}
    diag = {"n_trail": r.diagnostics.get("n_trail"), "peeled": r.diagnostics.get("peeled")}
    return Report(r.value, r.err_est, "frac_sum", shown), diag


def cmd_gosper(args):
    if args.nu is None:
        J = sin_kernel() if args.family == "sin" else cos_kernel()
    else:
        J = bessel(args.nu)
    b = args.b
    rhs = gosper_rhs(J, b, args.family)
    checks, diag = [], {"kernel": J.name}
    value, err, route = None, None, None
    if args.compare in ("direct", "both"):
        d = direct_sum(J, b, args.family)
        gap = abs(d.value - rhs)
        checks.append(_check(f"direct {args.family} series vs closed form", rhs, d.value, gap,
                             args.tol, gap < args.tol))
        value, err, route = d.value, d.err_est, "direct"
        diag["direct_N"] = d.N
    if args.compare in ("umbral", "both"):
        u = gosper_umbral(J, b, args.family)
        want = NORMALIZATION[args.family] * rhs
        gap = abs(u - want)
        checks.append(_check(f"fractional-sum {args.family} form vs closed form", want, u, gap,
                             args.tol, gap < args.tol))
        if value is None:
            value, route = u, "umbral"
    shown = {"family": args.family, "b": _cjson(b), "nu": args.nu, "kernel": J.name,
             "compare": args.compare, "tol": args.tol}
    return Report(value, err, route, shown, checks), diag


def cmd_constants(args):
    c = constants()
    checks = [_check(k, None, getattr(c, k), None, None, True)
              for k in ("euler_gamma", "log_sqrt_2pi", "glaisher_log")]
    return Report(None, None, None, {}, checks), {"provenance": c.provenance}


def cmd_identities(args):
    res = run_suite(args.suite)
    checks = [_check(r.name, r.expected, r.computed, r.gap, r.tol, r.passed) for r in res]
    for c, r in zip(checks, res):
        c["group"] = r.group
        if r.error:
            c["error"] = r.error
    diag = {"seconds": {r.name: round(r.seconds, 3) for r in res}}
    return Report(None, None, None, {"suite": args.suite}, checks), diag


# -- output -------------------------------------------------------------------


def as_json(rep: Report) -> dict:
    return {"value": _cjson(rep.value), "err_est": _num(rep.err_est), "route": rep.route,
            "params": _clean(rep.params), "checks": rep.checks}


def as_csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["record", "name", "re", "im", "err_est", "gap", "tol", "pass", "route", "params"])
    params = json.dumps(_clean(rep.params), sort_keys=True)
    if rep.value is not None:
        v = complex(rep.value)
        w.writerow(["result", "value", repr(v.real), repr(v.imag),
                    "" if rep.err_est is None else repr(float(rep.err_est)), "", "", "",
                    rep.route or "", params])
    for c in rep.checks:
        comp = c["computed"] or {"re": "", "im": ""}
        w.writerow(["check", c["name"], comp["re"], comp["im"], "",
                    "" if c["gap"] is None else c["gap"], "" if c["tol"] is None else c["tol"],
                    c["pass"], "", ""])
    return buf.getvalue()


def as_text(rep: Report) -> str:
    lines = []
    if rep.value is not None:
        lines.append(f"value    {fmt(rep.value)}")
    if rep.err_est is not None:
        lines.append(f"err_est  {rep.err_est:.3g}")
    if rep.route:
        lines.append(f"route    {rep.route}")
    width = max((len(c["name"]) for c in rep.checks), default=0)
    for c in rep.checks:
        comp = "" if c["computed"] is None else fmt(complex(c["computed"]["re"], c["computed"]["im"]))
        if c["gap"] is None:
            lines.append(f"{c['name']:<{width}}  {comp}")
            continue
        exp = "" if c["expected"] is None else fmt(complex(c["expected"]["re"], c["expected"]["im"]))
        tag = "PASS" if c["pass"] else "FAIL"
        lines.append(f"{tag}  {c['name']:<{width}}  expected {exp}  computed {comp}  "
                     f"gap {c['gap']:.2e}")
    return "\n".join(lines) + "\n"


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="umbral", description="Numerical umbral calculus.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true")
        g.add_argument("--csv", action="store_true")
        sp.add_argument("--manifest", metavar="PATH",
                        help="write the run manifest here instead of stderr")

    e = sub.add_parser("eval", help="evaluate f(A)")
    e.add_argument("--f", required=True, help="expression in z")
    e.add_argument("--umbra", required=True, help=f"one of {', '.join(CATALOG)}")
    e.add_argument("--param", type=parse_complex, default=None,
                   help="parameter c for const_exp / const_num")
    e.add_argument("--route", choices=("auto",) + ROUTES, default="auto")
    e.add_argument("--tol", type=float, default=1e-10)
    e.add_argument("--n", type=int)
    e.add_argument("--p", type=int)
    e.add_argument("--t", type=float, help="contour height")
    output(e)
    e.set_defaults(run=cmd_eval)

    s = sub.add_parser("fracsum", help="fractional sum of f from x to y")
    s.add_argument("--f", required=True)
    s.add_argument("--from", dest="from_", type=parse_complex, required=True)
    s.add_argument("--to", type=parse_complex, required=True)
    s.add_argument("--n", type=int, default=40)
    s.add_argument("--p", type=int, default=10)
    s.add_argument("--tol", type=float, default=1e-11)
    s.add_argument("--hierarchy", action="store_true", help="run the hierarchy admission test")
    output(s)
    s.set_defaults(run=cmd_fracsum)

    g = sub.add_parser("gosper", help="Gosper-type Bessel series")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--b", type=parse_complex, required=True)
    g.add_argument("--nu", type=float, default=None,
                   help="use z^-nu J_nu(z); default is sin z/z (sin) or cos z (cos)")
    g.add_argument("--compare", choices=("direct", "umbral", "both"), default="direct")
    g.add_argument("--tol", type=float, default=1e-6)
    output(g)
    g.set_defaults(run=cmd_gosper)

    c = sub.add_parser("constants", help="gamma, ln sqrt(2 pi), ln A")
    output(c)
    c.set_defaults(run=cmd_constants)

    i = sub.add_parser("identities", help="run an identity suite")
    i.add_argument("--suite", choices=SUITES, default="core")
    output(i)
    i.set_defaults(run=cmd_identities)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    code = EXIT_OK
    diag: dict = {}
    try:
        rep, diag = args.run(args)
    except UmbralError as e:
        print(f"umbral {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        rep = None
        code = EXIT_USAGE if isinstance(e, DomainError) else EXIT_ROUTE
        diag = {"error": f"{type(e).__name__}: {e}"}
    if rep is not None:
        if args.json:
            sys.stdout.write(json.dumps(as_json(rep), sort_keys=True, indent=2) + "\n")
        elif args.csv:
            sys.stdout.write(as_csv(rep))
        else:
            sys.stdout.write(as_text(rep))
        if any(not c["pass"] for c in rep.checks):
            code = EXIT_CHECK
    params = {k: v for k, v in vars(args).items() if k not in ("run", "json", "csv", "manifest")}
    tols = {k: params[k] for k in ("tol",) if k in params}
    man = RunManifest(args.command, _clean(params), tols, _clean(diag),
                      round(time.perf_counter() - t0, 6))
    text = json.dumps(asdict(man), sort_keys=True)
    if args.manifest:
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
