"""Command-line front end.

Every subcommand prints one JSON document (keys sorted, so output is
byte-stable). Exit status: 0 on success, 1 when a computation fails a
precondition, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .action import BoundaryData, QuadraticLagrangian, full_action, solve_fundamental
from .adelic import adelic_kernel, chi_product, hilbert_product, lambda_product, norm_product, vacuum_check
from .config import Config, ConfigError
from .exact import Amplitude, PadelicError, Valuation, format_rational, is_prime, to_rational
from .integrals import gaussian_nd, residue_sum, sufficient_resolution
from .kernel import PropagatorRequest, kernel_v
from .number_theory import chi, hilbert, lambda_v, legendre
from .verify import run_all


class UsageError(Exception):
    pass


def _rational(s: str) -> Fraction:
    try:
        return to_rational(s)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _vector(s: str) -> list[Fraction]:
    return [_rational(x) for x in s.split(",")]


def _matrix(s: str) -> list[list[Fraction]]:
    # rows separated by ';', entries by ','
    rows = [_vector(r) for r in s.split(";")]
    if any(len(r) != len(rows) for r in rows):
        raise UsageError(f"matrix {s!r} is not square")
    return rows


def _valuation(s: str) -> Valuation:
    try:
        return Valuation.parse(s)
    except (ValueError, PadelicError) as exc:
        raise UsageError(f"bad valuation {s!r}") from exc


def _prime(s: str) -> int:
    try:
        p = int(s)
    except ValueError as exc:
        raise UsageError(f"bad prime {s!r}") from exc
    if not is_prime(p):
        raise UsageError(f"{p} is not a prime")
    return p


def load_lagrangian(source: str, order: int | None = None) -> QuadraticLagrangian:
    """A JSON file path, or a builtin: ``free``, ``free:n``, ``oscillator:omega_sq``."""
    kw = {} if order is None else {"order": order}
    head, _, arg = source.partition(":")
    if head == "free" and not Path(source).exists():
        return QuadraticLagrangian.free_particle(int(arg) if arg else 1, **kw)
    if head == "oscillator" and not Path(source).exists():
        return QuadraticLagrangian.oscillator(_rational(arg) if arg else 1, **kw)
    try:
        data = json.loads(Path(source).read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"Lagrangian file not found: {source}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"Lagrangian file is not valid JSON: {exc}") from exc
    try:
        return QuadraticLagrangian.from_json(data, order)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed Lagrangian: {exc}") from exc


def _boundary(args) -> BoundaryData:
    return BoundaryData(_rational(args.t1), _rational(args.t2), _vector(args.x1), _vector(args.x2))


def cmd_lambda(args, cfg):
    return {"phase": str(lambda_v(_valuation(args.v), _rational(args.x)))}


def cmd_hilbert(args, cfg):
    return {"symbol": hilbert(_valuation(args.v), _rational(args.a), _rational(args.b))}


def cmd_legendre(args, cfg):
    return {"symbol": legendre(int(_rational(args.a)), _prime(args.p))}


def cmd_chi(args, cfg):
    return {"phase": str(chi(_valuation(args.v), _rational(args.x)))}


def cmd_gauss(args, cfg):
    v = _valuation(args.valuation)
    alpha = _matrix(args.alpha)
    beta = _vector(args.beta) if args.beta else [Fraction(0)] * len(alpha)
    if len(beta) != len(alpha):
        raise UsageError("alpha and beta sizes differ")
    if not args.oracle:
        return gaussian_nd(v, alpha, beta).to_dict()
    if v.is_infinite:
        raise UsageError("--oracle needs a finite prime")
    radius = args.N if args.N is not None else 0
    m = args.M if args.M is not None else sufficient_resolution(v.p, alpha, beta, radius)
    z = residue_sum(v.p, alpha, beta, 0, [radius] * len(alpha), m, cfg.oracle_budget)
    return {"re": z.real, "im": z.imag, "N": radius, "M": m}


def cmd_action(args, cfg):
    lag = load_lagrangian(args.lagrangian, args.order or cfg.truncation_order)
    fm = solve_fundamental(lag)
    n = lag.n
    ca, _ = full_action(lag, fm, BoundaryData(_rational(args.t1), _rational(args.t2), [0] * n, [0] * n))
    return ca.to_dict()


def cmd_kernel(args, cfg):
    lag = load_lagrangian(args.lagrangian, args.order or cfg.truncation_order)
    h = _rational(args.h) if args.h is not None else _rational(cfg.h)
    req = PropagatorRequest(_valuation(args.valuation), lag, _boundary(args), h)
    return kernel_v(req).to_dict()


def cmd_adelic_product(args, cfg):
    x = _rational(args.x)
    if args.kind == "norm":
        return {"product": format_rational(norm_product(x))}
    if args.kind == "lambda":
        return {"product": str(lambda_product(x))}
    if args.kind == "chi":
        return {"product": str(chi_product(x))}
    if args.y is None:
        raise UsageError("hilbert needs --y")
    return {"product": hilbert_product(x, _rational(args.y))}


def cmd_adelic_kernel(args, cfg):
    lag = load_lagrangian(args.lagrangian, args.order or cfg.truncation_order)
    primes = [_prime(p) for p in args.primes.split(",")] if args.primes else list(cfg.primes)
    h = _rational(args.h) if args.h is not None else _rational(cfg.h)
    return adelic_kernel(lag, _boundary(args), h, primes, samples=args.samples).to_dict()


def cmd_vacuum(args, cfg):
    lag = load_lagrangian(args.lagrangian, args.order or cfg.truncation_order)
    h = _rational(args.h) if args.h is not None else _rational(cfg.h)
    return vacuum_check(_prime(args.p), lag, _rational(args.t1), _rational(args.t2), h, cfg.oracle_budget)


def cmd_verify(args, cfg):
    only = [int(s) for s in args.suite.split(",")] if args.suite else None
    if only and any(k < 1 or k > 10 for k in only):
        raise UsageError("suites are numbered 1..10")
    return run_all(cfg, only)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padelic", description="Exact p-adic and adelic propagator calculator.")
    parser.add_argument("--config", help="JSON Config document")
    parser.add_argument("--format", choices=("json", "text"), help="output format (overrides the config)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="lambda_v(x)")
    p.add_argument("--v", required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(fn=cmd_lambda)

    p = sub.add_parser("hilbert", help="Hilbert symbol (a, b)_v")
    p.add_argument("--v", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(fn=cmd_hilbert)

    p = sub.add_parser("legendre", help="Legendre symbol (a/p)")
    p.add_argument("--a", required=True)
    p.add_argument("--p", required=True)
    p.set_defaults(fn=cmd_legendre)

    p = sub.add_parser("chi", help="additive character chi_v(x)")
    p.add_argument("--v", required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(fn=cmd_chi)

    p = sub.add_parser("gauss", help="Gaussian integral over Q_v (or a ball, with --oracle)")
    p.add_argument("--valuation", required=True)
    p.add_argument("--alpha", required=True, help="symmetric matrix, rows ';'-separated")
    p.add_argument("--beta", help="comma-separated vector")
    p.add_argument("--N", type=int, help="ball radius exponent for --oracle")
    p.add_argument("--M", type=int, help="residue resolution for --oracle")
    p.add_argument("--oracle", action="store_true", help="brute-force residue sum instead of the closed form")
    p.set_defaults(fn=cmd_gauss)

    def lagrangian_args(q, boundary=True):
        q.add_argument("--lagrangian", required=True, help="JSON file, or free[:n] / oscillator[:omega_sq]")
        q.add_argument("--t1", required=True)
        q.add_argument("--t2", required=True)
        if boundary:
            q.add_argument("--x1", required=True, help="comma-separated vector")
            q.add_argument("--x2", required=True, help="comma-separated vector")
        q.add_argument("--h")
        q.add_argument("--order", type=int)

    p = sub.add_parser("action", help="classical action coefficients")
    lagrangian_args(p, boundary=False)
    p.set_defaults(fn=cmd_action)

    p = sub.add_parser("kernel", help="propagator K_v")
    p.add_argument("--valuation", required=True)
    lagrangian_args(p)
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("adelic-product", help="adelic product formulas")
    p.add_argument("kind", choices=("norm", "lambda", "hilbert", "chi"))
    p.add_argument("--x", required=True)
    p.add_argument("--y")
    p.set_defaults(fn=cmd_adelic_product)

    p = sub.add_parser("adelic-kernel", help="product of kernels over inf and a prime set")
    lagrangian_args(p)
    p.add_argument("--primes", help="comma-separated primes")
    p.add_argument("--samples", type=int, default=3, help="tail primes checked by the vacuum condition")
    p.set_defaults(fn=cmd_adelic_kernel)

    p = sub.add_parser("vacuum", help="vacuum condition at a prime (n = 1)")
    p.add_argument("--p", required=True)
    lagrangian_args(p, boundary=False)
    p.set_defaults(fn=cmd_vacuum)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", help="comma-separated suite numbers (default: all)")
    p.set_defaults(fn=cmd_verify)
    return parser


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, Amplitude):
        return x.to_dict()
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    return str(x)


def render(doc, fmt: str) -> str:
    if fmt == "text":
        if isinstance(doc, dict) and "suites" in doc:
            lines = [f"{r['criterion']:>2} {r['name']:<24} {'PASS' if r['passed'] else 'FAIL'}" for r in doc["suites"]]
            return "\n".join(lines)
        if isinstance(doc, dict):
            return "\n".join(f"{k}: {json.dumps(v, default=_jsonable)}" for k, v in sorted(doc.items()))
    return json.dumps(doc, sort_keys=True, default=_jsonable)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config.load(args.config, output=args.format)
        doc = args.fn(args, cfg)
    except (UsageError, ConfigError) as exc:
        print(json.dumps({"error": str(exc), "usage": True}), file=sys.stderr)
        return 2
    except PadelicError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True))
        return 1
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        # bad numeric input that slipped past argument parsing
        print(json.dumps({"error": str(exc), "precondition": "well-formed input", "valuation": None}))
        return 1
    print(render(doc, cfg.output))
    if args.command == "verify" and not doc["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
