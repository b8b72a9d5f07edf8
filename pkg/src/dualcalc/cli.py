"""Command-line front end.

Exit codes: 0 success/pass, 1 verification failed, 2 usage error,
3 domain or numeric error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .differentiation import (
    DEFAULT_STEP,
    derivative_at,
    partials,
    type_theta_derivative_at,
    verify_limit_definition,
)
from .dual_algebra import DualReal, format_dual, parse_dual
from .dual_function import components_of, eval_lifted
from .dual_order import classify_pair, describe, make_interval
from .errors import DualCalcError, InvalidIntervalError, ParseError
from .expr import parse, to_text
from .integration import (
    DEFAULT_DEPTH,
    DEFAULT_GRID,
    estimate_integral,
    verify_ftc_part1,
    verify_ftc_part2,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dual_json(x: DualReal) -> dict:
    return {"literal": format_dual(x), "re": x.re, "ze": x.ze}


def _literal(text: str, flag: str) -> DualReal:
    try:
        return parse_dual(text)
    except ParseError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _expr(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"expression: {exc}") from exc


def _interval(args):
    a = _literal(args.from_, "--from")
    b = _literal(args.to, "--to")
    try:
        return make_interval(a, b, args.type)
    except InvalidIntervalError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands; each returns (exit_code, text, payload)


def cmd_eval(args):
    f = _expr(args.expression)
    x = _literal(args.at, "--at")
    y = eval_lifted(f, x)
    payload = {
        "inputs": {"expression": to_text(f), "at": _dual_json(x)},
        "result": {"value": _dual_json(y)},
    }
    return EXIT_OK, format_dual(y), payload


def cmd_diff(args):
    f = _expr(args.expression)
    c = _literal(args.at, "--at")
    if args.type is None:
        rep = derivative_at(f, c, args.tol, args.h)
    else:
        rep = type_theta_derivative_at(
            f, c, args.type, args.tol, args.h,
            limit_eps=args.limit_eps, delta=args.delta,
            samples=args.samples, seed=args.seed,
        )
    result = {
        "differentiable": rep.differentiable,
        "derivative": _dual_json(rep.derivative) if rep.derivative else None,
        "method": rep.method.value,
        "cr_residuals": list(rep.cr_residuals),
    }
    if rep.limit_check is not None:
        result["limit_worst_ratio"] = rep.limit_check.worst_ratio
    payload = {
        "inputs": {"expression": to_text(f), "at": _dual_json(c), "type": args.type},
        "result": result,
        "provenance": {"h": args.h, "seed": args.seed, "samples": args.samples},
    }
    if not rep.differentiable:
        return EXIT_FAIL, "not differentiable", payload
    return EXIT_OK, format_dual(rep.derivative), payload


def cmd_check_cr(args):
    f = _expr(args.expression)
    c = _literal(args.at, "--at")
    rep = derivative_at(components_of(f), c, args.tol, args.h)
    payload = {
        "inputs": {"expression": to_text(f), "at": _dual_json(c)},
        "result": {
            "holds": rep.differentiable,
            "cr_residuals": list(rep.cr_residuals),
            "partials": partials(components_of(f), c, args.h),
            "tol": rep.tol,
        },
        "provenance": {"h": args.h},
    }
    r1, r2 = rep.cr_residuals
    text = f"|u_x2| = {r1:.3g}, |u_x1 - v_x2| = {r2:.3g}: " + (
        "holds" if rep.differentiable else "fails"
    )
    return (EXIT_OK if rep.differentiable else EXIT_FAIL), text, payload


def cmd_limit_check(args):
    f = _expr(args.expression)
    c = _literal(args.at, "--at")
    L = _literal(args.derivative, "--derivative")
    chk = verify_limit_definition(
        f, c, L, args.eps, args.delta, args.samples, args.type, args.seed
    )
    payload = {
        "inputs": {
            "expression": to_text(f), "at": _dual_json(c), "derivative": _dual_json(L),
            "eps": args.eps, "delta": args.delta, "type": args.type,
        },
        "result": {"passed": chk.passed, "worst_ratio": chk.worst_ratio},
        "provenance": {"samples": args.samples, "seed": args.seed},
    }
    text = f"worst ratio {chk.worst_ratio:.6g}: " + ("pass" if chk.passed else "fail")
    return (EXIT_OK if chk.passed else EXIT_FAIL), text, payload


def cmd_compare(args):
    x = _literal(args.x, "x")
    y = _literal(args.y, "y")
    rel = classify_pair(x, y)
    names = [flag.name for flag in type(rel) if flag in rel and flag.value]
    payload = {
        "inputs": {"x": _dual_json(x), "y": _dual_json(y)},
        "result": {"relations": names, "text": describe(rel)},
    }
    return EXIT_OK, describe(rel), payload


def cmd_integrate(args):
    f = _expr(args.expression)
    I = _interval(args)
    est = estimate_integral(f, I, None, args.tol, args.depth, args.grid, strict=False)
    mid = est.midpoint
    payload = {
        "inputs": {
            "expression": to_text(f), "from": _dual_json(I.a), "to": _dual_json(I.b),
            "type": args.type, "tol": args.tol,
        },
        "result": {
            "value": _dual_json(mid),
            "lower": _dual_json(est.lower_integral),
            "upper": _dual_json(est.upper_integral),
            "gap_norm": est.gap_norm,
            "converged": est.converged,
            "monotone": est.monotone,
        },
        "provenance": {
            "depth": est.depth, "cells_sampled": est.cells_sampled,
            "grid": args.grid, "seed": args.seed,
        },
    }
    text = f"{format_dual(mid)} ± {est.gap_norm:.3g}"
    if not est.converged:
        text += f" (gap above tol at depth {est.depth})"
    return EXIT_OK, text, payload


def cmd_ftc_check(args):
    f = _expr(args.expression)
    I = _interval(args)
    part2 = verify_ftc_part2(f, I, None, args.tol, args.depth, args.grid)
    result = {
        "part2": {
            "passed": part2.passed,
            "residual": part2.residual,
            "integral": _dual_json(part2.details["integral"]),
            "exact": _dual_json(part2.details["exact"]),
            "gap_norm": part2.details["gap"],
        }
    }
    lines = [
        f"int f' = {format_dual(part2.details['integral'])}, "
        f"f(b) - f(a) = {format_dual(part2.details['exact'])}: "
        + ("pass" if part2.passed else "fail")
    ]
    passed = part2.passed
    if args.at is not None:
        c = _literal(args.at, "--at")
        part1 = verify_ftc_part1(
            f, I, None, c, args.h, args.quotient_tol, args.samples, args.seed
        )
        result["part1"] = {
            "passed": part1.passed, "worst_error": part1.residual, "at": _dual_json(c),
            "skipped": part1.details["skipped"],
        }
        lines.append(
            f"quotient error at {format_dual(c)} = {part1.residual:.3g}: "
            + ("pass" if part1.passed else "fail")
        )
        passed = passed and part1.passed
    payload = {
        "inputs": {
            "expression": to_text(f), "from": _dual_json(I.a), "to": _dual_json(I.b),
            "type": args.type, "tol": args.tol,
        },
        "result": result,
        "provenance": {
            "depth": part2.details["depth"], "grid": args.grid, "seed": args.seed,
        },
    }
    return (EXIT_OK if passed else EXIT_FAIL), "\n".join(lines), payload


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="sampler seed")

    p = argparse.ArgumentParser(prog="dualcalc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def typed(sp, default):
        sp.add_argument("--type", type=int, choices=(1, 2), default=default,
                        help="order type theta")

    s = sub.add_parser("eval", parents=[common], help="evaluate at a dual point")
    s.add_argument("expression")
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("diff", parents=[common], help="derivative at a point")
    s.add_argument("expression")
    s.add_argument("--at", required=True)
    typed(s, None)
    s.add_argument("--h", type=float, default=DEFAULT_STEP)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--limit-eps", type=float, default=1e-3)
    s.add_argument("--delta", type=float, default=1e-4)
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("check-cr", parents=[common],
                       help="finite-difference Cauchy-Riemann check")
    s.add_argument("expression")
    s.add_argument("--at", required=True)
    s.add_argument("--h", type=float, default=DEFAULT_STEP)
    s.add_argument("--tol", type=float, default=None)
    s.set_defaults(func=cmd_check_cr)

    s = sub.add_parser("limit-check", parents=[common],
                       help="sample the epsilon-delta definition")
    s.add_argument("expression")
    s.add_argument("--at", required=True)
    s.add_argument("--derivative", required=True)
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--delta", type=float, default=1e-4)
    s.add_argument("--samples", type=int, default=1000)
    typed(s, None)
    s.set_defaults(func=cmd_limit_check)

    s = sub.add_parser("compare", parents=[common], help="order relations of x to y")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(func=cmd_compare)

    for name, func, tol, about in (
        ("integrate", cmd_integrate, 1e-3, "type-theta Darboux integral over [from, to]"),
        ("ftc-check", cmd_ftc_check, 1e-3, "check both halves of the fundamental theorem"),
    ):
        s = sub.add_parser(name, parents=[common], help=about)
        s.add_argument("expression")
        s.add_argument("--from", dest="from_", required=True)
        s.add_argument("--to", required=True)
        typed(s, 1)
        s.add_argument("--tol", type=float, default=tol)
        s.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        s.add_argument("--grid", type=int, default=DEFAULT_GRID)
        s.set_defaults(func=func)
    s.add_argument("--at", default=None, help="interior point for the quotient check")
    s.add_argument("--h", type=float, default=1e-3)
    s.add_argument("--quotient-tol", type=float, default=1e-2)
    s.add_argument("--samples", type=int, default=16)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, text, payload = args.func(args)
    except UsageError as exc:
        return _fail(args, EXIT_USAGE, "usage", str(exc), stdout, stderr)
    except DualCalcError as exc:
        return _fail(args, EXIT_ERROR, exc.code, str(exc), stdout, stderr)
    except (ArithmeticError, ValueError) as exc:
        return _fail(args, EXIT_ERROR, "numeric", str(exc), stdout, stderr)
    if args.json:
        payload = {"command": args.command, **payload, "exit_code": code}
        stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stdout.write(text + "\n")
    return code


def _fail(args, code, kind, message, stdout, stderr):
    if args.json:
        payload = {"command": args.command, "error": {"code": kind, "message": message},
                   "exit_code": code}
        stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stderr.write(f"dualcalc: {kind}: {message}\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
