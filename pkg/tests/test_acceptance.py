"""Acceptance suite: ten criteria, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the summary
section) or ``python tests/test_acceptance.py``.
"""

import io
import json
import math
import time

import numpy as np

from dualcalc.cli import run
from dualcalc.differentiation import derivative_at, verify_limit_definition
from dualcalc.dual_algebra import DualReal, norm, scale
from dualcalc.dual_function import ComponentPair, components_of
from dualcalc.dual_order import (
    OrderKind,
    Relation,
    classify_pair,
    greater,
    greater_equal,
    make_interval,
)
from dualcalc.errors import DualCalcError
from dualcalc.expr import parse
from dualcalc.integration import (
    Partition,
    chain_holds,
    darboux_sums,
    estimate_integral,
    refinement_chain,
    verify_additivity,
    verify_ftc_part1,
    verify_ftc_part2,
    verify_linearity,
    verify_monotonicity,
)

from acceptance_log import record
from helpers import (
    CORPUS,
    random_expr,
    random_interval,
    tame,
    tame_exprs,
)

D = DualReal
ZERO = D(0.0, 0.0)
T1, T2 = OrderKind.TYPE1, OrderKind.TYPE2


def _check(number, title, budget, body):
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    within = dt < budget
    record(number, title, ok and within, dt, detail + ("" if within else f"; over {budget} s budget"))
    assert ok, detail
    assert within, f"took {dt:.2f} s, budget {budget} s"


# 1 -------------------------------------------------------------------------

def norm_axioms():
    rng = np.random.default_rng(101)
    comps = rng.uniform(-10, 10, size=(10_000, 5))
    bad = 0
    for x1, x2, y1, y2, a in comps:
        x, y = D(x1, x2), D(y1, y2)
        nx, ny = norm(x), norm(y)
        bad += not (nx > 0 or (nx == 0 and x == ZERO))
        bad += abs(norm(scale(a, x)) - abs(a) * nx) > 1e-12
        bad += norm(x + y) > nx + ny + 1e-12
        bad += norm(x * y) > nx * ny + 1e-12
    bad += norm(ZERO) != 0
    return bad == 0, f"{bad} violations over 10000 pairs"


def test_criterion_01_norm_axioms():
    _check(1, "norm axioms", 1.0, norm_axioms)


# 2 -------------------------------------------------------------------------

def order_laws():
    rng = np.random.default_rng(202)
    # half the triples on an eighth-integer grid (exact sums, frequent ties)
    grid = rng.integers(-80, 81, size=(5000, 6)) / 8.0
    cont = rng.uniform(-10, 10, size=(5000, 6))
    bad = 0
    for row in np.vstack([grid, cont]):
        x, y, z = D(row[0], row[1]), D(row[2], row[3]), D(row[4], row[5])
        bad += classify_pair(x, y) == Relation.NONE
        for th in (T1, T2):
            xy, yz = greater(x, y, th), greater(y, z, th)
            if xy and yz:
                bad += not greater(x, z, th)
            if xy:
                bad += not greater(x + z, y + z, th)
                bad += not greater(-y, -x, th)
            if greater(x, ZERO, th) and greater(y, ZERO, th):
                bad += not greater_equal(x * y, ZERO, th)
    return bad == 0, f"{bad} violations over 10000 triples"


def test_criterion_02_order_laws():
    _check(2, "order laws", 1.0, order_laws)


# 3 -------------------------------------------------------------------------

NOT_CR = ComponentPair(lambda x1, x2: x2, lambda x1, x2: 0.0 * x1)


def cr_characterization():
    rng = np.random.default_rng(303)
    worst_res, worst_gap, rejected, total = 0.0, 0.0, 0, 0
    ok = True
    for f, pts in tame_exprs(rng, 200, 4, points_per=5):
        pair = components_of(f)
        for c in pts:
            total += 1
            fd = derivative_at(pair, c, tol=1e-6, h=1e-5)
            exact = derivative_at(f, c).derivative
            worst_res = max(worst_res, *fd.cr_residuals)
            if not fd.differentiable:
                ok = False
                continue
            gap = norm(fd.derivative - exact)
            worst_gap = max(worst_gap, gap / max(1e-6, 1e-4 * norm(exact)))
            ok &= gap <= max(1e-6, 1e-4 * norm(exact))
            rejected += not derivative_at(NOT_CR, c).differentiable
    ok &= worst_res <= 1e-6 and rejected == total
    return ok, (
        f"{total} points, worst residual {worst_res:.2e}, worst derivative gap "
        f"{worst_gap:.1e} of tolerance, witness rejected at {rejected}/{total}"
    )


def test_criterion_03_cauchy_riemann():
    _check(3, "Cauchy-Riemann characterization", 5.0, cr_characterization)


# 4 -------------------------------------------------------------------------

def limit_definition():
    rng = np.random.default_rng(404)
    # depth <= 3, coefficients in [-2, 2]; curvature bounded so that the
    # Taylor remainder ratio at delta = 1e-4 sits below eps = 1e-3
    cases = tame_exprs(rng, 50, 3, points_per=1, bound=10.0, order=3)
    passed = failed = 0
    worst_good, best_bad = 0.0, math.inf
    for seed, (f, (c,)) in enumerate(cases):
        L = derivative_at(f, c).derivative
        good = verify_limit_definition(f, c, L, 1e-3, 1e-4, 1000, seed=seed)
        bad = verify_limit_definition(f, c, L + D(0.1, 0), 1e-3, 1e-4, 1000, seed=seed)
        passed += good.passed
        failed += not bad.passed
        worst_good = max(worst_good, good.worst_ratio)
        best_bad = min(best_bad, bad.worst_ratio)
    ok = passed == 50 and failed == 50
    return ok, (
        f"exact derivative passes {passed}/50 (worst ratio {worst_good:.1e}), "
        f"perturbed fails {failed}/50 (smallest ratio {best_bad:.3f})"
    )


def test_criterion_04_limit_definition():
    _check(4, "limit definition", 5.0, limit_definition)


# 5 -------------------------------------------------------------------------

def darboux_structure():
    rng = np.random.default_rng(505)
    done = chain_bad = order_bad = 0
    while done < 100:
        theta = (T1, T2)[done % 2]
        I = random_interval(rng, theta)
        f = random_expr(rng, 3)
        rect = I.rectangle
        probes = [D(r, z) for r in np.linspace(rect.re_lo, rect.re_hi, 5)
                  for z in np.linspace(rect.ze_lo, rect.ze_hi, 5)]
        if not tame(f, probes, bound=1e3, order=1):
            continue
        try:
            levels = refinement_chain(f, I, 6)
        except (DualCalcError, ArithmeticError):
            continue
        chain_bad += sum(not chain_holds(p, q) for p, q in zip(levels, levels[1:]))
        est = estimate_integral(f, I, tol=1e-3, max_depth=6, strict=False)
        order_bad += not greater_equal(est.upper_integral, est.lower_integral, theta, 1e-12)
        done += 1
    hand = darboux_sums(parse("x"), Partition(make_interval(ZERO, D(1), T1), [0, 0.5, 1]))
    hand_ok = hand.lower == D(0.25, 0) and hand.upper == D(0.75, 0)
    ok = chain_bad == 0 and order_bad == 0 and hand_ok
    return ok, (
        f"{chain_bad} chain violations over 100 x 6 refinements, "
        f"{order_bad} lower > upper, hand case L={hand.lower} U={hand.upper}"
    )


def test_criterion_05_darboux_structure():
    _check(5, "Darboux structure", 10.0, darboux_structure)


# 6 -------------------------------------------------------------------------

def unit_integral():
    rng = np.random.default_rng(606)
    bad = 0
    for i in range(100):
        for theta in (T1, T2):
            I = random_interval(rng, theta, degenerate=(i % 10 == 0))
            est = estimate_integral(parse("1"), I, tol=0.0, max_depth=0, strict=False)
            bad += not (est.depth == 0 and est.lower_integral == est.upper_integral == I.b - I.a)
    return bad == 0, f"{bad} of 200 intervals differ from b - a"


def test_criterion_06_unit_integral():
    _check(6, "integral of 1 is b - a", 1.0, unit_integral)


# 7 -------------------------------------------------------------------------

def ftc_part2():
    rng = np.random.default_rng(707)
    worst, bad, runs = 0.0, 0, 0
    for text in CORPUS:
        f = parse(text)
        for theta in (T1, T2):
            for _ in range(20):
                I = random_interval(rng, theta, max_len=2.0)
                r = verify_ftc_part2(f, I, tol=1e-3, max_depth=12)
                worst = max(worst, r.residual)
                bad += not r.passed
                runs += 1
    exact = verify_ftc_part2(parse("x^2"), make_interval(ZERO, D(1, 1), T1), tol=1e-4)
    exact_ok = exact.passed and norm(exact.details["integral"] - D(1, 2)) <= 1e-4
    return bad == 0 and exact_ok, (
        f"{bad} of {runs} runs over 1e-3 (worst {worst:.1e}); "
        f"int 2x over [0, 1+eps] = {exact.details['integral']}"
    )


def test_criterion_07_ftc_part2():
    _check(7, "fundamental theorem, part 2", 30.0, ftc_part2)


# 8 -------------------------------------------------------------------------

FTC1_INTERVALS = {
    T1: (make_interval(ZERO, D(2, 1), T1), [D(0.5, 0.25), D(1, 0.5), D(1.5, 0.75)]),
    T2: (make_interval(D(0, 1), D(2, 0), T2), [D(0.5, 0.75), D(1, 0.5), D(1.5, 0.25)]),
}


def ftc_part1():
    bad, worst = [], {1e-2: 0.0, 1e-3: 0.0}
    for text in ("1", "x", "sin(x)"):
        f = parse(text)
        for theta, (I, points) in FTC1_INTERVALS.items():
            for c in points:
                err = {}
                for h, tol in ((1e-2, 5e-2), (1e-3, 5e-3)):
                    r = verify_ftc_part1(f, I, None, c, h, tol, samples=16, seed=8)
                    err[h] = r.residual
                    worst[h] = max(worst[h], r.residual)
                    if not r.passed:
                        bad.append(f"{text} at {c} h={h}: {r.residual:.2e}")
                if err[1e-3] > 0.5 * err[1e-2] + 1e-12:
                    bad.append(f"{text} at {c}: no decay {err[1e-2]:.2e} -> {err[1e-3]:.2e}")
    detail = f"worst error {worst[1e-2]:.2e} at h=1e-2, {worst[1e-3]:.2e} at h=1e-3"
    return not bad, detail + ("" if not bad else "; " + "; ".join(bad))


def test_criterion_08_ftc_part1():
    _check(8, "fundamental theorem, part 1", 10.0, ftc_part1)


# 9 -------------------------------------------------------------------------

ALGEBRA_INTERVALS = {
    T1: (D(-0.5, -0.25), D(0.25, 0.5), D(1, 0.75)),
    T2: (D(-0.5, 0.75), D(0.25, 0.5), D(1, -0.25)),
}
BUMP = {T1: "1+1eps", T2: "1-1eps"}


def algebra_laws():
    rng = np.random.default_rng(909)
    fails, worst = [], 0.0
    for i, text in enumerate(CORPUS):
        f = parse(text)
        g = parse(CORPUS[(i + 1) % len(CORPUS)])
        for theta, (a, c, b) in ALGEBRA_INTERVALS.items():
            I = make_interval(a, b, theta)
            k = D(*rng.uniform(-2, 2, 2))
            checks = {
                "linearity": verify_linearity(f, g, k, I, tol=1e-4),
                "additivity": verify_additivity(f, a, c, b, theta, tol=1e-4),
                "monotonicity": verify_monotonicity(parse(f"{text}+{BUMP[theta]}"), f, I, tol=1e-4),
                "equality": verify_monotonicity(f, f, I, tol=1e-4),
            }
            for name, r in checks.items():
                worst = max(worst, r.residual)
                if not r.passed:
                    fails.append(f"{name} {text} type {int(theta)}: {r.residual:.2e}")
    return not fails, f"{len(fails)} violations, worst residual {worst:.1e}" + (
        "; " + "; ".join(fails) if fails else ""
    )


def test_criterion_09_integral_algebra():
    _check(9, "linearity, additivity, monotonicity", 10.0, algebra_laws)


# 10 ------------------------------------------------------------------------

CLI_CASES = [
    (["eval", "x^2", "--at", "1+1eps"], "1+2eps"),
    (["integrate", "x", "--from", "0", "--to", "1+1eps", "--type", "1", "--tol", "1e-4"], "0.5+1eps"),
    (["compare", "1", "1+1eps"], "less (type 1); greater (type 2)"),
]


def _cli_json(argv):
    out = io.StringIO()
    code = run(argv + ["--json", "--seed", "0"], out, io.StringIO())
    return code, out.getvalue()


def cli_contract():
    problems = []
    for argv, expected in CLI_CASES:
        code, first = _cli_json(argv)
        _, second = _cli_json(argv)
        doc = json.loads(first)
        result = doc["result"]
        got = result["text"] if argv[0] == "compare" else result["value"]["literal"]
        if code != 0 or got != expected:
            problems.append(f"{argv[0]} gave {got!r} (exit {code})")
        if first != second:
            problems.append(f"{argv[0]} output not byte-stable")
    return not problems, "all three examples match and are byte-stable" if not problems else "; ".join(problems)


def test_criterion_10_cli_contract():
    _check(10, "CLI contract", 1.0, cli_contract)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
