"""Random expressions and intervals shared by property and acceptance tests."""

import math

from dualcalc.dual_algebra import DualReal, norm
from dualcalc.dual_function import eval_lifted, symbolic_derivative
from dualcalc.dual_order import make_interval
from dualcalc.errors import DualCalcError
from dualcalc.expr import Add, Call, Const, Div, Mul, Neg, Pow, Sub, X, parse

CORPUS = ["x", "x^2", "x^3", "sin(x)", "exp(x)", "x*sin(x)"]


def random_expr(rng, depth, coef=2.0, dual_consts=False):
    """Uniformly shaped random tree of at most ``depth`` operator levels."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return X
        re = round(float(rng.uniform(-coef, coef)), 3)
        ze = round(float(rng.uniform(-coef, coef)), 3) if dual_consts else 0.0
        return Const(DualReal(re, ze))
    kind = rng.integers(0, 9)
    sub = lambda: random_expr(rng, depth - 1, coef, dual_consts)  # noqa: E731
    if kind == 0:
        return Add(sub(), sub())
    if kind == 1:
        return Sub(sub(), sub())
    if kind == 2:
        return Mul(sub(), sub())
    if kind == 3:
        return Div(sub(), sub())
    if kind == 4:
        return Pow(sub(), int(rng.integers(2, 4)))
    if kind == 5:
        return Neg(sub())
    return Call(("sin", "cos", "exp", "log")[int(rng.integers(0, 4))], sub())


def derivatives(f, n):
    out = [f]
    for _ in range(n):
        out.append(symbolic_derivative(out[-1]))
    return out


def tame(f, points, bound=50.0, order=3):
    """True if f and its first ``order`` derivatives are defined and bounded
    (in norm) by ``bound`` at every point."""
    try:
        for g in derivatives(f, order):
            for p in points:
                if norm(eval_lifted(g, p)) > bound:
                    return False
    except (DualCalcError, ArithmeticError, ValueError):
        return False
    return True


def random_point(rng, radius=1.0):
    """Uniform point with norm at most ``radius``."""
    while True:
        r = rng.uniform(-radius / math.sqrt(2), radius / math.sqrt(2))
        z = rng.uniform(-radius, radius)
        if 2 * r * r + z * z <= radius * radius:
            return DualReal(r, z)


def tame_exprs(rng, count, depth, points_per=5, bound=50.0, order=3, **kw):
    """``count`` random expressions, each with ``points_per`` random points
    where it is tame."""
    out = []
    while len(out) < count:
        f = random_expr(rng, depth, **kw)
        pts = [random_point(rng) for _ in range(points_per)]
        if tame(f, pts, bound, order):
            out.append((f, pts))
    return out


def random_interval(rng, theta, max_len=2.0, degenerate=False):
    """Type-theta interval with corner a in [-1, 1]^2 and norm(b - a) <= max_len."""
    s = 1.0 if theta == 1 else -1.0
    a = DualReal(rng.uniform(-1, 1), rng.uniform(-1, 1))
    while True:
        dr = 0.0 if degenerate else rng.uniform(0, max_len / math.sqrt(2))
        dz = s * rng.uniform(0, max_len)
        if degenerate and dz == 0:
            continue
        d = DualReal(dr, dz)
        if 0 < norm(d) <= max_len:
            return make_interval(a, a + d, theta)


def corpus_exprs():
    return [parse(s) for s in CORPUS]
