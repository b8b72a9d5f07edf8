"""Type-theta Darboux integration over dual intervals.

A type-theta interval is the rectangle ``[Re a, Re b] x [Ze range]``; a
partition is a theta-increasing chain of points from a to b.  Each cell
contributes ``(s_Re + s_Ze eps) * dx`` where dx is the dual cell length and
the multiplication is full dual multiplication.  For theta = 1 the upper sum
takes (sup f_Re, sup f_Ze); for theta = 2 it takes (sup f_Re, inf f_Ze), and
the lower sums swap accordingly.

Cell suprema/infima are estimated by sampling a ``grid x grid`` lattice with
corners.  When a refinement chain is built, each coarse cell's extrema are
tightened with the extrema found in its sub-cells (a sup over a union is the
max of the sups), which keeps the refinement inequalities exact under
sampling.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dual_algebra import DualReal, inverse, norm
from .dual_function import (
    DualFunction,
    add_functions,
    as_function,
    eval_lifted,
    evaluate,
    evaluate_components,
    scale_function,
    symbolic_derivative,
)
from .dual_order import (
    OrderKind,
    TypedInterval,
    greater,
    greater_equal,
    less,
    make_interval,
)
from .errors import (
    InvalidEpsilon,
    InvalidIntervalError,
    InvalidPartitionError,
    MaxDepthExceeded,
    PreconditionFailed,
)

log = logging.getLogger(__name__)

DEFAULT_GRID = 8
DEFAULT_DEPTH = 12
CHAIN_SLACK = 1e-12
_MAX_LATTICE = 1 << 21  # points evaluated per batch


def _interval(I: TypedInterval, theta) -> TypedInterval:
    if theta is None or OrderKind.of(theta) is I.theta:
        return I
    return make_interval(I.a, I.b, theta)


# ---------------------------------------------------------------------------
# partitions


class Partition:
    """Chain ``a = x0 <_theta x1 <_theta ... <_theta xn = b`` inside I.

    Points are held as two float arrays; the chain condition and interval
    membership are checked on construction.
    """

    __slots__ = ("interval", "re", "ze")

    def __init__(self, interval: TypedInterval, re, ze=None):
        if ze is None:
            pts = [DualReal.coerce(p) for p in re]
            re = [p.re for p in pts]
            ze = [p.ze for p in pts]
        self.interval = interval
        self.re = np.array(re, dtype=float)
        self.ze = np.array(ze, dtype=float)
        self.re.setflags(write=False)
        self.ze.setflags(write=False)
        self._validate()

    def _validate(self):
        I, re, ze = self.interval, self.re, self.ze
        if re.ndim != 1 or re.shape != ze.shape or len(re) < 2:
            raise InvalidPartitionError("a partition needs at least two points")
        if DualReal(re[0], ze[0]) != I.a or DualReal(re[-1], ze[-1]) != I.b:
            raise InvalidPartitionError("partition must start at a and end at b")
        s = 1.0 if I.theta is OrderKind.TYPE1 else -1.0
        r0, r1 = re[:-1], re[1:]
        z0, z1 = s * ze[:-1], s * ze[1:]
        ok = ((r1 > r0) & (z1 >= z0)) | ((r1 == r0) & (z1 > z0))
        if not ok.all():
            i = int(np.argmin(ok)) + 1
            raise InvalidPartitionError(f"chain condition fails between points {i - 1} and {i}")
        rect = I.rectangle
        inside = (
            (re >= rect.re_lo) & (re <= rect.re_hi) & (ze >= rect.ze_lo) & (ze <= rect.ze_hi)
        )
        if not inside.all():
            raise InvalidPartitionError("partition point outside the interval")

    @property
    def theta(self) -> OrderKind:
        return self.interval.theta

    @property
    def points(self) -> tuple:
        return tuple(DualReal(r, z) for r, z in zip(self.re, self.ze))

    @property
    def n(self) -> int:
        """Number of cells."""
        return len(self.re) - 1

    def lengths(self):
        """Dual cell lengths as arrays (dx_Re, dx_Ze)."""
        return np.diff(self.re), np.diff(self.ze)

    def issubset(self, other: Partition) -> bool:
        mine = set(zip(self.re.tolist(), self.ze.tolist()))
        return mine <= set(zip(other.re.tolist(), other.ze.tolist()))

    def __len__(self):
        return len(self.re)

    def __repr__(self):
        return f"Partition(theta={int(self.theta)}, points={len(self)})"


def uniform_partition(I: TypedInterval, n: int) -> Partition:
    """Points ``a + (i/n)(b - a)`` for i = 0..n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = np.arange(n + 1) / n
    re = I.a.re + t * (I.b.re - I.a.re)
    ze = I.a.ze + t * (I.b.ze - I.a.ze)
    rect = I.rectangle
    re = np.clip(re, rect.re_lo, rect.re_hi)
    ze = np.clip(ze, rect.ze_lo, rect.ze_hi)
    re[0], ze[0] = I.a.re, I.a.ze
    re[-1], ze[-1] = I.b.re, I.b.ze
    return Partition(I, re, ze)


def refine(P: Partition) -> Partition:
    """Insert the midpoint of every cell; sub-cells 2i and 2i+1 halve cell i."""
    re = np.empty(2 * len(P.re) - 1)
    ze = np.empty_like(re)
    re[0::2], ze[0::2] = P.re, P.ze
    re[1::2] = 0.5 * (P.re[:-1] + P.re[1:])
    ze[1::2] = 0.5 * (P.ze[:-1] + P.ze[1:])
    return Partition(P.interval, re, ze)


# ---------------------------------------------------------------------------
# Darboux sums


@dataclass(frozen=True)
class CellExtrema:
    """Per-cell lattice extrema of both components."""

    u_min: np.ndarray
    u_max: np.ndarray
    v_min: np.ndarray
    v_max: np.ndarray

    def tightened(self, finer: CellExtrema) -> CellExtrema:
        """Fold in the extrema of a midpoint refinement (two sub-cells per cell)."""
        return CellExtrema(
            np.minimum(self.u_min, finer.u_min.reshape(-1, 2).min(axis=1)),
            np.maximum(self.u_max, finer.u_max.reshape(-1, 2).max(axis=1)),
            np.minimum(self.v_min, finer.v_min.reshape(-1, 2).min(axis=1)),
            np.maximum(self.v_max, finer.v_max.reshape(-1, 2).max(axis=1)),
        )


def cell_extrema(f: DualFunction, P: Partition, grid: int = DEFAULT_GRID) -> CellExtrema:
    if grid < 2:
        raise ValueError("grid must be at least 2 (corners are always sampled)")
    lo1 = np.minimum(P.re[:-1], P.re[1:])
    hi1 = np.maximum(P.re[:-1], P.re[1:])
    lo2 = np.minimum(P.ze[:-1], P.ze[1:])
    hi2 = np.maximum(P.ze[:-1], P.ze[1:])
    s = np.linspace(0.0, 1.0, grid)
    out = {k: np.empty(P.n) for k in ("u_min", "u_max", "v_min", "v_max")}
    step = max(1, _MAX_LATTICE // (grid * grid))
    for start in range(0, P.n, step):
        sl = slice(start, min(P.n, start + step))
        a1 = lo1[sl, None] + s[None, :] * (hi1 - lo1)[sl, None]
        a2 = lo2[sl, None] + s[None, :] * (hi2 - lo2)[sl, None]
        a1[:, -1] = hi1[sl]
        a2[:, -1] = hi2[sl]
        x1 = np.broadcast_to(a1[:, :, None], (a1.shape[0], grid, grid))
        x2 = np.broadcast_to(a2[:, None, :], (a1.shape[0], grid, grid))
        u, v = evaluate_components(f, x1, x2)
        u = u.reshape(len(a1), -1)
        v = v.reshape(len(a1), -1)
        out["u_min"][sl] = u.min(axis=1)
        out["u_max"][sl] = u.max(axis=1)
        out["v_min"][sl] = v.min(axis=1)
        out["v_max"][sl] = v.max(axis=1)
    return CellExtrema(**out)


@dataclass(frozen=True)
class DarbouxSums:
    lower: DualReal
    upper: DualReal
    partition: Partition = field(repr=False)
    extrema: CellExtrema = field(repr=False)

    @property
    def gap(self) -> DualReal:
        return self.upper - self.lower

    @property
    def per_cell(self) -> list:
        """[(rectangle (re_lo, re_hi, ze_lo, ze_hi), (inf u, sup u, inf v, sup v)), ...]"""
        P, e = self.partition, self.extrema
        cells = []
        for i in range(P.n):
            rect = (
                min(P.re[i], P.re[i + 1]),
                max(P.re[i], P.re[i + 1]),
                min(P.ze[i], P.ze[i + 1]),
                max(P.ze[i], P.ze[i + 1]),
            )
            cells.append((rect, (e.u_min[i], e.u_max[i], e.v_min[i], e.v_max[i])))
        return cells


def _dual_dot(cr, cz, dr, dz) -> DualReal:
    # sum_i (cr_i + cz_i eps)(dr_i + dz_i eps)
    re = math.fsum((cr * dr).tolist())
    ze = math.fsum((cr * dz).tolist() + (cz * dr).tolist())
    return DualReal(re, ze)


def assemble(P: Partition, e: CellExtrema) -> DarbouxSums:
    dr, dz = P.lengths()
    if P.theta is OrderKind.TYPE1:
        upper = _dual_dot(e.u_max, e.v_max, dr, dz)
        lower = _dual_dot(e.u_min, e.v_min, dr, dz)
    else:
        upper = _dual_dot(e.u_max, e.v_min, dr, dz)
        lower = _dual_dot(e.u_min, e.v_max, dr, dz)
    return DarbouxSums(lower, upper, P, e)


def darboux_sums(f: DualFunction, P: Partition, grid: int = DEFAULT_GRID) -> DarbouxSums:
    """Lower and upper type-theta sums of f over P (theta from P's interval)."""
    return assemble(P, cell_extrema(as_function(f), P, grid))


def chain_holds(coarse: DarbouxSums, fine: DarbouxSums, slack: float = CHAIN_SLACK) -> bool:
    """``L(P) <= L(P*) <= U(P*) <= U(P)`` in the partition's order, each
    comparison relaxed by ``slack`` per component."""
    th = coarse.partition.theta
    return (
        greater_equal(fine.lower, coarse.lower, th, slack)
        and greater_equal(fine.upper, fine.lower, th, slack)
        and greater_equal(coarse.upper, fine.upper, th, slack)
    )


class RefinementChain:
    """Darboux sums along P0 = {a, b}, P1 = refine(P0), ...

    ``levels[k]`` holds the sums of level k with extrema tightened by every
    finer level computed so far.
    """

    def __init__(self, f: DualFunction, I: TypedInterval, grid: int = DEFAULT_GRID):
        self.f = as_function(f)
        self.interval = I
        self.grid = grid
        self.partitions: list = []
        self._extrema: list = []
        self.levels: list = []
        self.cells_sampled = 0

    def extend(self) -> DarbouxSums:
        if self.partitions:
            P = refine(self.partitions[-1])
        else:
            P = uniform_partition(self.interval, 1)
        e = cell_extrema(self.f, P, self.grid)
        self.cells_sampled += P.n
        self.partitions.append(P)
        self._extrema.append(e)
        for k in range(len(self._extrema) - 2, -1, -1):
            self._extrema[k] = self._extrema[k].tightened(self._extrema[k + 1])
        self.levels = [assemble(Q, ex) for Q, ex in zip(self.partitions, self._extrema)]
        return self.levels[-1]

    def monotone(self, slack: float = CHAIN_SLACK) -> bool:
        return all(chain_holds(a, b, slack) for a, b in zip(self.levels, self.levels[1:]))


def refinement_chain(
    f: DualFunction, I: TypedInterval, depth: int, grid: int = DEFAULT_GRID
) -> list:
    chain = RefinementChain(f, I, grid)
    for _ in range(depth + 1):
        chain.extend()
    return chain.levels


# ---------------------------------------------------------------------------
# integral estimation


@dataclass(frozen=True)
class IntegralEstimate:
    lower_integral: DualReal
    upper_integral: DualReal
    value: Optional[DualReal]
    gap_norm: float
    depth: int
    cells_sampled: int
    tol: float
    monotone: bool = True

    @property
    def midpoint(self) -> DualReal:
        lo, hi = self.lower_integral, self.upper_integral
        return DualReal(0.5 * (lo.re + hi.re), 0.5 * (lo.ze + hi.ze))

    @property
    def converged(self) -> bool:
        return self.value is not None


def estimate_integral(
    f: DualFunction,
    I: TypedInterval,
    theta=None,
    tol: float = 1e-6,
    max_depth: int = DEFAULT_DEPTH,
    grid: int = DEFAULT_GRID,
    strict: bool = True,
) -> IntegralEstimate:
    """Refine from {a, b} until ``||U - L|| <= tol`` or ``max_depth`` is hit.

    With ``strict`` the latter raises MaxDepthExceeded (carrying the last
    estimate); otherwise the unconverged estimate is returned with
    ``value=None``.
    """
    if not tol >= 0:
        raise ValueError("tol must be non-negative")
    I = _interval(I, theta)
    chain = RefinementChain(f, I, grid)
    depth = 0
    while True:
        sums = chain.extend()
        gap = norm(sums.gap)
        if gap <= tol or depth >= max_depth:
            break
        depth += 1
    monotone = chain.monotone()
    if not monotone:
        log.warning("refinement inequalities violated; check the integrand")
    mid = DualReal(0.5 * (sums.lower.re + sums.upper.re), 0.5 * (sums.lower.ze + sums.upper.ze))
    est = IntegralEstimate(
        sums.lower,
        sums.upper,
        mid if gap <= tol else None,
        gap,
        depth,
        chain.cells_sampled,
        tol,
        monotone,
    )
    if est.value is None and strict:
        raise MaxDepthExceeded(
            f"gap {gap:.3g} above tol {tol:.3g} at depth {depth}", est
        )
    return est


def check_integrability(
    f: DualFunction,
    I: TypedInterval,
    theta,
    eps: DualReal,
    max_depth: int = DEFAULT_DEPTH,
    grid: int = DEFAULT_GRID,
) -> Optional[Partition]:
    """First refinement P with ``U(P) - L(P) <_theta eps``, or None."""
    I = _interval(I, theta)
    eps = DualReal.coerce(eps)
    if not greater(eps, DualReal(0.0, 0.0), I.theta) or eps.re * eps.ze == 0:
        raise InvalidEpsilon(
            f"eps must be type {int(I.theta)} positive with nonzero real and zero-divisor parts"
        )
    f = as_function(f)
    P = uniform_partition(I, 1)
    for depth in range(max_depth + 1):
        if depth:
            P = refine(P)
        if less(darboux_sums(f, P, grid).gap, eps, I.theta):
            return P
    return None


def probe_random_partitions(
    f: DualFunction,
    I: TypedInterval,
    reference: IntegralEstimate,
    n_cells: int = 64,
    trials: int = 16,
    grid: int = DEFAULT_GRID,
    seed=0,
    tol: float = 1e-9,
):
    """Search random theta-chains for a lower sum above (or upper sum below)
    the straight-chain estimate by more than tol.

    Returns a list of ``(kind, sums)`` for every chain that beats the
    reference; an empty list means no path effect was found.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    f = as_function(f)
    a, b, th = I.a, I.b, I.theta
    found = []
    for _ in range(trials):
        t1 = np.sort(rng.uniform(0.0, 1.0, n_cells - 1))
        t2 = np.sort(rng.uniform(0.0, 1.0, n_cells - 1))
        re = np.concatenate(([a.re], a.re + t1 * (b.re - a.re), [b.re]))
        ze = np.concatenate(([a.ze], a.ze + t2 * (b.ze - a.ze), [b.ze]))
        try:
            P = Partition(I, re, ze)
        except InvalidPartitionError:
            continue
        sums = darboux_sums(f, P, grid)
        if greater(sums.lower, reference.lower_integral, th) and norm(
            sums.lower - reference.lower_integral
        ) > tol:
            found.append(("lower", sums))
        if greater(reference.upper_integral, sums.upper, th) and norm(
            reference.upper_integral - sums.upper
        ) > tol:
            found.append(("upper", sums))
    return found


# ---------------------------------------------------------------------------
# algebraic laws and the fundamental theorem


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residual: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _integral(f, I, tol, max_depth, grid) -> IntegralEstimate:
    return estimate_integral(f, I, None, tol, max_depth, grid, strict=False)


def verify_linearity(
    f: DualFunction,
    g: DualFunction,
    k: DualReal,
    I: TypedInterval,
    theta=None,
    tol: float = 1e-4,
    max_depth: int = DEFAULT_DEPTH,
    grid: int = DEFAULT_GRID,
) -> CheckResult:
    """``int(f+g) = int f + int g`` and ``int kf = k int f``."""
    I = _interval(I, theta)
    f, g, k = as_function(f), as_function(g), DualReal.coerce(k)
    gap_tol = tol / 4
    If = _integral(f, I, gap_tol, max_depth, grid).midpoint
    Ig = _integral(g, I, gap_tol, max_depth, grid).midpoint
    Ifg = _integral(add_functions(f, g), I, gap_tol, max_depth, grid).midpoint
    Ikf = _integral(scale_function(k, f), I, gap_tol, max_depth, grid).midpoint
    r_sum = norm(Ifg - If - Ig)
    r_scale = norm(Ikf - k * If)
    ok = r_sum <= tol and r_scale <= tol * (1 + norm(k))
    return CheckResult(
        ok,
        max(r_sum, r_scale),
        tol,
        {"sum_residual": r_sum, "scale_residual": r_scale},
    )


def verify_additivity(
    f: DualFunction,
    a: DualReal,
    c: DualReal,
    b: DualReal,
    theta,
    tol: float = 1e-4,
    max_depth: int = DEFAULT_DEPTH,
    grid: int = DEFAULT_GRID,
) -> CheckResult:
    """``int_a^b = int_a^c + int_c^b`` for ``a <_theta c <_theta b``."""
    theta = OrderKind.of(theta)
    if not (less(a, c, theta) and less(c, b, theta)):
        raise InvalidIntervalError(f"need a <{int(theta)} c <{int(theta)} b")
    f = as_function(f)
    whole = _integral(f, make_interval(a, b, theta), tol / 4, max_depth, grid).midpoint
    left = _integral(f, make_interval(a, c, theta), tol / 4, max_depth, grid).midpoint
    right = _integral(f, make_interval(c, b, theta), tol / 4, max_depth, grid).midpoint
    r = norm(whole - left - right)
    return CheckResult(r <= tol, r, tol, {"whole": whole, "left": left, "right": right})


def verify_monotonicity(
    f: DualFunction,
    g: DualFunction,
    I: TypedInterval,
    theta=None,
    tol: float = 1e-4,
    max_depth: int = DEFAULT_DEPTH,
    grid: int = DEFAULT_GRID,
    lattice_depth: int = 4,
) -> CheckResult:
    """If ``f >=_theta g`` on the sampling lattice then ``int f >=_theta int g``
    (relaxed by tol per component)."""
    I = _interval(I, theta)
    f, g = as_function(f), as_function(g)
    s = 1.0 if I.theta is OrderKind.TYPE1 else -1.0
    rect = I.rectangle
    t = np.linspace(0.0, 1.0, grid << lattice_depth)
    X1, X2 = np.meshgrid(
        rect.re_lo + t * (rect.re_hi - rect.re_lo),
        rect.ze_lo + t * (rect.ze_hi - rect.ze_lo),
    )
    fu, fv = evaluate_components(f, X1, X2)
    gu, gv = evaluate_components(g, X1, X2)
    dominated = (fu >= gu) & (s * (fv - gv) >= 0)
    if not dominated.all():
        raise PreconditionFailed(f"f >= g (type {int(I.theta)}) fails on the sampling lattice")
    If = _integral(f, I, tol / 4, max_depth, grid).midpoint
    Ig = _integral(g, I, tol / 4, max_depth, grid).midpoint
    ok = greater_equal(If, Ig, I.theta, tol)
    diff = If - Ig
    shortfall = max(0.0, -diff.re, -s * diff.ze)
    return CheckResult(ok, shortfall, tol, {"int_f": If, "int_g": Ig})


class Antiderivative:
    """``F(x) = int_a^x f d_theta t`` on a typed interval.

    ``F(x)`` refines over ``[a, x]``; ``difference(x, c)`` returns
    ``F(x) - F(c)`` through additivity as a single integral between x and c,
    which avoids cancelling two large estimates.
    """

    def __init__(
        self,
        f: DualFunction,
        I: TypedInterval,
        tol: float = 1e-10,
        max_depth: int = DEFAULT_DEPTH,
        grid: int = DEFAULT_GRID,
    ):
        self.f = as_function(f)
        self.interval = I
        self.tol = tol
        self.max_depth = max_depth
        self.grid = grid

    def _estimate(self, lo: DualReal, hi: DualReal, depth: int) -> DualReal:
        J = make_interval(lo, hi, self.interval.theta)
        return _integral(self.f, J, self.tol, depth, self.grid).midpoint

    def __call__(self, x: DualReal) -> DualReal:
        if x == self.interval.a:
            return DualReal(0.0, 0.0)
        if not self.interval.contains(x):
            raise InvalidIntervalError(f"{x} lies outside the interval")
        return self._estimate(self.interval.a, x, self.max_depth)

    def difference(self, x: DualReal, c: DualReal, depth: Optional[int] = None) -> DualReal:
        depth = self.max_depth if depth is None else depth
        th = self.interval.theta
        if x == c:
            return DualReal(0.0, 0.0)
        if greater(x, c, th):
            return self._estimate(c, x, depth)
        if less(x, c, th):
            return -self._estimate(x, c, depth)
        raise InvalidIntervalError(f"{x} and {c} are not type {int(th)} comparable")


def verify_ftc_part1(
    f: DualFunction,
    I: TypedInterval,
    theta,
    c: DualReal,
    h: float,
    tol: float,
    samples: int = 16,
    seed=0,
    depth: int = 4,
    grid: int = DEFAULT_GRID,
) -> CheckResult:
    """Difference quotients ``(F(x) - F(c)) (x - c)^-1`` for x in the deleted
    type-theta h-neighborhood of c must lie within tol of f(c)."""
    from .differentiation import sample_neighborhood

    I = _interval(I, theta)
    f = as_function(f)
    if not I.contains(c) or c in (I.a, I.b):
        raise PreconditionFailed(f"{c} is not an interior point of the interval")
    F = Antiderivative(f, I, tol=0.0, max_depth=depth, grid=grid)
    fc = evaluate(f, c)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    errors, skipped = [], 0
    for _ in range(100):
        if len(errors) == samples:
            break
        x1, x2 = sample_neighborhood(c, h, samples, rng, I.theta, I.rectangle)
        for r, z in zip(x1, x2):
            x = DualReal(r, z)
            if x.re == c.re:
                skipped += 1
                log.info("skipping zero-divisor step %s", x - c)
                continue
            q = F.difference(x, c, depth) * inverse(x - c)
            errors.append(norm(q - fc))
            if len(errors) == samples:
                break
    if not errors:
        raise PreconditionFailed("no invertible steps inside the interval near c")
    worst = max(errors)
    return CheckResult(worst <= tol, worst, tol, {"f_c": fc, "skipped": skipped})


def verify_ftc_part2(
    f,
    I: TypedInterval,
    theta=None,
    tol: float = 1e-3,
    max_depth: int = DEFAULT_DEPTH,
    grid: int = DEFAULT_GRID,
) -> CheckResult:
    """``int_a^b f'(x) d_theta x = f(b) - f(a)`` for an expression f."""
    I = _interval(I, theta)
    f = as_function(f)
    est = _integral(symbolic_derivative(f), I, tol, max_depth, grid)
    exact = eval_lifted(f, I.b) - eval_lifted(f, I.a)
    r = norm(est.midpoint - exact)
    return CheckResult(
        r <= tol,
        r,
        tol,
        {"integral": est.midpoint, "exact": exact, "gap": est.gap_norm, "depth": est.depth},
    )
