"""Dual differentiability: exact lifted derivatives, a finite-difference
Cauchy-Riemann checker for component pairs, and an epsilon-delta sampler."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .dual_algebra import DualReal
from .dual_function import (
    ComponentPair,
    DualFunction,
    as_function,
    eval_lifted,
    evaluate_components,
    symbolic_derivative,
)
from .dual_order import OrderKind
from .errors import DomainError, DualCalcError

DEFAULT_STEP = 1e-5


class Method(enum.Enum):
    EXACT_LIFTED = "ExactLifted"
    FINITE_DIFFERENCE = "FiniteDifference"


class LimitCheck(NamedTuple):
    worst_ratio: float
    passed: bool


@dataclass(frozen=True)
class DerivativeReport:
    differentiable: bool
    derivative: Optional[DualReal]
    cr_residuals: tuple  # (|u_x2|, |u_x1 - v_x2|)
    method: Method
    step: float
    tol: float
    partials: Optional[dict] = None
    theta: Optional[OrderKind] = None
    limit_check: Optional[LimitCheck] = None

    def __post_init__(self):
        assert (self.derivative is not None) == self.differentiable
        assert all(r >= 0 for r in self.cr_residuals)


def _components(f, x1, x2):
    try:
        return evaluate_components(f, x1, x2)
    except DualCalcError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"component evaluation failed: {exc}") from exc


def partials(f: ComponentPair, c: DualReal, h: float = DEFAULT_STEP) -> dict:
    """Central-difference estimates of u_x1, u_x2, v_x1, v_x2 at c."""
    x1 = np.array([c.re + h, c.re - h, c.re, c.re])
    x2 = np.array([c.ze, c.ze, c.ze + h, c.ze - h])
    u, v = _components(f, x1, x2)
    return {
        "u_x1": float(u[0] - u[1]) / (2 * h),
        "u_x2": float(u[2] - u[3]) / (2 * h),
        "v_x1": float(v[0] - v[1]) / (2 * h),
        "v_x2": float(v[2] - v[3]) / (2 * h),
    }


def _default_tol(f, c: DualReal) -> float:
    u, v = _components(f, np.array([c.re]), np.array([c.ze]))
    return 1e-6 * (1.0 + max(abs(float(u[0])), abs(float(v[0]))))


def derivative_at(
    f: DualFunction,
    c: DualReal,
    tol: Optional[float] = None,
    h: float = DEFAULT_STEP,
) -> DerivativeReport:
    """Derivative of f at c.

    Expressions are differentiated exactly (lifted functions satisfy the
    Cauchy-Riemann system identically).  Component pairs are checked with
    central differences: differentiable iff ``|u_x2| <= tol`` and
    ``|u_x1 - v_x2| <= tol``, in which case the derivative is
    ``u_x1 + v_x1 eps``.  The finite-difference check cannot see
    discontinuous partials; it tests the equations only at c.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    f = as_function(f)
    if not isinstance(f, ComponentPair):
        d = eval_lifted(symbolic_derivative(f), c)
        return DerivativeReport(
            True, d, (0.0, 0.0), Method.EXACT_LIFTED, h, tol if tol is not None else 0.0
        )
    if tol is None:
        tol = _default_tol(f, c)
    p = partials(f, c, h)
    residuals = (abs(p["u_x2"]), abs(p["u_x1"] - p["v_x2"]))
    ok = bool(residuals[0] <= tol and residuals[1] <= tol)
    deriv = DualReal(p["u_x1"], p["v_x1"]) if ok else None
    return DerivativeReport(ok, deriv, residuals, Method.FINITE_DIFFERENCE, h, tol, p)


def sample_neighborhood(
    c: DualReal,
    radius: float,
    n: int,
    rng: np.random.Generator,
    theta=None,
    bounds=None,
):
    """Draw n points uniformly from the deleted ball ``0 < ||x - c|| < radius``,
    optionally keeping only points theta-comparable with c and inside the
    rectangle ``bounds``.

    Returns arrays (x1, x2) of the sampled points.
    """
    theta = None if theta is None else OrderKind.of(theta)
    lo1, hi1 = c.re - radius / math.sqrt(2), c.re + radius / math.sqrt(2)
    lo2, hi2 = c.ze - radius, c.ze + radius
    if bounds is not None:
        lo1, hi1 = max(lo1, bounds.re_lo), min(hi1, bounds.re_hi)
        lo2, hi2 = max(lo2, bounds.ze_lo), min(hi2, bounds.ze_hi)
        if lo1 > hi1 or lo2 > hi2 or (lo1 == hi1 and lo2 == hi2):
            raise ValueError("neighborhood does not meet the bounds")
    xs1, xs2, have = [], [], 0
    for _ in range(10_000):
        if have >= n:
            break
        m = max(64, 2 * (n - have))
        x1 = rng.uniform(lo1, hi1, m)
        x2 = rng.uniform(lo2, hi2, m)
        r = x1 - c.re
        z = x2 - c.ze
        keep = (np.sqrt(2 * r * r + z * z) < radius) & ((r != 0) | (z != 0))
        if theta is OrderKind.TYPE1:
            keep &= ((r >= 0) & (z >= 0)) | ((r <= 0) & (z <= 0))
        elif theta is OrderKind.TYPE2:
            keep &= ((r >= 0) & (z <= 0)) | ((r <= 0) & (z >= 0))
        xs1.append(x1[keep])
        xs2.append(x2[keep])
        have += int(keep.sum())
    else:
        raise ValueError("could not draw enough neighborhood samples")
    return np.concatenate(xs1)[:n], np.concatenate(xs2)[:n]


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def verify_limit_definition(
    f: DualFunction,
    c: DualReal,
    L: DualReal,
    eps: float,
    delta: float,
    samples: int = 1000,
    theta=None,
    seed=0,
) -> LimitCheck:
    """Worst ``||f(x) - f(c) - L (x - c)|| / ||x - c||`` over sampled x in the
    deleted (type-theta) delta-neighborhood of c; passes iff below eps."""
    if not (eps > 0 and delta > 0):
        raise ValueError("eps and delta must be positive")
    if samples < 1:
        raise ValueError("need at least one sample")
    f = as_function(f)
    x1, x2 = sample_neighborhood(c, delta, samples, _rng(seed), theta)
    u, v = _components(f, x1, x2)
    uc, vc = _components(f, np.array([c.re]), np.array([c.ze]))
    r = x1 - c.re
    z = x2 - c.ze
    rem_re = u - uc[0] - L.re * r
    rem_ze = v - vc[0] - (L.re * z + L.ze * r)
    ratio = np.sqrt(2 * rem_re**2 + rem_ze**2) / np.sqrt(2 * r * r + z * z)
    worst = float(ratio.max())
    return LimitCheck(worst, bool(worst < eps))


def type_theta_derivative_at(
    f: DualFunction,
    c: DualReal,
    theta,
    tol: Optional[float] = None,
    h: float = DEFAULT_STEP,
    *,
    limit_eps: float = 1e-3,
    delta: float = 1e-4,
    samples: int = 1000,
    seed=0,
) -> DerivativeReport:
    """Type-theta derivative at c.

    The candidate comes from the same computation as :func:`derivative_at`
    (the axis directions lie in both typed neighborhoods, so the
    Cauchy-Riemann system is still necessary).  It is then validated by the
    limit sampler restricted to the deleted type-theta neighborhood.
    """
    theta = OrderKind.of(theta)
    base = derivative_at(f, c, tol, h)
    if not base.differentiable:
        return DerivativeReport(
            False, None, base.cr_residuals, base.method, h, base.tol, base.partials, theta
        )
    check = verify_limit_definition(
        f, c, base.derivative, limit_eps, delta, samples, theta, seed
    )
    return DerivativeReport(
        check.passed,
        base.derivative if check.passed else None,
        base.cr_residuals,
        base.method,
        h,
        base.tol,
        base.partials,
        theta,
        check,
    )
