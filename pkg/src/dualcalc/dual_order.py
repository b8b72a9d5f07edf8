"""The two generalized orders on dual numbers, typed intervals and neighborhoods.

Both orders compare real parts first; they differ in the direction of the
zero-divisor comparison.  Unwinding the definition, ``x >=_1 y`` holds iff
``Re x >= Re y and Ze x >= Ze y`` and ``x >=_2 y`` iff ``Re x >= Re y and
Ze x <= Ze y``, which is what makes type-theta intervals rectangles.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .dual_algebra import DualReal, norm
from .errors import InvalidIntervalError


class OrderKind(enum.IntEnum):
    TYPE1 = 1
    TYPE2 = 2

    @classmethod
    def of(cls, theta) -> OrderKind:
        return theta if isinstance(theta, OrderKind) else cls(int(theta))


class Relation(enum.Flag):
    """Relations of x to y that hold simultaneously."""

    NONE = 0
    GREATER1 = enum.auto()
    LESS1 = enum.auto()
    GREATER2 = enum.auto()
    LESS2 = enum.auto()
    EQUAL = enum.auto()


def _ze_sign(theta: OrderKind) -> int:
    return 1 if theta is OrderKind.TYPE1 else -1


def greater(x: DualReal, y: DualReal, theta) -> bool:
    """Strict type-theta comparison ``x >_theta y``."""
    s = _ze_sign(OrderKind.of(theta))
    dz = s * (x.ze - y.ze)
    if x.re > y.re:
        return dz >= 0
    return x.re == y.re and dz > 0


def less(x: DualReal, y: DualReal, theta) -> bool:
    return greater(y, x, theta)


def greater_equal(x: DualReal, y: DualReal, theta, tol: float = 0.0) -> bool:
    """``x >=_theta y``; with ``tol > 0`` each component is relaxed by ``tol``.

    ``tol == 0`` gives the exact relation (``greater`` or equal).
    """
    s = _ze_sign(OrderKind.of(theta))
    return x.re >= y.re - tol and s * (x.ze - y.ze) >= -tol


def less_equal(x: DualReal, y: DualReal, theta, tol: float = 0.0) -> bool:
    return greater_equal(y, x, theta, tol)


def comparable(x: DualReal, y: DualReal, theta) -> bool:
    return greater_equal(x, y, theta) or greater_equal(y, x, theta)


def classify_pair(x: DualReal, y: DualReal) -> Relation:
    if x == y:
        return Relation.EQUAL
    rel = Relation.NONE
    if greater(x, y, 1):
        rel |= Relation.GREATER1
    if greater(y, x, 1):
        rel |= Relation.LESS1
    if greater(x, y, 2):
        rel |= Relation.GREATER2
    if greater(y, x, 2):
        rel |= Relation.LESS2
    return rel


def describe(rel: Relation) -> str:
    """Human-readable form, e.g. ``less (type 1); greater (type 2)``."""
    if rel & Relation.EQUAL:
        return "equal"
    parts = []
    for flag, text in (
        (Relation.GREATER1, "greater (type 1)"),
        (Relation.LESS1, "less (type 1)"),
        (Relation.GREATER2, "greater (type 2)"),
        (Relation.LESS2, "less (type 2)"),
    ):
        if rel & flag:
            parts.append(text)
    return "; ".join(parts)


@dataclass(frozen=True)
class Rectangle:
    re_lo: float
    re_hi: float
    ze_lo: float
    ze_hi: float

    def contains(self, x: DualReal) -> bool:
        return self.re_lo <= x.re <= self.re_hi and self.ze_lo <= x.ze <= self.ze_hi


@dataclass(frozen=True)
class TypedInterval:
    """Closed type-theta interval ``{x : a <=_theta x <=_theta b}``."""

    a: DualReal
    b: DualReal
    theta: OrderKind

    def __post_init__(self):
        object.__setattr__(self, "theta", OrderKind.of(self.theta))
        if not greater(self.b, self.a, self.theta):
            raise InvalidIntervalError(
                f"{self.a} is not type {int(self.theta)} less than {self.b}"
            )

    @property
    def rectangle(self) -> Rectangle:
        return Rectangle(
            self.a.re,
            self.b.re,
            min(self.a.ze, self.b.ze),
            max(self.a.ze, self.b.ze),
        )

    @property
    def length(self) -> DualReal:
        return self.b - self.a

    def contains(self, x: DualReal) -> bool:
        return less_equal(self.a, x, self.theta) and less_equal(x, self.b, self.theta)


def make_interval(a: DualReal, b: DualReal, theta) -> TypedInterval:
    return TypedInterval(a, b, OrderKind.of(theta))


def contains(interval: TypedInterval, x: DualReal) -> bool:
    return interval.contains(x)


@dataclass(frozen=True)
class Neighborhood:
    """Ball ``||x - c|| < radius``, optionally restricted to points
    theta-comparable with the center and/or with the center removed."""

    center: DualReal
    radius: float
    theta: Optional[OrderKind] = None
    deleted: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("neighborhood radius must be positive")
        if self.theta is not None:
            object.__setattr__(self, "theta", OrderKind.of(self.theta))

    def __contains__(self, x: DualReal) -> bool:
        return in_neighborhood(self, x)


def in_neighborhood(n: Neighborhood, x: DualReal) -> bool:
    if n.deleted and x == n.center:
        return False
    if not norm(x - n.center) < n.radius:
        return False
    if n.theta is not None:
        return comparable(x, n.center, n.theta)
    return True
