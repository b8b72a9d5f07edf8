"""Dual real numbers x = Re x + Ze x * eps with eps**2 = 0."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

from .errors import NonFiniteError, ParseError, ZeroDivisorError


@dataclass(frozen=True, slots=True)
class DualReal:
    """Immutable dual real number.

    ``re`` is the real part and ``ze`` the zero-divisor part (the
    coefficient of the nilpotent unit ``eps``).
    """

    re: float
    ze: float = 0.0

    def __post_init__(self):
        re_, ze_ = float(self.re), float(self.ze)
        if not (math.isfinite(re_) and math.isfinite(ze_)):
            raise NonFiniteError(f"non-finite dual number ({self.re!r}, {self.ze!r})")
        # normalise -0.0 so equality and printing are representation-free
        object.__setattr__(self, "re", re_ + 0.0)
        object.__setattr__(self, "ze", ze_ + 0.0)

    @classmethod
    def coerce(cls, value) -> DualReal:
        if isinstance(value, DualReal):
            return value
        if isinstance(value, (int, float)):
            return cls(float(value), 0.0)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(*value)
        raise TypeError(f"cannot interpret {value!r} as a dual number")

    def __iter__(self):
        yield self.re
        yield self.ze

    def __add__(self, other):
        try:
            return add(self, DualReal.coerce(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return add(self, -DualReal.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return add(DualReal.coerce(other), -self)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return DualReal(-self.re, -self.ze)

    def __mul__(self, other):
        try:
            return mul(self, DualReal.coerce(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            return mul(self, inverse(DualReal.coerce(other)))
        except TypeError:
            return NotImplemented

    def __rtruediv__(self, other):
        try:
            return mul(DualReal.coerce(other), inverse(self))
        except TypeError:
            return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return power(self, n)

    def __abs__(self):
        return norm(self)

    def __str__(self):
        return format_dual(self)


ZERO = DualReal(0.0, 0.0)
ONE = DualReal(1.0, 0.0)
EPS = DualReal(0.0, 1.0)


class AlgebraClass(enum.Enum):
    ZERO = "Zero"
    ZERO_DIVISOR = "ZeroDivisor"
    INVERTIBLE = "Invertible"


def _checked(re_: float, ze_: float) -> DualReal:
    if not (math.isfinite(re_) and math.isfinite(ze_)):
        raise NonFiniteError("dual arithmetic overflowed to a non-finite value")
    return DualReal(re_, ze_)


def add(x: DualReal, y: DualReal) -> DualReal:
    return _checked(x.re + y.re, x.ze + y.ze)


def mul(x: DualReal, y: DualReal) -> DualReal:
    return _checked(x.re * y.re, x.re * y.ze + x.ze * y.re)


def scale(a: float, x: DualReal) -> DualReal:
    """Multiply by a real scalar (the vector-space action)."""
    return _checked(a * x.re, a * x.ze)


def inverse(x: DualReal) -> DualReal:
    """Multiplicative inverse ``1/Re x - (Ze x / (Re x)**2) eps``.

    Raises ZeroDivisorError when ``Re x == 0``; such x are zero or zero-divisors.
    """
    if x.re == 0.0:
        kind = "zero" if x.ze == 0.0 else "a zero-divisor"
        raise ZeroDivisorError(f"{format_dual(x)} is {kind} and has no inverse")
    return _checked(1.0 / x.re, -x.ze / (x.re * x.re))


def power(x: DualReal, n: int) -> DualReal:
    # (a + b eps)^n = a^n + n a^(n-1) b eps
    if n == 0:
        return ONE
    if n < 0:
        return power(inverse(x), -n)
    return _checked(x.re**n, n * x.re ** (n - 1) * x.ze)


_SQRT2 = math.sqrt(2.0)


def norm(x: DualReal) -> float:
    # hypot avoids underflow and overflow in the squares
    return math.hypot(_SQRT2 * x.re, x.ze)


def classify(x: DualReal) -> AlgebraClass:
    if x.re != 0.0:
        return AlgebraClass.INVERTIBLE
    if x.ze != 0.0:
        return AlgebraClass.ZERO_DIVISOR
    return AlgebraClass.ZERO


# ---------------------------------------------------------------------------
# literal format: A | A+Beps | A-Beps | Beps

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _number(text: str, whole: str) -> float:
    if not _NUMBER.fullmatch(text):
        raise ParseError(f"invalid dual literal {whole!r}", max(whole.find(text), 0))
    return float(text)


def parse_dual(text: str) -> DualReal:
    """Parse a dual literal such as ``2.5+3eps``, ``-1eps`` or ``4``."""
    s = re.sub(r"\s*([+-])\s*", r"\1", text.strip())
    s = re.sub(r"\s+eps$", "eps", s)
    if not s.endswith("eps"):
        return DualReal(_number(s, text), 0.0)
    body = s[:-3]
    split = 0
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "eE":
            split = i
            break
    re_txt, ze_txt = body[:split], body[split:]
    re_val = _number(re_txt, text) if re_txt else 0.0
    if ze_txt in ("", "+", "-"):
        ze_val = -1.0 if ze_txt == "-" else 1.0
    else:
        ze_val = _number(ze_txt, text)
    return DualReal(re_val, ze_val)


def _fmt(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def format_dual(x: DualReal) -> str:
    """Inverse of :func:`parse_dual`; exact round trip for every finite value."""
    if x.ze == 0.0:
        return _fmt(x.re)
    if x.re == 0.0:
        return f"{_fmt(x.ze)}eps"
    sign = "+" if x.ze > 0 else "-"
    return f"{_fmt(x.re)}{sign}{_fmt(abs(x.ze))}eps"
