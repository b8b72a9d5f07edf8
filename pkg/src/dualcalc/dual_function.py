"""Dual-valued functions of one dual variable.

A function is either an expression tree (evaluated by analytic lifting,
``g(x1 + x2 eps) = g(x1) + x2 g'(x1) eps``) or a ``ComponentPair`` of real
callables ``u(x1, x2)``, ``v(x1, x2)`` giving ``f = u + v eps``.  Component
pairs can express functions that are not differentiable in the dual sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import dual_algebra as da
from .dual_algebra import DualReal
from .errors import DomainError, NonFiniteError, ZeroDivisorError
from .expr import (
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    X,
    const,
    parse,
    to_text,
)

RealFn = Callable[[float, float], float]


@dataclass(frozen=True)
class ComponentPair:
    """``f(x) = u(Re x, Ze x) + v(Re x, Ze x) eps``.

    ``u`` and ``v`` should accept numpy arrays; scalar-only callables are
    vectorized on demand.
    """

    u: RealFn
    v: RealFn

    def __call__(self, x: DualReal) -> DualReal:
        return DualReal(float(self.u(x.re, x.ze)), float(self.v(x.re, x.ze)))


DualFunction = Union[Expr, ComponentPair]


def as_function(f) -> DualFunction:
    if isinstance(f, str):
        return parse(f)
    if isinstance(f, (DualReal, int, float)):
        return const(f)
    return f


def is_expr(f) -> bool:
    return not isinstance(f, ComponentPair)


# ---------------------------------------------------------------------------
# scalar lifted evaluation


def _lift(name: str, x: DualReal, node) -> DualReal:
    r, z = x.re, x.ze
    if name == "sin":
        return da._checked(math.sin(r), z * math.cos(r))
    if name == "cos":
        return da._checked(math.cos(r), -z * math.sin(r))
    if name == "exp":
        try:
            e = math.exp(r)
        except OverflowError:
            raise NonFiniteError(f"exp overflow in {to_text(node)}") from None
        return da._checked(e, z * e)
    if r <= 0.0:
        raise DomainError(f"log needs a positive real part in {to_text(node)}", node)
    return da._checked(math.log(r), z / r)


def eval_lifted(f: Expr, x: DualReal) -> DualReal:
    """Evaluate an expression at a dual point using dual arithmetic."""
    if isinstance(f, Var):
        return x
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Neg):
        return -eval_lifted(f.arg, x)
    if isinstance(f, Add):
        return da.add(eval_lifted(f.left, x), eval_lifted(f.right, x))
    if isinstance(f, Sub):
        return da.add(eval_lifted(f.left, x), -eval_lifted(f.right, x))
    if isinstance(f, Mul):
        return da.mul(eval_lifted(f.left, x), eval_lifted(f.right, x))
    if isinstance(f, Div):
        num = eval_lifted(f.left, x)
        den = eval_lifted(f.right, x)
        try:
            return da.mul(num, da.inverse(den))
        except ZeroDivisorError as exc:
            raise DomainError(f"division by {den} in {to_text(f)}", f) from exc
    if isinstance(f, Pow):
        base = eval_lifted(f.base, x)
        try:
            return da.power(base, f.exponent)
        except ZeroDivisorError as exc:
            raise DomainError(f"negative power of {base} in {to_text(f)}", f) from exc
        except OverflowError:
            raise NonFiniteError(f"overflow in {to_text(f)}") from None
    if isinstance(f, Call):
        return _lift(f.func, eval_lifted(f.arg, x), f)
    raise TypeError(f"not an expression: {f!r}")


def eval_real(f: Expr, t: float) -> float:
    """Plain real evaluation; dual constants contribute their real part."""
    if isinstance(f, Var):
        return t
    if isinstance(f, Const):
        return f.value.re
    if isinstance(f, Neg):
        return -eval_real(f.arg, t)
    if isinstance(f, Add):
        return eval_real(f.left, t) + eval_real(f.right, t)
    if isinstance(f, Sub):
        return eval_real(f.left, t) - eval_real(f.right, t)
    if isinstance(f, Mul):
        return eval_real(f.left, t) * eval_real(f.right, t)
    if isinstance(f, Div):
        den = eval_real(f.right, t)
        if den == 0.0:
            raise DomainError(f"division by zero in {to_text(f)}", f)
        return eval_real(f.left, t) / den
    if isinstance(f, Pow):
        base = eval_real(f.base, t)
        if base == 0.0 and f.exponent < 0:
            raise DomainError(f"negative power of zero in {to_text(f)}", f)
        return base**f.exponent
    if isinstance(f, Call):
        a = eval_real(f.arg, t)
        if f.func == "log" and a <= 0.0:
            raise DomainError(f"log of non-positive value in {to_text(f)}", f)
        return getattr(math, f.func)(a)
    raise TypeError(f"not an expression: {f!r}")


# ---------------------------------------------------------------------------
# vectorized lifted evaluation over arrays of (x1, x2)


def _lifted_arrays(f: Expr, x1: np.ndarray, x2: np.ndarray):
    if isinstance(f, Var):
        return x1, x2
    if isinstance(f, Const):
        return (np.full_like(x1, f.value.re), np.full_like(x1, f.value.ze))
    if isinstance(f, Neg):
        r, z = _lifted_arrays(f.arg, x1, x2)
        return -r, -z
    if isinstance(f, (Add, Sub, Mul, Div)):
        ar, az = _lifted_arrays(f.left, x1, x2)
        br, bz = _lifted_arrays(f.right, x1, x2)
        if isinstance(f, Add):
            return ar + br, az + bz
        if isinstance(f, Sub):
            return ar - br, az - bz
        if isinstance(f, Mul):
            return ar * br, ar * bz + az * br
        if np.any(br == 0.0):
            raise DomainError(f"division by a zero-divisor in {to_text(f)}", f)
        return ar / br, (az * br - ar * bz) / (br * br)
    if isinstance(f, Pow):
        r, z = _lifted_arrays(f.base, x1, x2)
        n = f.exponent
        if n == 0:
            return np.ones_like(r), np.zeros_like(r)
        if n < 0:
            if np.any(r == 0.0):
                raise DomainError(f"negative power of a zero-divisor in {to_text(f)}", f)
            r, z = 1.0 / r, -z / (r * r)
            n = -n
        return r**n, n * r ** (n - 1) * z
    if isinstance(f, Call):
        r, z = _lifted_arrays(f.arg, x1, x2)
        if f.func == "sin":
            return np.sin(r), z * np.cos(r)
        if f.func == "cos":
            return np.cos(r), -z * np.sin(r)
        if f.func == "exp":
            e = np.exp(r)
            return e, z * e
        if np.any(r <= 0.0):
            raise DomainError(f"log needs a positive real part in {to_text(f)}", f)
        return np.log(r), z / r
    raise TypeError(f"not an expression: {f!r}")


def evaluate_components(f: DualFunction, x1, x2):
    """Evaluate ``(f_Re, f_Ze)`` on arrays of real/zero-divisor coordinates."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x1, x2 = np.broadcast_arrays(x1, x2)
    with np.errstate(all="ignore"):
        if isinstance(f, ComponentPair):
            u = _call_vectorized(f.u, x1, x2)
            v = _call_vectorized(f.v, x1, x2)
        else:
            u, v = _lifted_arrays(f, x1, x2)
            u = np.broadcast_to(u, x1.shape)
            v = np.broadcast_to(v, x1.shape)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise NonFiniteError("function evaluation produced non-finite values")
    return u, v


def _call_vectorized(fn, x1, x2):
    try:
        out = np.asarray(fn(x1, x2), dtype=float)
        if out.shape == x1.shape:
            return out
        if out.ndim == 0:
            return np.full(x1.shape, float(out))
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda a, b: float(fn(a, b)), otypes=[float])(x1, x2)


def evaluate(f: DualFunction, x: DualReal) -> DualReal:
    if isinstance(f, ComponentPair):
        return f(x)
    return eval_lifted(f, x)


def components_of(f: DualFunction) -> ComponentPair:
    if isinstance(f, ComponentPair):
        return f

    def u(x1, x2):
        return evaluate_components(f, x1, x2)[0]

    def v(x1, x2):
        return evaluate_components(f, x1, x2)[1]

    return ComponentPair(u, v)


# ---------------------------------------------------------------------------
# arithmetic on functions


def add_functions(f: DualFunction, g: DualFunction) -> DualFunction:
    if is_expr(f) and is_expr(g):
        return Add(f, g)
    fc, gc = components_of(f), components_of(g)
    return ComponentPair(
        lambda a, b: fc.u(a, b) + gc.u(a, b),
        lambda a, b: fc.v(a, b) + gc.v(a, b),
    )


def scale_function(k: DualReal, f: DualFunction) -> DualFunction:
    k = DualReal.coerce(k)
    if is_expr(f):
        return Mul(Const(k), f)
    fc = components_of(f)
    # (kr + kz eps)(u + v eps) = kr u + (kr v + kz u) eps
    return ComponentPair(
        lambda a, b: k.re * fc.u(a, b),
        lambda a, b: k.re * fc.v(a, b) + k.ze * fc.u(a, b),
    )


# ---------------------------------------------------------------------------
# symbolic derivative (test oracle)

_ZERO = Const(DualReal(0.0, 0.0))
_ONE = Const(DualReal(1.0, 0.0))


def _is(node, value: float) -> bool:
    return isinstance(node, Const) and node.value == DualReal(value, 0.0)


def _add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def _sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return Neg(b)
    return Sub(a, b)


def _mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return _ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return Mul(a, b)


def symbolic_derivative(f: Expr) -> Expr:
    """d/dx by the usual rules, with only 0/1 folding."""
    if isinstance(f, Var):
        return _ONE
    if isinstance(f, Const):
        return _ZERO
    if isinstance(f, Neg):
        d = symbolic_derivative(f.arg)
        return _ZERO if _is(d, 0) else Neg(d)
    if isinstance(f, Add):
        return _add(symbolic_derivative(f.left), symbolic_derivative(f.right))
    if isinstance(f, Sub):
        return _sub(symbolic_derivative(f.left), symbolic_derivative(f.right))
    if isinstance(f, Mul):
        return _add(
            _mul(symbolic_derivative(f.left), f.right),
            _mul(f.left, symbolic_derivative(f.right)),
        )
    if isinstance(f, Div):
        num = _sub(
            _mul(symbolic_derivative(f.left), f.right),
            _mul(f.left, symbolic_derivative(f.right)),
        )
        if _is(num, 0):
            return _ZERO
        return Div(num, Pow(f.right, 2))
    if isinstance(f, Pow):
        n = f.exponent
        if n == 0:
            return _ZERO
        inner = _ONE if n == 1 else Pow(f.base, n - 1)
        return _mul(_mul(const(float(n)), inner), symbolic_derivative(f.base))
    if isinstance(f, Call):
        d = symbolic_derivative(f.arg)
        if f.func == "sin":
            outer = Call("cos", f.arg)
        elif f.func == "cos":
            outer = Neg(Call("sin", f.arg))
        elif f.func == "exp":
            outer = Call("exp", f.arg)
        else:
            if _is(d, 0):
                return _ZERO
            return Div(d, f.arg)
        return _mul(outer, d)
    raise TypeError(f"not an expression: {f!r}")


__all__ = [
    "ComponentPair",
    "DualFunction",
    "X",
    "add_functions",
    "as_function",
    "components_of",
    "eval_lifted",
    "eval_real",
    "evaluate",
    "evaluate_components",
    "is_expr",
    "parse",
    "scale_function",
    "symbolic_derivative",
    "to_text",
]
