"""Scalar arithmetic modes.

Two modes are supported: ``"rational"`` (default) stores every coordinate as a
:class:`gmpy2.mpq` rational and compares exactly; ``"double"`` stores floats and
compares with an absolute tolerance :data:`TOL`.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from fractions import Fraction
from numbers import Rational, Real

from gmpy2 import mpq

TOL = 1e-9
MODES = ("rational", "double")

_mode = contextvars.ContextVar("convexdiff_arithmetic", default="rational")


def get_mode() -> str:
    return _mode.get()


def set_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    _mode.set(mode)


@contextlib.contextmanager
def arithmetic(mode: str):
    """Temporarily switch the arithmetic mode."""
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    token = _mode.set(mode)
    try:
        yield
    finally:
        _mode.reset(token)


def exact() -> bool:
    return _mode.get() == "rational"


def tol():
    return 0 if exact() else TOL


def is_rational(c) -> bool:
    """True for exact rational scalars (``mpq`` or :class:`~fractions.Fraction`)."""
    return isinstance(c, (mpq, Fraction))


def to_scalar(value):
    """Convert ``value`` (int, Fraction, float or ``"p/q"`` string) for the current mode."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if exact():
        if type(value) is mpq:
            return value
        if isinstance(value, (int, Rational)):
            return mpq(value)
        if isinstance(value, str):
            return mpq(Fraction(value.strip()))
        if isinstance(value, Real):
            v = float(value)
            if not math.isfinite(v):
                raise ValueError("coordinates must be finite")
            return mpq(v)
        raise TypeError(f"cannot convert {value!r} to a scalar")
    if isinstance(value, str):
        v = float(Fraction(value.strip()))
    elif isinstance(value, (int, float, Real)):
        v = float(value)
    else:
        raise TypeError(f"cannot convert {value!r} to a scalar")
    if not math.isfinite(v):
        raise ValueError("coordinates must be finite")
    return v


def to_vector(values) -> tuple:
    vec = tuple(to_scalar(v) for v in values)
    if not vec:
        raise ValueError("vectors need at least one coordinate")
    return vec


def sign(x) -> int:
    if _mode.get() == "rational":
        return (x > 0) - (x < 0)
    t = TOL
    if x > t:
        return 1
    if x < -t:
        return -1
    return 0


def sqrt(x) -> float:
    """Float square root of a nonnegative scalar (exact input, rounded output)."""
    return math.sqrt(x) if x > 0 else 0.0


def sqrt_le_sum(a_sq, b_sq, c_sq) -> bool:
    """Exactly decide ``sqrt(a_sq) <= sqrt(b_sq) + sqrt(c_sq)`` for rationals."""
    lhs = a_sq - b_sq - c_sq
    if lhs <= 0:
        return True
    return lhs * lhs <= 4 * b_sq * c_sq
