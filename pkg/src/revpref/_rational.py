"""Exact rational parsing and the ``numerator/denominator`` wire format."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str, Decimal, float]


def to_rational(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings may be integers (``"2"``), decimals (``"0.5"``, ``"1e-3"``) or
    fractions (``"2/3"``). Floats are read through their shortest ``repr`` so
    ``0.1`` becomes ``1/10`` rather than the binary expansion.

    >>> to_rational("2/3")
    Fraction(2, 3)
    >>> to_rational(0.1)
    Fraction(1, 10)
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational literals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"not a finite rational: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational literal: {value!r}") from None
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(q: Fraction) -> str:
    """Render ``q`` as ``"n/d"``; integers keep the ``/1`` suffix."""
    return f"{q.numerator}/{q.denominator}"
