"""Helpers for exact rational input and output."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

RationalLike = Union[int, Fraction, str]


def as_fraction(value) -> Fraction:
    """Coerce ``value`` to a Fraction without passing through a float.

    Floats are accepted too; ``Fraction(float)`` is exact, so nothing is
    lost beyond what the caller already rounded away.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational, float)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_fraction(q: Fraction) -> str:
    # Fraction already keeps lowest terms with the sign on the numerator.
    return str(q)


def parse_list(text: str) -> list[Fraction]:
    """Parse ``"1,1,-2/3"`` into a list of Fractions."""
    items = [t for t in text.replace(" ", "").split(",") if t]
    if not items:
        raise ValueError("empty list of rationals")
    return [as_fraction(t) for t in items]
