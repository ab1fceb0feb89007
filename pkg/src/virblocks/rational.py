"""Rational <-> "p/q" string conversion used by every serializer."""

from __future__ import annotations

from fractions import Fraction


def fmt(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse(s) -> Fraction:
    if isinstance(s, float):
        raise TypeError("floats are not accepted; use 'p/q' strings")
    return Fraction(s)
