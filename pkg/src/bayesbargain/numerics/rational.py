"""Exact rational helpers.

``fractions.Fraction`` is the value type everywhere; these helpers only
convert inputs and format output as decimal-free ``p/q`` strings.
"""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from math import gcd
from numbers import Rational as _RationalABC

Rational = Fraction


def q(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts ints, Fractions, Decimals and strings such as ``"7/10"``,
    ``"-3"`` or ``"0.1"``.  Floats are rejected: a float literal like
    ``0.1`` is not the number it looks like.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, (str, Decimal)):
        return Fraction(str(value).strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        # gmpy2.mpq and friends
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} {value!r} exactly")


def fmt(value) -> str:
    """``p/q`` string (``p`` alone for integers), never a decimal point."""
    return str(q(value))


def primitive(coeffs, rhs=None):
    """Scale a row by a positive factor to coprime integers.

    Returns ``(coeffs, rhs)`` as Fractions with integral values.  A zero
    row is returned unchanged.
    """
    values = list(coeffs) + ([] if rhs is None else [rhs])
    values = [q(v) for v in values]
    lcm = 1
    for v in values:
        d = v.denominator
        lcm = lcm * d // gcd(lcm, d)
    ints = [v.numerator * (lcm // v.denominator) for v in values]
    g = 0
    for n in ints:
        g = gcd(g, abs(n))
    if g == 0:
        g = 1
    scaled = [Fraction(n // g) for n in ints]
    if rhs is None:
        return tuple(scaled), None
    return tuple(scaled[:-1]), scaled[-1]
