"""Exact parsing and formatting of rational numbers.

Costs arrive as decimal strings ("3.50"), integers, or "p/q"; all become
``Fraction`` without ever passing through a float.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import InvalidArgument


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise InvalidArgument("boolean is not a number")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        raise InvalidArgument("floats are not accepted; pass a decimal string or p/q")
    text = str(value).strip()
    if not text:
        raise InvalidArgument("empty number")
    m = _REPEATING.fullmatch(text)
    if m:
        return _from_repeating(*m.groups())
    try:
        # Fraction parses both "p/q" and decimal strings exactly.
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgument(f"not an exact rational: {text!r}") from exc


_REPEATING = re.compile(r"(-?)(\d+)\.(\d*)\((\d+)\)")


def _from_repeating(sign: str, whole: str, fixed: str, block: str) -> Fraction:
    """Value of a decimal such as "30.(3)" or "0.1(6)"."""
    head = Fraction(int(whole + fixed), 10 ** len(fixed))
    tail = Fraction(int(block), (10 ** len(block) - 1) * 10 ** len(fixed))
    q = head + tail
    return -q if sign else q


def parse_positive(value) -> Fraction:
    q = parse_rational(value)
    if q <= 0:
        raise InvalidArgument(f"expected a positive number, got {format_rational(q)}")
    return q


def format_rational(q) -> str:
    """Serialize as "p/q", or a bare integer when the denominator is 1."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_decimal(q) -> str:
    """Decimal rendering with the repeating block in parentheses, e.g. 91/3 -> "30.(3)"."""
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    num, den = abs(q.numerator), q.denominator
    whole, rem = divmod(num, den)
    if rem == 0:
        return f"{sign}{whole}"
    digits: list[str] = []
    seen: dict[int, int] = {}
    while rem and rem not in seen:
        seen[rem] = len(digits)
        rem *= 10
        digits.append(str(rem // den))
        rem %= den
    if rem:
        start = seen[rem]
        frac = "".join(digits[:start]) + "(" + "".join(digits[start:]) + ")"
    else:
        frac = "".join(digits)
    return f"{sign}{whole}.{frac}"
