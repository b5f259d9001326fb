"""Exact scalar fields.

``QQ`` is the rational field used for structure constants and concrete
functionals. ``symbolic_field(m)`` is QQ(u1, ..., um), whose elements stand
for the coordinates of a generic functional. sympy keeps fraction field
elements reduced, so equality is exact.
"""

import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain

from nilstrat.core.exceptions import ParseError

Scalar = Any

_RATIONAL_LITERAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class FieldKind(Enum):
    RATIONAL = "rational"
    SYMBOLIC = "symbolic"


@lru_cache(maxsize=None)
def symbolic_field(m: int) -> Domain:
    gens = tuple(sympy.Symbol(f"u{i}") for i in range(1, m + 1))
    return QQ.frac_field(*gens)


def field_kind(domain: Domain) -> FieldKind:
    return FieldKind.RATIONAL if domain == QQ else FieldKind.SYMBOLIC


def is_zero(value: Scalar, domain: Domain = QQ) -> bool:
    return value == domain.zero


def parse_scalar(text: str, field: str = None) -> Scalar:
    """Parse "p/q" or "p" into an exact rational"""
    literal = str(text).strip()
    if not _RATIONAL_LITERAL.match(literal):
        raise ParseError(f"not a rational literal: {text!r}", field=field)
    try:
        value = Fraction(literal)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", field=field)
    return QQ(value.numerator, value.denominator)


def rational(value: Union[int, str, Fraction, Scalar]) -> Scalar:
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    if QQ.of_type(value):
        return value
    raise TypeError(f"cannot convert {value!r} to a rational")


def lift(value: Scalar, domain: Domain) -> Scalar:
    """Embed a rational into ``domain``"""
    if domain == QQ:
        return value
    return domain.convert_from(value, QQ)


def format_scalar(value: Scalar, domain: Domain = None) -> str:
    if domain is None or domain == QQ:
        if QQ.of_type(value):
            numerator, denominator = QQ.numer(value), QQ.denom(value)
            return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"
        if isinstance(value, int):
            return str(value)
    if domain is not None:
        return str(domain.to_sympy(value))
    return str(value)
