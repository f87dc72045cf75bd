"""
Canonical text for polynomials and rational functions, and the matching
parser.

Printing is sympy's string printer over the graded-lex ring, with ``^`` for
powers, e.g. ``(y1^2*y3 + 2*y1)/(y2 + 1)``. The parser goes through
``parse_expr`` and also accepts ``**`` and implicit products (``2y1``,
``(1+y3)(1+y6)``) so formulas can be copied in by hand.
"""

from __future__ import annotations

from tokenize import TokenError

from sympy import Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.printing.str import sstr

from app.core.ratfun.multipoly import MultiPoly, fraction_field, poly_ring, variable_names
from app.core.ratfun.rational import RationalFunction
from app.utils.exceptions import ValidationError

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)


def format_poly(p: MultiPoly) -> str:
    return sstr(p.element).replace("**", "^")


def format_rational(f: RationalFunction) -> str:
    num = format_poly(f.numerator)
    if f.denominator == 1:
        return num
    return f"({num})/({format_poly(f.denominator)})"


# =============================================================================
# PARSER
# =============================================================================

def parse_rational(text: str, nvars: int) -> RationalFunction:
    names = variable_names(nvars)
    local = {name: Symbol(name) for name in names}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, ValueError, NameError) as exc:
        raise ValidationError("cannot parse expression", [f"{text!r}: {exc}"]) from exc

    stray = sorted(str(s) for s in expr.free_symbols if str(s) not in local)
    if stray:
        raise ValidationError(
            "cannot parse expression", [f"unknown symbol {s!r}, expected y1..y{nvars}" for s in stray]
        )
    try:
        frac = fraction_field(nvars).from_expr(expr)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError("cannot parse expression", [f"{text!r} is not a rational function: {exc}"]) from exc

    ring = poly_ring(nvars)
    num = MultiPoly.wrap(ring.from_dict(dict(frac.numer)))
    den = MultiPoly.wrap(ring.from_dict(dict(frac.denom)))
    return RationalFunction(num, den)


def parse_poly(text: str, nvars: int) -> MultiPoly:
    f = parse_rational(text, nvars)
    if not f.denominator.is_constant:
        raise ValidationError("expected a polynomial", [f"{text!r} has a non-constant denominator"])
    return f.numerator * (1 / f.denominator.constant_value())
