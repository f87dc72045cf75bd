"""
Sparse multivariate polynomials over QQ in the variables y1..yl.

Storage and arithmetic are sympy's sparse polynomial rings, one ring per
variable count, ordered graded-lexicographically (total degree first, then
lex with y1 highest). The leading term under that order fixes the
normalisation used everywhere else: gcds are monic and so are the
denominators of rational functions.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Coefficient = Union[int, Fraction]


def variable_names(nvars: int) -> List[str]:
    return [f"y{i + 1}" for i in range(nvars)]


@lru_cache(maxsize=None)
def poly_ring(nvars: int) -> PolyRing:
    if nvars < 1:
        raise ValueError("polynomials need at least one variable")
    return PolyRing(variable_names(nvars), QQ, grlex)


@lru_cache(maxsize=None)
def fraction_field(nvars: int) -> FracField:
    return FracField(variable_names(nvars), QQ, grlex)


def to_qq(value: Coefficient):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class GcdBudgetExceeded(Exception):
    """The gcd would touch more terms than the cap allows."""


class MultiPoly:
    """Immutable polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("element",)

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponent, Coefficient]] = None):
        ring = poly_ring(nvars)
        data = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have {nvars} entries")
            if coeff:
                data[tuple(int(k) for k in exp)] = to_qq(coeff)
        self.element: PolyElement = ring.from_dict(data)

    @classmethod
    def wrap(cls, element: PolyElement) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.element = element
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls.wrap(poly_ring(nvars).zero)

    @classmethod
    def constant(cls, nvars: int, value: Coefficient) -> "MultiPoly":
        return cls.wrap(poly_ring(nvars).ground_new(to_qq(value)))

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.wrap(poly_ring(nvars).one)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        """The variable y_{index+1} (0-based ``index``)."""
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        return cls.wrap(poly_ring(nvars).gens[index])

    @classmethod
    def monomial(cls, exp: Exponent, coeff: Coefficient = 1) -> "MultiPoly":
        return cls(len(exp), {tuple(exp): coeff})

    # ---------------------------------------------------------------------
    # INSPECTION
    # ---------------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.element.ring.ngens

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return {exp: from_qq(c) for exp, c in self.element.items()}

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        for exp, c in self.element.items():
            yield exp, from_qq(c)

    def __len__(self) -> int:
        return len(self.element)

    @property
    def is_zero(self) -> bool:
        return not self.element

    @property
    def is_constant(self) -> bool:
        return self.element.is_ground

    @property
    def is_monomial(self) -> bool:
        return len(self.element) == 1

    def constant_value(self) -> Fraction:
        return from_qq(self.element.get(self.element.ring.zero_monom, QQ.zero))

    def leading_exponent(self) -> Exponent:
        if not self.element:
            raise ValueError("zero polynomial has no leading term")
        return self.element.LM

    def leading_coefficient(self) -> Fraction:
        return from_qq(self.element.LC)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.element), default=0)

    def degree(self, index: int) -> int:
        return max((e[index] for e in self.element), default=0)

    def min_exponents(self) -> Exponent:
        if not self.element:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.element.keys()))

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        """Terms in descending graded-lex order (printing order)."""
        return [(exp, from_qq(c)) for exp, c in self.element.terms()]

    # ---------------------------------------------------------------------
    # ARITHMETIC
    # ---------------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other.element
        if isinstance(other, (int, Fraction)):
            return self.element.ring.ground_new(to_qq(other))
        return None

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly.wrap(self.element + other)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly.wrap(-self.element)

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly.wrap(self.element - other)

    def __rsub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly.wrap(other - self.element)

    def __mul__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MultiPoly.wrap(self.element * other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MultiPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        return MultiPoly.wrap(self.element ** exponent)

    def div_monomial(self, exp: Exponent) -> "MultiPoly":
        out = {}
        for e, c in self.element.items():
            shifted = tuple(x - y for x, y in zip(e, exp))
            if min(shifted, default=0) < 0:
                raise ArithmeticError("monomial does not divide polynomial")
            out[shifted] = c
        return MultiPoly.wrap(self.element.ring.from_dict(out))

    def monic(self) -> "MultiPoly":
        return MultiPoly.wrap(self.element.monic())

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.element == other.element
        if isinstance(other, (int, Fraction)):
            return self.element == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.element.items())))

    def __repr__(self) -> str:
        from app.core.ratfun.text_format import format_poly

        return f"MultiPoly({format_poly(self)!r})"

    # ---------------------------------------------------------------------
    # CALCULUS & EVALUATION
    # ---------------------------------------------------------------------

    def derivative(self, index: int) -> "MultiPoly":
        return MultiPoly.wrap(self.element.diff(index))

    def evaluate(self, point):
        """Evaluate at ``point`` (any scalars closed under + and *)."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} entries, expected {self.nvars}")
        powers: List[Dict[int, object]] = [dict() for _ in range(self.nvars)]

        def power(i: int, k: int):
            cache = powers[i]
            if k not in cache:
                cache[k] = point[i] ** k
            return cache[k]

        total = None
        for exp, coeff in self.items():
            term = _coefficient_like(coeff, point)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            total = term if total is None else total + term
        if total is None:
            return _coefficient_like(Fraction(0), point)
        return total


def _coefficient_like(coeff: Fraction, point):
    # floating scalars take the coefficient as complex, exact ones keep Fraction
    sample = point[0] if len(point) else None
    if isinstance(sample, (complex, float)) or type(sample).__module__ == "numpy":
        return complex(coeff)
    if hasattr(sample, "coerce_coefficient"):
        return sample.coerce_coefficient(coeff)
    return coeff


# =============================================================================
# DIVISION & GCD
# =============================================================================

def divide_exact(a: MultiPoly, b: MultiPoly) -> Optional[MultiPoly]:
    """Return a / b if b divides a exactly, otherwise None."""
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    try:
        return MultiPoly.wrap(a.element.exquo(b.element))
    except ExactQuotientFailed:
        return None


def exact_quotient(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    q = divide_exact(a, b)
    if q is None:
        raise ArithmeticError("expected exact polynomial division")
    return q


def check_gcd_budget(a: MultiPoly, b: MultiPoly, cap: Optional[int]) -> None:
    """The work of a gcd is estimated by the product of the term counts."""
    if cap is not None and len(a) * len(b) > cap:
        logger.debug("gcd of %d x %d terms exceeds the cap of %s", len(a), len(b), cap)
        raise GcdBudgetExceeded()


def poly_gcd(a: MultiPoly, b: MultiPoly, *, cap: Optional[int] = None) -> MultiPoly:
    """
    Greatest common divisor, normalised monic (leading coefficient 1 in
    graded-lex order). gcd(0, 0) is 0.

    Raises GcdBudgetExceeded when the operands are larger than ``cap``
    allows.
    """
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    if a.is_zero and b.is_zero:
        return a
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    check_gcd_budget(a, b, cap)
    return MultiPoly.wrap(a.element.gcd(b.element).monic())


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Exact add / sub / mul by name, for callers that dispatch on a string."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")
