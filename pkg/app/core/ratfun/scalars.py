"""
Scalar kinds shared by the engine, and the helpers that treat them alike.

Coordinates are evaluated over one of: complex floats, exact rationals
(Fraction), exact elements a + b*sqrt(d) of a quadratic field
(QuadraticFieldScalar, backed by sympy's algebraic number fields), dual
numbers (DualScalar, see dual.py) or rational functions (RationalFunction,
see rational.py).
"""

from __future__ import annotations

import cmath
import math
import numbers
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from sympy import sqrt
from sympy.ntheory import factorint
from sympy.polys.domains import QQ
from sympy.polys.domains.algebraicfield import AlgebraicField

from app.core.pipeline.config_manager import (
    QUADRATIC_DETECT_TOLERANCE,
    QUADRATIC_MAX_DENOMINATOR,
    SINGULAR_THRESHOLD,
)

Rational = Union[int, Fraction]


def is_singular(x, threshold: float = SINGULAR_THRESHOLD) -> bool:
    """Zero test: exact kinds compare with 0, floating kinds use ``threshold``."""
    if hasattr(x, "gradient"):
        return is_singular(x.value, threshold)
    if hasattr(x, "is_zero"):
        return x.is_zero()
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) < threshold


def to_complex(x) -> complex:
    if isinstance(x, numbers.Complex):
        return complex(x)
    if hasattr(x, "__complex__"):
        return complex(x)
    return complex(float(x))


def snap_integer(z: complex, tol: float) -> Optional[int]:
    """Nearest integer to ``z`` when it lies within ``tol``, else None."""
    z = to_complex(z)
    k = round(z.real)
    if abs(z - k) <= tol:
        return int(k)
    return None


def is_squarefree(d: int) -> bool:
    return d != 0 and all(e == 1 for e in factorint(abs(d)).values())


@lru_cache(maxsize=None)
def quadratic_field(d: int) -> AlgebraicField:
    """QQ(sqrt(d)); its elements are stored as b*sqrt(d) + a."""
    if d in (0, 1) or not is_squarefree(d):
        raise ValueError(f"d must be squarefree and not 0 or 1, got {d}")
    return QQ.algebraic_field(sqrt(d))


def _qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


# =============================================================================
# QUADRATIC FIELD ELEMENTS
# =============================================================================

class QuadraticFieldScalar:
    """Exact a + b*sqrt(d), d a squarefree integer other than 0 and 1."""

    __slots__ = ("element", "d")

    def __init__(self, a: Rational, b: Rational, d: int):
        field = quadratic_field(int(d))
        self.d = int(d)
        self.element = field([_qq(b), _qq(a)])

    @classmethod
    def _wrap(cls, element, d: int) -> "QuadraticFieldScalar":
        obj = cls.__new__(cls)
        obj.element = element
        obj.d = d
        return obj

    @property
    def a(self) -> Fraction:
        coeffs = self.element.to_list()
        return _fraction(coeffs[-1]) if coeffs else Fraction(0)

    @property
    def b(self) -> Fraction:
        coeffs = self.element.to_list()
        return _fraction(coeffs[-2]) if len(coeffs) > 1 else Fraction(0)

    def _lift(self, other) -> Optional["QuadraticFieldScalar"]:
        if isinstance(other, QuadraticFieldScalar):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt({self.d})) with Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticFieldScalar(other, 0, self.d)
        return None

    def coerce_coefficient(self, coeff: Fraction) -> "QuadraticFieldScalar":
        return QuadraticFieldScalar(coeff, 0, self.d)

    # --- field operations ---------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return QuadraticFieldScalar._wrap(self.element + other.element, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticFieldScalar._wrap(-self.element, self.d)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return QuadraticFieldScalar._wrap(self.element - other.element, self.d)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return QuadraticFieldScalar._wrap(self.element * other.element, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticFieldScalar":
        return QuadraticFieldScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        a, b = self.a, self.b
        return a * a - self.d * b * b

    def reciprocal(self) -> "QuadraticFieldScalar":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero in a quadratic field")
        return QuadraticFieldScalar._wrap(quadratic_field(self.d).one / self.element, self.d)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, exponent: int):
        exponent = int(exponent)
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        return QuadraticFieldScalar._wrap(self.element ** exponent, self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticFieldScalar):
            return self.d == other.d and self.element == other.element
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def is_zero(self) -> bool:
        return not self.element.to_list()

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __complex__(self) -> complex:
        root = cmath.sqrt(self.d)
        return complex(float(self.a)) + float(self.b) * root

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self) -> str:
        return f"QuadraticFieldScalar({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        root = f"sqrt({self.d})"
        if b == 1:
            tail = root
        elif b == -1:
            tail = f"-{root}"
        else:
            tail = f"{b}*{root}"
        if a == 0:
            return tail
        sign = "" if tail.startswith("-") else "+"
        return f"{a}{sign}{tail}"

    @classmethod
    def from_complex(
        cls,
        z: complex,
        d: int,
        *,
        tol: float = QUADRATIC_DETECT_TOLERANCE,
        max_denominator: int = QUADRATIC_MAX_DENOMINATOR,
    ) -> Optional["QuadraticFieldScalar"]:
        """
        Recognise ``z`` as a + b*sqrt(d) with small-denominator rationals.

        Only imaginary fields (d < 0) are supported: there the real and
        imaginary parts pin down a and b separately. Returns None when no
        candidate lies within ``tol``.
        """
        if d >= 0:
            raise ValueError("detection from a complex value needs d < 0")
        z = to_complex(z)
        scale = math.sqrt(-d)
        a = Fraction(z.real).limit_denominator(max_denominator)
        b = Fraction(z.imag / scale).limit_denominator(max_denominator)
        candidate = cls(a, b, d)
        if abs(complex(candidate) - z) <= tol * max(1.0, abs(z)):
            return candidate
        return None


def detect_quadratic_point(
    values: Sequence[complex],
    d: int,
    *,
    tol: float = QUADRATIC_DETECT_TOLERANCE,
    max_denominator: int = QUADRATIC_MAX_DENOMINATOR,
) -> Optional[list]:
    """Recognise every coordinate in Q(sqrt(d)); None if any one fails."""
    exact = []
    for z in values:
        found = QuadraticFieldScalar.from_complex(z, d, tol=tol, max_denominator=max_denominator)
        if found is None:
            return None
        exact.append(found)
    return exact
