"""
Forward-mode dual numbers: a value plus its gradient with respect to the
seeded input coordinates.

The gradient is a numpy array: complex128 when the value is a float/complex,
object dtype when it is exact (Fraction or QuadraticFieldScalar), so the
same class gives both the numerical and the exact Jacobian.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

import numpy as np

from app.core.ratfun.scalars import QuadraticFieldScalar


def _is_float_kind(x) -> bool:
    return isinstance(x, (float, complex, np.floating, np.complexfloating))


class DualScalar:
    __slots__ = ("value", "gradient")

    def __init__(self, value, gradient: np.ndarray):
        self.value = value
        self.gradient = gradient

    @property
    def exact(self) -> bool:
        return self.gradient.dtype == object

    @classmethod
    def seed(cls, point: Sequence) -> List["DualScalar"]:
        """One dual per coordinate, gradient = unit vector e_i."""
        size = len(point)
        exact = not any(_is_float_kind(x) for x in point)
        out = []
        for i, x in enumerate(point):
            if exact:
                grad = np.array([Fraction(int(i == j)) for j in range(size)], dtype=object)
                out.append(cls(x, grad))
            else:
                grad = np.zeros(size, dtype=np.complex128)
                grad[i] = 1.0
                out.append(cls(complex(x), grad))
        return out

    def _scalar(self, other):
        # bring a plain number to this dual's kind
        if self.exact:
            return other
        return complex(other)

    def coerce_coefficient(self, coeff: Fraction) -> "DualScalar":
        return DualScalar(self._scalar(coeff), self.gradient * 0)

    def _lift(self, other):
        if isinstance(other, DualScalar):
            return other
        if isinstance(other, (int, Fraction, float, complex, QuadraticFieldScalar)):
            return DualScalar(self._scalar(other), self.gradient * 0)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return DualScalar(self.value + other.value, self.gradient + other.gradient)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.value, -self.gradient)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return DualScalar(self.value - other.value, self.gradient - other.gradient)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return DualScalar(
            self.value * other.value,
            self.gradient * other.value + other.gradient * self.value,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "DualScalar":
        inv = 1 / self.value
        return DualScalar(inv, -self.gradient * (inv * inv))

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
        if exponent == 0:
            return DualScalar(self._scalar(1), self.gradient * 0)
        power = self.value ** (exponent - 1)
        return DualScalar(power * self.value, self.gradient * (exponent * power))

    def __abs__(self) -> float:
        return abs(self.value)

    def __repr__(self) -> str:
        return f"DualScalar({self.value!r}, {self.gradient!r})"


def jacobian_rows(duals: Sequence[DualScalar]) -> np.ndarray:
    """Stack gradients: row c holds d(output_c)/d(input_i)."""
    return np.vstack([d.gradient for d in duals])
