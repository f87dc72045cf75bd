"""
Twisted Alexander polynomial det(tJ - I) and the torsion limit at t = 1.

The characteristic polynomial p_J(lambda) = sum c_k lambda^k comes from the
Faddeev-LeVerrier recursion, which only needs ring operations and division
by integers, so the same code runs on complex matrices and on exact
(object-dtype) ones. Then det(tJ - I) = (-1)^l * sum_j c_{l-j} t^j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np

from app.core.pipeline.config_manager import MULTIPLICITY_TOLERANCE
from app.core.ratfun.scalars import QuadraticFieldScalar, to_complex
from app.core.ratfun.unipoly import UniPoly
from app.utils.exceptions import MultiplicityMismatchError, ValidationError

logger = logging.getLogger(__name__)


def _is_exact_matrix(matrix: np.ndarray) -> bool:
    return matrix.dtype == object


def characteristic_coefficients(matrix: np.ndarray) -> List:
    """[c_0, ..., c_l] with det(lambda*I - A) = sum c_k lambda^k."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("bad matrix", [f"expected a square matrix, got shape {a.shape}"])
    size = a.shape[0]
    exact = _is_exact_matrix(a)
    if exact:
        identity = np.empty((size, size), dtype=object)
        for i in range(size):
            for j in range(size):
                identity[i, j] = Fraction(int(i == j))
    else:
        a = a.astype(np.complex128)
        identity = np.eye(size, dtype=np.complex128)

    coeffs = [None] * (size + 1)
    coeffs[size] = Fraction(1) if exact else 1.0 + 0.0j
    m_k = identity * 0
    for k in range(1, size + 1):
        m_k = a.dot(m_k) + identity * coeffs[size - k + 1]
        am = a.dot(m_k)
        trace = am[0, 0]
        for i in range(1, size):
            trace = trace + am[i, i]
        coeffs[size - k] = -trace / k
    return coeffs


def alexander_polynomial(matrix: np.ndarray) -> UniPoly:
    """det(tJ - I) as a polynomial in t."""
    coeffs = characteristic_coefficients(matrix)
    size = len(coeffs) - 1
    sign = -1 if size % 2 else 1
    return UniPoly(sign * coeffs[size - j] for j in range(size + 1))


def canonical_sign(value):
    """Representative of {value, -value}: first non-zero real/rational part positive."""
    if isinstance(value, QuadraticFieldScalar):
        if value.a < 0 or (value.a == 0 and value.b < 0):
            return -value
        return value
    if isinstance(value, (int, Fraction)):
        return abs(value)
    z = to_complex(value)
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        return -z
    return z


@dataclass(frozen=True)
class TorsionValue:
    raw: object                 # limit of p(t)/(t-1)^k at t = 1, sign as computed
    value: object               # canonical representative of {raw, -raw}
    multiplicity: int
    cofactor: UniPoly


def torsion_value(
    p: UniPoly,
    boundary_components: int,
    n: int,
    *,
    tol: float = MULTIPLICITY_TOLERANCE,
    report=None,
) -> TorsionValue:
    """
    Limit of p(t) / (t - 1)^{m(n-1)} at t = 1. The multiplicity of t = 1
    must be exactly m(n-1); otherwise the regularity hypothesis fails and
    MultiplicityMismatchError carries both numbers.
    """
    expected = boundary_components * (n - 1)
    try:
        cofactor = p.divide_by_linear_power(expected, tol)
    except MultiplicityMismatchError as exc:
        raise MultiplicityMismatchError(exc.found, expected, report) from None
    extra, _ = cofactor.root_multiplicity(1, tol)
    if extra:
        raise MultiplicityMismatchError(expected + extra, expected, report)
    raw = cofactor.eval_at(1)
    if isinstance(raw, QuadraticFieldScalar) and raw.is_rational:
        raw = raw.a
    if isinstance(raw, Fraction) and raw.denominator == 1:
        raw = int(raw)
    logger.info("torsion limit at t=1: %s (multiplicity %d)", raw, expected)
    return TorsionValue(raw=raw, value=canonical_sign(raw), multiplicity=expected, cofactor=cofactor)


def normalization_exponent(boundary_components: int, n: int) -> int:
    return boundary_components * (n - 1)
