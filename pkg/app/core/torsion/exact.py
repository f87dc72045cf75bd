"""
Exact recomputation over Q(sqrt(d)).

A numeric fixed point whose coordinates are recognised as a + b*sqrt(d)
is checked to be fixed exactly, then the Jacobian (dual numbers with
object gradients) and det(tJ - I) (exact Faddeev-LeVerrier) are redone
with no tolerance at all.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from app.core.cluster.program import ClusterMap, apply_map
from app.core.pipeline.config_manager import QUADRATIC_DETECT_TOLERANCE, QUADRATIC_MAX_DENOMINATOR
from app.core.ratfun.scalars import QuadraticFieldScalar, is_squarefree, detect_quadratic_point, to_complex
from app.core.ratfun.unipoly import UniPoly
from app.core.torsion.alexander import alexander_polynomial
from app.core.torsion.jacobian import dual_jacobian
from app.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactResult:
    discriminant: int
    point: Tuple[QuadraticFieldScalar, ...]
    jacobian: np.ndarray
    alexander: UniPoly


def exact_point(
    point: Sequence[complex],
    d: int,
    *,
    tol: float = QUADRATIC_DETECT_TOLERANCE,
    max_denominator: int = QUADRATIC_MAX_DENOMINATOR,
) -> Tuple[QuadraticFieldScalar, ...]:
    if d >= 0 or not is_squarefree(d):
        raise ValidationError("bad discriminant", [f"d must be a negative squarefree integer, got {d}"])
    found = detect_quadratic_point(point, d, tol=tol, max_denominator=max_denominator)
    if found is None:
        raise ValidationError(
            "fixed point not recognised", [f"some coordinate is not a + b*sqrt({d}) within {tol:g}"]
        )
    return tuple(found)


def verify_exact_fixed_point(m: ClusterMap, point: Sequence[QuadraticFieldScalar]) -> None:
    image = apply_map(m, point)
    moved = [i + 1 for i, (x, y) in enumerate(zip(point, image)) if x != y]
    if moved:
        raise ValidationError(
            "recognised point is not an exact fixed point", [f"y{i} is moved by the map" for i in moved]
        )


def exact_alexander(
    m: ClusterMap,
    numeric_point: Sequence[complex],
    d: int,
    *,
    tol: float = QUADRATIC_DETECT_TOLERANCE,
    max_denominator: int = QUADRATIC_MAX_DENOMINATOR,
) -> ExactResult:
    point = exact_point(numeric_point, d, tol=tol, max_denominator=max_denominator)
    verify_exact_fixed_point(m, point)
    _, jacobian = dual_jacobian(m, point)
    poly = alexander_polynomial(jacobian)
    poly = rational_coefficients(poly) or poly
    logger.info("exact Alexander polynomial over Q(sqrt(%d)) of degree %d", d, poly.degree)
    return ExactResult(discriminant=d, point=point, jacobian=jacobian, alexander=poly)


def agrees_with_numeric(exact: UniPoly, numeric: UniPoly, tol: float) -> bool:
    """Coefficientwise comparison within ``tol`` relative to the coefficient scale."""
    size = max(len(exact), len(numeric))
    a = [to_complex(exact[k]) if k < len(exact) else 0j for k in range(size)]
    b = [to_complex(numeric[k]) if k < len(numeric) else 0j for k in range(size)]
    scale = max([1.0] + [abs(x) for x in a])
    return all(abs(x - y) <= tol * scale for x, y in zip(a, b))


def rational_coefficients(poly: UniPoly) -> Optional[UniPoly]:
    """Drop the sqrt(d) parts when all of them vanish."""
    out = []
    for c in poly.coefficients:
        if isinstance(c, QuadraticFieldScalar):
            if not c.is_rational:
                return None
            c = c.a
        out.append(c)
    return UniPoly(out)
