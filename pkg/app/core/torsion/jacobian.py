"""
Jacobians of cluster maps.

J[i, j] = d phi*(y_j) / d y_i. Three routes: the compiled forward-mode
kernel (complex points), dual numbers through the generic program (any
scalar kind, exact included), and derivatives of the symbolic components.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from app.core.cluster.kernels import evaluate_with_jacobian
from app.core.cluster.mapping import SymbolicMap
from app.core.cluster.program import ClusterMap, apply_map
from app.core.pipeline.config_manager import SINGULAR_THRESHOLD
from app.core.ratfun.dual import DualScalar, jacobian_rows
from app.core.ratfun.rational import rat_derive
from app.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)

METHODS = ("kernel", "dual", "symbolic")


def dual_jacobian(m: ClusterMap, point: Sequence, *, threshold: float = SINGULAR_THRESHOLD):
    """Value and Jacobian through DualScalar; exact points give exact matrices."""
    seeds = DualScalar.seed(list(point))
    result = apply_map(m, seeds, threshold=threshold)
    value = [d.value for d in result]
    rows = jacobian_rows(list(result))
    return value, rows.T.copy()


def symbolic_jacobian(sym: SymbolicMap, point: Sequence, *, threshold: float = SINGULAR_THRESHOLD) -> np.ndarray:
    size = len(sym)
    exact = not any(isinstance(x, (float, complex, np.number)) for x in point)
    jac = np.empty((size, size), dtype=object if exact else np.complex128)
    for j, component in enumerate(sym.components):
        for i in range(size):
            jac[i, j] = rat_derive(component, i).evaluate(point, threshold=threshold)
    return jac


def jacobian_at(
    m: ClusterMap,
    point: Sequence,
    *,
    method: str = "kernel",
    symbolic: Optional[SymbolicMap] = None,
    threshold: float = SINGULAR_THRESHOLD,
) -> np.ndarray:
    if method not in METHODS:
        raise ValidationError("unknown Jacobian method", [f"{method!r} is not one of {METHODS}"])
    if method == "kernel":
        return evaluate_with_jacobian(m, point, threshold)[1]
    if method == "dual":
        return dual_jacobian(m, point, threshold=threshold)[1]
    if symbolic is None:
        raise ValidationError("missing symbolic map", ["method 'symbolic' needs the symbolic components"])
    return symbolic_jacobian(symbolic, point, threshold=threshold)
