"""
Compiled evaluation of cluster programs on complex points.

The kernel carries the value and its forward-mode Jacobian through every
step: row c of ``grad`` is d(current y_c)/d(initial y). Numba cannot raise
our exceptions, so the kernel returns the index of the step where a
denominator vanished (-1 when none did) and the wrapper raises.
"""

from __future__ import annotations

import logging
from typing import Sequence, Tuple

import numpy as np
from numba import njit

from app.core.cluster.program import ClusterMap, CompiledProgram
from app.core.pipeline.config_manager import SINGULAR_THRESHOLD
from app.utils.exceptions import EvaluationSingularError

logger = logging.getLogger(__name__)

# =============================================================================
# 1. JIT HELPERS
# =============================================================================


@njit(cache=True, nogil=True)
def _ipow_jit(z, m):
    out = 1.0 + 0.0j
    for _ in range(m):
        out *= z
    return out


@njit(cache=True, nogil=True)
def _run_program_jit(kinds, vertices, columns, perms, y0, threshold):
    size = y0.shape[0]
    y = y0.copy()
    grad = np.zeros((size, size), dtype=np.complex128)
    for i in range(size):
        grad[i, i] = 1.0 + 0.0j
    row_k = np.empty(size, dtype=np.complex128)

    for s in range(kinds.shape[0]):
        if kinds[s] == 1:
            y_new = np.empty(size, dtype=np.complex128)
            g_new = np.empty((size, size), dtype=np.complex128)
            for i in range(size):
                src = perms[s, i]
                y_new[i] = y[src]
                for j in range(size):
                    g_new[i, j] = grad[src, j]
            y = y_new
            grad = g_new
            continue

        k = vertices[s]
        yk = y[k]
        if abs(yk) < threshold:
            return y, grad, s
        inv = 1.0 / yk
        one_plus = 1.0 + yk
        for i in range(size):
            if i != k and columns[s, i] != 0 and abs(one_plus) < threshold:
                return y, grad, s
        for j in range(size):
            row_k[j] = grad[k, j]
        ratio = yk / one_plus

        for i in range(size):
            e = columns[s, i]
            if i == k or e == 0:
                continue
            if e > 0:
                f = _ipow_jit(ratio, e)
                df = e * _ipow_jit(ratio, e - 1) / (one_plus * one_plus)
            else:
                m = -e
                f = _ipow_jit(one_plus, m)
                df = m * _ipow_jit(one_plus, m - 1)
            yi = y[i]
            for j in range(size):
                grad[i, j] = f * grad[i, j] + yi * df * row_k[j]
            y[i] = yi * f

        for j in range(size):
            grad[k, j] = -inv * inv * row_k[j]
        y[k] = inv
    return y, grad, -1


# =============================================================================
# 2. PUBLIC WRAPPERS
# =============================================================================


def run_compiled(
    program: CompiledProgram,
    point: Sequence[complex],
    threshold: float = SINGULAR_THRESHOLD,
) -> Tuple[np.ndarray, np.ndarray]:
    y0 = np.ascontiguousarray(np.asarray(point, dtype=np.complex128))
    y, grad, bad_step = _run_program_jit(
        program.kinds, program.vertices, program.columns, program.perms, y0, threshold
    )
    if bad_step >= 0:
        raise EvaluationSingularError("denominator vanishes during the numeric program", step=int(bad_step))
    return y, grad


def evaluate_numeric(m: ClusterMap, point: Sequence[complex], threshold: float = SINGULAR_THRESHOLD) -> np.ndarray:
    return run_compiled(m.compiled, point, threshold)[0]


def evaluate_with_jacobian(
    m: ClusterMap,
    point: Sequence[complex],
    threshold: float = SINGULAR_THRESHOLD,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Value and Jacobian at ``point``. The Jacobian follows the convention
    J[i, j] = d phi(y)_j / d y_i (rows indexed by the input coordinate).
    """
    y, grad = run_compiled(m.compiled, point, threshold)
    return y, grad.T.copy()
