"""
Fixed points of cluster maps: damped Newton iteration on phi*(y) - y.

Fixed points of a mapping-class map are never isolated: the set of fixed
points through a geometric one has dimension m(n-1), the boundary
holonomy deformations, so J - I is singular there. The solver therefore

* pins the Casimirs of the quiver (monomials prod y_i^{v_i} over the kernel
  of the exchange matrix, i.e. the boundary eigenvalues) to a target,
  1 by default, which is the unipotent boundary of a complete structure;
* takes least-squares Newton steps (scipy.linalg.lstsq), which stay
  well-defined when the stacked system is rank deficient.

Each step is halved until the residual norm drops (at most
``max_halvings`` times) or the iterate would leave (C*)^l.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg
from tqdm import tqdm

from app.core.cluster.kernels import run_compiled
from app.core.cluster.program import ClusterMap
from app.core.pipeline.config_manager import ANNULUS, NewtonOptions
from app.utils.exceptions import (
    ComputationDiagnosis,
    ConvergenceError,
    EvaluationSingularError,
    SingularJacobianError,
    ValidationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedPointResult:
    point: np.ndarray
    residual: float             # max |phi*(y) - y|
    casimir_residual: float     # max |K(y) - target| (0 when not pinned)
    iterations: int
    trace: Tuple[dict, ...] = field(repr=False)
    degenerate: bool = False
    seed_index: Optional[int] = None


class _FixedPointSystem:
    def __init__(self, m: ClusterMap, options: NewtonOptions):
        self.m = m
        self.options = options
        self.size = m.dimension
        basis = m.initial.casimir_basis() if options.casimir_target is not None else []
        self.casimirs = np.array(basis, dtype=np.int64).reshape(len(basis), self.size)
        self.target = complex(options.casimir_target) if options.casimir_target is not None else 0j
        self.identity = np.eye(self.size, dtype=np.complex128)

    def evaluate(self, y: np.ndarray):
        """Stacked residual, stacked Jacobian, fixed-point residual, Casimir residual."""
        f, grad = run_compiled(self.m.compiled, y, self.options.singular_threshold)
        fixed = f - y
        jac = grad - self.identity
        if not len(self.casimirs):
            return fixed, jac, float(np.max(np.abs(fixed), initial=0.0)), 0.0
        values = np.array([np.prod(y ** v) for v in self.casimirs], dtype=np.complex128)
        cas = values - self.target
        cas_jac = (self.casimirs * values[:, None]) / y[None, :]
        residual = np.concatenate([fixed, cas])
        matrix = np.vstack([jac, cas_jac])
        return (
            residual,
            matrix,
            float(np.max(np.abs(fixed), initial=0.0)),
            float(np.max(np.abs(cas), initial=0.0)),
        )


def _converged(fixed_res: float, cas_res: float, y: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.max(np.abs(y))))
    return fixed_res < tol * scale and cas_res < tol * scale


def solve_fixed_point(
    m: ClusterMap,
    seed: Sequence[complex],
    options: NewtonOptions = NewtonOptions(),
    *,
    seed_index: Optional[int] = None,
) -> FixedPointResult:
    y = np.asarray(seed, dtype=np.complex128).copy()
    if y.shape != (m.dimension,):
        raise ValidationError("dimension mismatch", [f"seed has {y.size} coordinates, map {m.dimension}"])
    if np.min(np.abs(y), initial=np.inf) < options.singular_threshold:
        raise ValidationError("seed leaves (C*)^l", ["a seed coordinate is zero"])

    system = _FixedPointSystem(m, options)
    f, grad = run_compiled(m.compiled, y, options.singular_threshold)
    if np.max(np.abs(grad - system.identity), initial=0.0) == 0.0:
        residual = float(np.max(np.abs(f - y), initial=0.0))
        if residual < options.tol:
            logger.info("map is the identity near the seed; returning the seed as a degenerate fixed point")
            return FixedPointResult(y, residual, 0.0, 0, (), degenerate=True, seed_index=seed_index)

    trace: List[dict] = []
    for iteration in range(options.maxiter + 1):
        F, A, fixed_res, cas_res = system.evaluate(y)
        norm = float(np.linalg.norm(F))
        entry = {"iteration": iteration, "residual": fixed_res, "casimir_residual": cas_res}
        trace.append(entry)
        if _converged(fixed_res, cas_res, y, options.tol):
            logger.debug("converged after %d iterations (residual %.2e)", iteration, fixed_res)
            return FixedPointResult(y, fixed_res, cas_res, iteration, tuple(trace), seed_index=seed_index)
        if iteration == options.maxiter:
            break

        step, _, rank, singular_values = linalg.lstsq(A, -F)
        condition = (
            float(singular_values[0] / singular_values[-1])
            if len(singular_values) and singular_values[-1] > 0
            else float("inf")
        )
        entry["condition"] = condition
        if not np.all(np.isfinite(step)):
            raise SingularJacobianError("Newton step is not finite", condition)

        damping = 1.0
        accepted = False
        for _ in range(options.max_halvings + 1):
            trial = y + damping * step
            if np.min(np.abs(trial)) >= options.singular_threshold:
                try:
                    F_trial = system.evaluate(trial)[0]
                except EvaluationSingularError:
                    F_trial = None
                if F_trial is not None and np.linalg.norm(F_trial) < norm:
                    y = trial
                    accepted = True
                    break
            damping *= 0.5
        entry["damping"] = damping
        if not accepted:
            if rank < A.shape[1]:
                raise SingularJacobianError(
                    f"no damped Newton step reduces the residual {norm:.3e} (rank {rank} of {A.shape[1]})",
                    condition,
                )
            raise ConvergenceError(f"Newton stalled at residual {norm:.3e}", trace)

    raise ConvergenceError(
        f"no convergence in {options.maxiter} iterations (residual {trace[-1]['residual']:.3e})", trace
    )


# =============================================================================
# MULTISTART
# =============================================================================

@dataclass(frozen=True)
class StartOutcome:
    seed_index: int
    seed: np.ndarray
    result: Optional[FixedPointResult]
    error: Optional[str] = None


def sample_annulus(
    rng: np.random.Generator,
    size: int,
    count: int,
    annulus: Tuple[float, float] = ANNULUS,
) -> np.ndarray:
    """``count`` points with coordinates log-uniform in |z| over the annulus."""
    low, high = annulus
    radius = np.exp(rng.uniform(np.log(low), np.log(high), size=(count, size)))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=(count, size))
    return radius * np.exp(1j * angle)


def multistart(
    m: ClusterMap,
    options: NewtonOptions = NewtonOptions(),
    *,
    starts: int,
    rng_seed: int,
    annulus: Tuple[float, float] = ANNULUS,
    threads: int = 1,
    progress: bool = False,
) -> List[StartOutcome]:
    """Solve from ``starts`` random seeds; outcomes come back in seed order."""
    rng = np.random.default_rng(rng_seed)
    seeds = sample_annulus(rng, m.dimension, starts, annulus)
    # compile once before fanning out
    _ = m.compiled

    def work(index: int) -> StartOutcome:
        try:
            result = solve_fixed_point(m, seeds[index], options, seed_index=index)
            return StartOutcome(index, seeds[index], result)
        except (ComputationDiagnosis, EvaluationSingularError) as exc:
            return StartOutcome(index, seeds[index], None, str(exc))

    outcomes: List[Optional[StartOutcome]] = [None] * starts
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = {pool.submit(work, i): i for i in range(starts)}
        with tqdm(total=starts, desc="multistart", disable=not progress, leave=False) as bar:
            for future in futures:
                outcome = future.result()
                outcomes[outcome.seed_index] = outcome
                bar.update(1)
    solved = sum(1 for o in outcomes if o.result is not None)
    logger.info("multistart: %d of %d starts converged", solved, starts)
    return outcomes


def best_outcome(outcomes: Sequence[StartOutcome]) -> Optional[StartOutcome]:
    """
    Lowest residual among converged starts, ties to the earliest seed.
    Degenerate starts count only when nothing else converged.
    """
    solved = [o for o in outcomes if o.result is not None]
    good = [o for o in solved if not o.result.degenerate] or solved
    if not good:
        return None
    return min(good, key=lambda o: (o.result.residual, o.seed_index))


def distinct_solutions(outcomes: Sequence[StartOutcome], tol: float = 1e-6) -> List[StartOutcome]:
    """One outcome per distinct fixed point, keeping the earliest seed of each."""
    kept: List[StartOutcome] = []
    for outcome in outcomes:
        if outcome.result is None or outcome.result.degenerate:
            continue
        point = outcome.result.point
        if all(np.max(np.abs(point - k.result.point)) > tol for k in kept):
            kept.append(outcome)
    return kept
