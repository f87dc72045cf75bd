"""
End-to-end torsion computation for one mapping class.

map -> seed -> solve -> jacobian -> alexander -> torsion (-> exact)

Every library error leaving a stage carries that stage's name in
``err.stage``. A multiplicity mismatch carries the partial report.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.cluster.embedding import embed_pgl2
from app.core.cluster.kernels import evaluate_with_jacobian
from app.core.cluster.mapping import mapping_class_map, symbolic_map
from app.core.cluster.mutation import ClusterPoint
from app.core.cluster.program import ClusterMap
from app.core.pipeline.config_manager import EngineConfig
from app.core.surface.mapping_word import FlipPlan, MappingWord
from app.core.surface.triangulation import Triangulation
from app.core.torsion.alexander import alexander_polynomial, normalization_exponent, torsion_value
from app.core.torsion.exact import agrees_with_numeric, exact_alexander
from app.core.torsion.jacobian import jacobian_at
from app.core.torsion.report import TorsionReport
from app.core.torsion.solver import (
    FixedPointResult,
    StartOutcome,
    best_outcome,
    distinct_solutions,
    multistart,
    solve_fixed_point,
)
from app.core.ratfun.unipoly import UniPoly
from app.utils.exceptions import (
    ClusterTorsionError,
    ComputationDiagnosis,
    ConvergenceError,
    MultiplicityMismatchError,
    ValidationError,
)

logger = logging.getLogger(__name__)

SEED_STRATEGIES = ("user", "pgl2", "multistart")
MODES = ("numeric", "exact", "symbolic")

Word = Union[str, MappingWord, FlipPlan]


@contextmanager
def stage(name: str) -> Iterator[None]:
    try:
        yield
    except ClusterTorsionError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def default_seed_strategy(n: int) -> str:
    return "multistart" if n == 2 else "pgl2"


def word_label(word: Word) -> str:
    if isinstance(word, FlipPlan):
        names = word.start.edge_names
        return "flips:" + ",".join(names[move.edge] for move in word.moves)
    return str(word)


def spectral_radius(m: ClusterMap, point: Sequence[complex], threshold: float) -> float:
    jac = evaluate_with_jacobian(m, point, threshold)[1]
    return float(np.max(np.abs(np.linalg.eigvals(jac))))


def rank_pgl2_candidates(
    m2: ClusterMap,
    outcomes: Sequence[StartOutcome],
    *,
    threshold: float,
    tol: float = 1e-6,
) -> List[StartOutcome]:
    """Distinct rank-2 fixed points, largest spectral radius of J first."""
    candidates = distinct_solutions(outcomes, tol)
    if not candidates:
        fallback = best_outcome(outcomes)
        return [fallback] if fallback is not None else []
    radius = {
        c.seed_index: round(spectral_radius(m2, c.result.point, threshold), 6) for c in candidates
    }
    return sorted(candidates, key=lambda c: (-radius[c.seed_index], c.seed_index))


def _numeric_polynomial(jac: np.ndarray, config: EngineConfig) -> UniPoly:
    poly = alexander_polynomial(jac)
    snapped = poly.snapped(config.snap_tolerance)
    if snapped is None:
        logger.info("Alexander coefficients are not all integers; keeping complex values")
        return poly
    return snapped


def _evaluate_candidate(
    m: ClusterMap,
    seed: Sequence[complex],
    config: EngineConfig,
    jacobian_method: str,
    update: Callable[[str, int], None],
) -> Tuple[FixedPointResult, np.ndarray, UniPoly]:
    update("Solving phi*(y) = y...", 45)
    with stage("solve"):
        solved = solve_fixed_point(m, seed, config.newton)
    update("Differentiating phi* at the fixed point...", 65)
    with stage("jacobian"):
        symbolic = None
        if jacobian_method == "symbolic":
            symbolic = symbolic_map(m, cap=config.gcd_term_cap)
        jac = jacobian_at(
            m, list(solved.point), method=jacobian_method, symbolic=symbolic,
            threshold=config.newton.singular_threshold,
        )
    update("Expanding det(tJ - I)...", 75)
    with stage("alexander"):
        poly = _numeric_polynomial(jac, config)
    return solved, jac, poly


def full_pipeline(
    tri: Triangulation,
    word: Word,
    n: int,
    seed_strategy: Optional[str] = None,
    *,
    config: Optional[EngineConfig] = None,
    point: Optional[Sequence[complex]] = None,
    mode: str = "numeric",
    discriminant: Optional[int] = None,
    show_progress: bool = False,
    status_callback: Optional[Callable[[str, int], None]] = None,
) -> TorsionReport:
    def update(text, percent):
        if status_callback: status_callback(text, percent)

    config = config or EngineConfig()
    seed_strategy = seed_strategy or default_seed_strategy(n)
    if seed_strategy not in SEED_STRATEGIES:
        raise ValidationError("unknown seed strategy", [f"{seed_strategy!r} is not one of {SEED_STRATEGIES}"])
    if mode not in MODES:
        raise ValidationError("unknown mode", [f"{mode!r} is not one of {MODES}"])
    if mode == "exact" and discriminant is None:
        raise ValidationError("exact mode needs a discriminant", ["pass d, e.g. -3 for Q(sqrt(-3))"])
    if seed_strategy == "user" and point is None:
        raise ValidationError("user seed strategy needs a point")
    threshold = config.newton.singular_threshold
    jacobian_method = "symbolic" if mode == "symbolic" else "kernel"
    m_count = tri.puncture_count
    expected = normalization_exponent(m_count, n)

    # 1) Cluster map of the mapping class
    update(f"Building the cluster map at n={n}...", 5)
    with stage("map"):
        m = mapping_class_map(tri, word, n)

    # 2) Seeds, in the order they are tried
    update(f"Seeding ({seed_strategy})...", 15)
    with stage("seed"):
        if seed_strategy == "user":
            seeds = [(None, ClusterPoint.checked(list(point), threshold).coordinates)]
        elif seed_strategy == "multistart":
            outcomes = multistart(
                m, config.newton, starts=config.starts, rng_seed=config.rng_seed,
                annulus=config.annulus, threads=config.threads, progress=show_progress,
            )
            best = best_outcome(outcomes)
            if best is None:
                raise ConvergenceError(f"none of {config.starts} random starts converged at n={n}")
            seeds = [(best.seed_index, best.result.point)]
        else:
            m2 = m if n == 2 else mapping_class_map(tri, word, 2)
            outcomes = multistart(
                m2, config.newton, starts=config.starts, rng_seed=config.rng_seed,
                annulus=config.annulus, threads=config.threads, progress=show_progress,
            )
            ranked = rank_pgl2_candidates(m2, outcomes, threshold=threshold)
            if not ranked:
                raise ConvergenceError(f"none of {config.starts} random starts converged at n=2")
            seeds = [(c.seed_index, embed_pgl2(c.result.point, tri, n)) for c in ranked]
            logger.info("%d distinct rank-2 fixed points to lift", len(seeds))

    # 3-5) Solve, differentiate, expand; the first candidate with the right multiplicity wins
    last_error: Optional[ComputationDiagnosis] = None
    for seed_index, seed in seeds:
        try:
            solved, jac, poly = _evaluate_candidate(m, seed, config, jacobian_method, update)
        except ComputationDiagnosis as exc:
            if len(seeds) == 1:
                raise
            logger.info("candidate from seed %s rejected: %s", seed_index, exc)
            last_error = exc
            continue

        found, _ = poly.root_multiplicity(1, config.multiplicity_tolerance)
        report = TorsionReport(
            surface=tri.name or "custom",
            word=word_label(word),
            rank=n,
            boundary_components=m_count,
            fixed_point=tuple(complex(y) for y in solved.point),
            residual=solved.residual,
            alexander=poly,
            t1_multiplicity=found,
            normalization_exponent=expected,
            seed_strategy=seed_strategy,
            seed_index=seed_index,
            casimir_residual=solved.casimir_residual,
            degenerate=solved.degenerate,
            mode=mode,
            diagnostics=list(solved.trace),
        )
        if mode == "symbolic":
            kernel_jac = evaluate_with_jacobian(m, solved.point, threshold)[1]
            report.diagnostics.append({"jacobian_cross_check": float(np.max(np.abs(kernel_jac - jac)))})

        # 6) Torsion
        update("Taking the limit at t = 1...", 85)
        try:
            with stage("torsion"):
                value = torsion_value(
                    poly, m_count, n, tol=config.multiplicity_tolerance, report=report
                )
        except MultiplicityMismatchError as exc:
            if len(seeds) == 1:
                raise
            logger.info("candidate from seed %s has multiplicity %d, not %d", seed_index, exc.found, exc.expected)
            last_error = exc
            continue
        report.torsion, report.torsion_raw = value.value, value.raw

        # 7) Exact recomputation
        if mode == "exact":
            update(f"Recomputing over Q(sqrt({discriminant}))...", 92)
            with stage("exact"):
                exact = exact_alexander(
                    m, solved.point, discriminant,
                    tol=config.quadratic_tolerance,
                )
                report.exact_point = exact.point
                report.exact_alexander = exact.alexander
                report.exact_matches_numeric = agrees_with_numeric(
                    exact.alexander, poly, config.multiplicity_tolerance
                )
                exact_value = torsion_value(exact.alexander, m_count, n, report=report)
                report.torsion, report.torsion_raw = exact_value.value, exact_value.raw
                if not report.exact_matches_numeric:
                    logger.warning("exact and numeric Alexander polynomials differ")

        update("Done.", 100)
        return report

    assert last_error is not None
    raise last_error
