from __future__ import annotations

from typing import Iterable, List, Optional


class ClusterTorsionError(Exception):
    """Generic error for the cluster torsion engine."""

    # stage label ("map", "seed", "solve", ...) attached by the pipeline
    stage: Optional[str] = None


class ValidationError(ClusterTorsionError):
    """Bad user input. Carries every problem found, not only the first."""

    def __init__(self, message: str, errors: Optional[Iterable[str]] = None):
        self.errors: List[str] = list(errors or [])
        if self.errors:
            message = f"{message}: " + "; ".join(self.errors)
        super().__init__(message)


class TriangulationError(ValidationError):
    """Invalid or unflippable triangulation, or a word that does not fit it."""


class EvaluationSingularError(ClusterTorsionError):
    """A denominator (or 1 + y_k) vanished at the evaluation point."""

    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class SizeCapExceededError(ClusterTorsionError):
    """Symbolic expression grew past the configured term cap."""


class ConsistencyError(ClusterTorsionError):
    """Internal consistency failure (quiver mismatch after a program, ...)."""


class ComputationDiagnosis(ClusterTorsionError):
    """Mathematical diagnosis: the computation ran but the hypotheses failed."""


class ConvergenceError(ComputationDiagnosis):
    def __init__(self, message: str, trace: Optional[list] = None):
        self.trace = list(trace or [])
        super().__init__(message)


class SingularJacobianError(ComputationDiagnosis):
    def __init__(self, message: str, condition: float = float("inf")):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class MultiplicityMismatchError(ComputationDiagnosis):
    def __init__(self, found: int, expected: int, report=None):
        self.found = found
        self.expected = expected
        # partially filled TorsionReport, when raised from the pipeline
        self.report = report
        super().__init__(
            f"root t=1 has multiplicity {found}, expected m(n-1) = {expected}"
        )
