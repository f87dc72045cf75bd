"""
Numerical configuration of the engine.

Every tolerance used by the library lives here, so a run can be reproduced
from its EngineConfig alone. Defaults are module constants; EngineConfig
bundles them per run and can be overridden from the CLI or the environment.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from typing import Final, Optional, Tuple

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# CONSTANTS
# ---------------------------------------------------------------------------

SINGULAR_THRESHOLD: Final[float] = 1e-12      # |x| below this counts as zero
SNAP_TOLERANCE: Final[float] = 1e-8           # coefficient -> integer snapping
QUADRATIC_DETECT_TOLERANCE: Final[float] = 1e-9
QUADRATIC_MAX_DENOMINATOR: Final[int] = 1000
GCD_TERM_CAP: Final[int] = 200_000            # gcds skipped above this product of term counts

NEWTON_TOLERANCE: Final[float] = 1e-12
NEWTON_MAX_ITER: Final[int] = 100
NEWTON_MAX_HALVINGS: Final[int] = 20

ANNULUS: Final[Tuple[float, float]] = (0.2, 5.0)
DEFAULT_STARTS: Final[int] = 100
DEFAULT_RNG_SEED: Final[int] = 20240229

MULTIPLICITY_TOLERANCE: Final[float] = 1e-6

THREADS_ENV: Final[str] = "MTT_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        logger.warning("Ignoring invalid %s=%r", THREADS_ENV, raw)
    return min(8, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# RUN CONFIGURATION
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonOptions:
    tol: float = NEWTON_TOLERANCE
    maxiter: int = NEWTON_MAX_ITER
    max_halvings: int = NEWTON_MAX_HALVINGS
    singular_threshold: float = SINGULAR_THRESHOLD
    # Casimir monomials are pinned to this value (1 = unipotent boundary).
    # None leaves the boundary free and takes minimum-norm steps.
    casimir_target: Optional[complex] = 1.0


@dataclass(frozen=True)
class EngineConfig:
    newton: NewtonOptions = field(default_factory=NewtonOptions)
    snap_tolerance: float = SNAP_TOLERANCE
    quadratic_tolerance: float = QUADRATIC_DETECT_TOLERANCE
    multiplicity_tolerance: float = MULTIPLICITY_TOLERANCE
    gcd_term_cap: int = GCD_TERM_CAP
    starts: int = DEFAULT_STARTS
    rng_seed: int = DEFAULT_RNG_SEED
    annulus: Tuple[float, float] = ANNULUS
    threads: int = field(default_factory=default_threads)

    def with_overrides(self, **changes) -> "EngineConfig":
        """Return a copy with the non-None entries of ``changes`` applied."""
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)


def load_config(**overrides) -> EngineConfig:
    """Defaults, then MTT_THREADS, then explicit overrides (None entries are ignored)."""
    return EngineConfig().with_overrides(**overrides)
