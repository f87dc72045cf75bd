"""TorsionReport and its two renderings: a JSON document and a text walkthrough."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.core.ratfun.scalars import QuadraticFieldScalar, to_complex
from app.core.ratfun.unipoly import UniPoly, format_unipoly

SCHEMA_VERSION = 1


@dataclass
class TorsionReport:
    surface: str
    word: str
    rank: int
    boundary_components: int
    fixed_point: Tuple
    residual: float
    alexander: UniPoly
    t1_multiplicity: int
    normalization_exponent: int
    torsion: Optional[Any] = None
    torsion_raw: Optional[Any] = None
    seed_strategy: str = "user"
    seed_index: Optional[int] = None
    casimir_residual: float = 0.0
    degenerate: bool = False
    mode: str = "numeric"
    exact_point: Optional[Tuple] = None
    exact_alexander: Optional[UniPoly] = None
    exact_matches_numeric: Optional[bool] = None
    diagnostics: List[dict] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.fixed_point)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def finite_or_none(value: float) -> Optional[float]:
    """JSON has no inf or nan; they are written as null."""
    value = float(value)
    return value if math.isfinite(value) else None


def json_safe(data: Any) -> Any:
    if isinstance(data, dict):
        return {k: json_safe(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [json_safe(v) for v in data]
    if isinstance(data, float):
        return finite_or_none(data)
    return data


def scalar_to_json(x) -> Any:
    """Exact values become strings, everything else a [re, im] pair (non-finite parts null)."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (Fraction, QuadraticFieldScalar)):
        return str(x)
    z = to_complex(x)
    return [finite_or_none(z.real), finite_or_none(z.imag)]


def polynomial_to_json(p: Optional[UniPoly]) -> Optional[List]:
    if p is None:
        return None
    return [scalar_to_json(c) for c in p.coefficients]


def report_to_dict(report: TorsionReport) -> Dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "surface": report.surface,
        "word": report.word,
        "rank": report.rank,
        "boundary_components": report.boundary_components,
        "mode": report.mode,
        "seed": {"strategy": report.seed_strategy, "index": report.seed_index},
        "fixed_point": [scalar_to_json(complex(y)) for y in report.fixed_point],
        "residual": finite_or_none(report.residual),
        "casimir_residual": finite_or_none(report.casimir_residual),
        "degenerate": report.degenerate,
        "alexander": polynomial_to_json(report.alexander),
        "t1_multiplicity": report.t1_multiplicity,
        "normalization_exponent": report.normalization_exponent,
        "torsion": None if report.torsion is None else scalar_to_json(report.torsion),
        "torsion_raw": None if report.torsion_raw is None else scalar_to_json(report.torsion_raw),
        "exact": None if report.exact_alexander is None else {
            "point": [str(y) for y in report.exact_point],
            "alexander": polynomial_to_json(report.exact_alexander),
            "matches_numeric": report.exact_matches_numeric,
        },
        "diagnostics": json_safe(report.diagnostics),
    }


# ---------------------------------------------------------------------------
# TEXT
# ---------------------------------------------------------------------------

def _scalar_text(x, digits: int = 12) -> str:
    if isinstance(x, (int, Fraction, QuadraticFieldScalar)):
        return str(x)
    z = to_complex(x)
    re = round(z.real, digits) + 0.0
    im = round(z.imag, digits) + 0.0
    if im == 0:
        return f"{re:.{digits}g}"
    if re == 0:
        return f"{im:.{digits}g}i"
    return f"{re:.{digits}g}{im:+.{digits}g}i"


def _point_lines(point: Sequence, formatter) -> List[str]:
    return [f"  y{i + 1} = {formatter(y)}" for i, y in enumerate(point)]


def render_text(report: TorsionReport, digits: int = 12) -> str:
    lines = [
        f"surface: {report.surface}   word: {report.word or '(empty)'}   n = {report.rank}",
        f"fixed point ({report.seed_strategy} seed, residual {report.residual:.2e}):",
    ]
    if report.exact_point is not None:
        lines.extend(_point_lines(report.exact_point, str))
    else:
        lines.extend(_point_lines(report.fixed_point, lambda y: _scalar_text(y, digits)))
    if report.degenerate:
        lines.append("the map fixes every point near the seed")

    poly = report.exact_alexander if report.exact_alexander is not None else report.alexander
    lines.append(f"det(tJ - I) = {format_unipoly(poly)}")
    lines.append(
        f"multiplicity of t = 1: {report.t1_multiplicity} "
        f"(expected m(n-1) = {report.normalization_exponent})"
    )
    if report.torsion is not None:
        lines.append(
            f"torsion = lim det(tJ - I)/(t-1)^{report.normalization_exponent} "
            f"= {_scalar_text(report.torsion_raw, digits)}   (up to sign: {_scalar_text(report.torsion, digits)})"
        )
    if report.exact_matches_numeric is not None:
        lines.append("exact and numeric polynomials agree" if report.exact_matches_numeric
                     else "exact and numeric polynomials DIFFER")
    return "\n".join(lines) + "\n"

