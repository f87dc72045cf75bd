"""
Cluster X-mutation, written once for every scalar kind.

At vertex k: y_k -> 1/y_k, and for i != k
    y_i * (1 + 1/y_k)^(-eps_ik)   when eps_ik > 0,
    y_i * (1 + y_k)^(-eps_ik)     when eps_ik < 0.
The first factor is computed as (y_k / (1 + y_k))^eps_ik through
reciprocals, which keeps rational-function coordinates reduced for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from app.core.pipeline.config_manager import SINGULAR_THRESHOLD
from app.core.quiver.quiver import Quiver
from app.core.ratfun.scalars import is_singular
from app.utils.exceptions import EvaluationSingularError, ValidationError


@dataclass(frozen=True)
class ClusterPoint:
    """Coordinates (y_1..y_l) of a point of the cluster X-variety."""

    coordinates: Tuple

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))

    @classmethod
    def checked(cls, values: Sequence, threshold: float = SINGULAR_THRESHOLD) -> "ClusterPoint":
        zeros = [i + 1 for i, y in enumerate(values) if is_singular(y, threshold)]
        if zeros:
            raise ValidationError("point leaves (C*)^l", [f"coordinate y{i} is zero" for i in zeros])
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.coordinates)

    def __iter__(self) -> Iterator:
        return iter(self.coordinates)

    def __getitem__(self, i):
        return self.coordinates[i]


def mutate_x(point: Sequence, quiver: Quiver, k: int, *, threshold: float = SINGULAR_THRESHOLD) -> Tuple:
    if len(point) != len(quiver):
        raise ValidationError("dimension mismatch", [f"point has {len(point)} coordinates, quiver {len(quiver)}"])
    if not 0 <= k < len(quiver):
        raise IndexError(f"mutation index {k} out of range for {len(quiver)} vertices")
    yk = point[k]
    if is_singular(yk, threshold):
        raise EvaluationSingularError(f"y{k + 1} vanishes at the mutation vertex")
    column = [int(e) for e in quiver.epsilon[:, k]]

    inverse = 1 / yk
    one_plus = 1 + yk
    if any(e for i, e in enumerate(column) if i != k) and is_singular(one_plus, threshold):
        raise EvaluationSingularError(f"1 + y{k + 1} vanishes at the mutation vertex")
    ratio = None
    if any(e > 0 for i, e in enumerate(column) if i != k):
        ratio = 1 / (1 + inverse)

    out = list(point)
    out[k] = inverse
    for i, e in enumerate(column):
        if i == k or e == 0:
            continue
        if e > 0:
            out[i] = point[i] * ratio ** e
        else:
            out[i] = point[i] * one_plus ** (-e)
    return tuple(out)
