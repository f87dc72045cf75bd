"""
Cluster maps as straight-line programs of mutations and permutations.

A ClusterMap stores its initial quiver, the steps, and the quiver reached
after the last step. A MutateStep keeps the quiver it acts on, so running
the program never recomputes quivers; a PermuteStep reorders coordinates
(new coordinate j = old coordinate perm[j]) and may rename the vertices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.cluster.mutation import ClusterPoint, mutate_x
from app.core.pipeline.config_manager import SINGULAR_THRESHOLD
from app.core.quiver.quiver import Quiver, QuiverVertex, mutate_quiver
from app.utils.exceptions import ConsistencyError, EvaluationSingularError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MutateStep:
    vertex: int
    quiver: Quiver          # the quiver the mutation acts on


@dataclass(frozen=True)
class PermuteStep:
    perm: Tuple[int, ...]


Step = Union[MutateStep, PermuteStep]


@dataclass(frozen=True)
class CompiledProgram:
    """Flat arrays of a program, for the numba kernel."""

    kinds: np.ndarray       # int8, 0 = mutate, 1 = permute
    vertices: np.ndarray    # int64 mutation vertex (unused for permutes)
    columns: np.ndarray     # int64 (steps, l): eps[:, k] of the step's quiver
    perms: np.ndarray       # int64 (steps, l)


class ClusterMap:
    def __init__(self, initial: Quiver, steps: Sequence[Step] = (), final: Optional[Quiver] = None):
        self.initial = initial
        self.steps: Tuple[Step, ...] = tuple(steps)
        self.final = final if final is not None else initial

    @classmethod
    def identity(cls, quiver: Quiver) -> "ClusterMap":
        return cls(quiver, (), quiver)

    @property
    def dimension(self) -> int:
        return len(self.initial)

    @property
    def mutation_count(self) -> int:
        return sum(1 for s in self.steps if isinstance(s, MutateStep))

    def then_mutate(self, k: int) -> "ClusterMap":
        step = MutateStep(k, self.final)
        return ClusterMap(self.initial, self.steps + (step,), mutate_quiver(self.final, k))

    def then_permute(self, perm: Sequence[int], vertices: Optional[Sequence[QuiverVertex]] = None) -> "ClusterMap":
        perm = tuple(int(i) for i in perm)
        final = self.final.permuted(perm, vertices)
        return ClusterMap(self.initial, self.steps + (PermuteStep(perm),), final)

    def then(self, other: "ClusterMap") -> "ClusterMap":
        """Run self, then ``other``."""
        if not (self.final.same_exchange_matrix(other.initial) and self.final.vertices == other.initial.vertices):
            raise ConsistencyError("cannot compose: final quiver of the first map differs from the second's initial")
        return ClusterMap(self.initial, self.steps + other.steps, other.final)

    def is_identity(self) -> bool:
        return all(isinstance(s, PermuteStep) and s.perm == tuple(range(len(s.perm))) for s in self.steps)

    @cached_property
    def compiled(self) -> CompiledProgram:
        count = len(self.steps)
        size = self.dimension
        kinds = np.zeros(count, dtype=np.int8)
        vertices = np.zeros(count, dtype=np.int64)
        columns = np.zeros((count, size), dtype=np.int64)
        perms = np.tile(np.arange(size, dtype=np.int64), (count, 1))
        for s, step in enumerate(self.steps):
            if isinstance(step, MutateStep):
                vertices[s] = step.vertex
                columns[s] = step.quiver.epsilon[:, step.vertex]
            else:
                kinds[s] = 1
                perms[s] = step.perm
        return CompiledProgram(kinds, vertices, columns, np.ascontiguousarray(perms))

    # ---------------------------------------------------------------------
    # SERIALISATION
    # ---------------------------------------------------------------------

    def to_dict(self, edge_names: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        steps: List[Dict[str, Any]] = []
        for step in self.steps:
            if isinstance(step, MutateStep):
                steps.append({"mutate": step.vertex})
            else:
                steps.append({"permute": list(step.perm)})
        return {
            "initial": self.initial.to_dict(edge_names),
            "steps": steps,
            "final": self.final.to_dict(edge_names),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClusterMap":
        errors = [f"missing key {key!r}" for key in ("initial", "steps") if key not in data]
        if errors:
            raise ValidationError("bad cluster program", errors)
        m = cls.identity(Quiver.from_dict(data["initial"]))
        final_vertices = None
        if "final" in data:
            final_vertices = [QuiverVertex.from_dict(v) for v in data["final"]["vertices"]]
        for i, raw in enumerate(data["steps"]):
            if "mutate" in raw:
                m = m.then_mutate(int(raw["mutate"]))
            elif "permute" in raw:
                last = i == len(data["steps"]) - 1
                m = m.then_permute(raw["permute"], final_vertices if last else None)
            else:
                raise ValidationError("bad cluster program", [f"step {i}: expected 'mutate' or 'permute'"])
        if "final" in data and not m.final.same_exchange_matrix(Quiver.from_dict(data["final"])):
            raise ConsistencyError("recorded final quiver does not match the replayed program")
        return m

    def __repr__(self) -> str:
        return f"ClusterMap(dimension={self.dimension}, steps={len(self.steps)}, mutations={self.mutation_count})"


def apply_map(m: ClusterMap, point: Sequence, *, threshold: float = SINGULAR_THRESHOLD) -> ClusterPoint:
    """Run the program over the point's own scalar kind."""
    values = tuple(point)
    if len(values) != m.dimension:
        raise ValidationError("dimension mismatch", [f"point has {len(values)} coordinates, map {m.dimension}"])
    for s, step in enumerate(m.steps):
        if isinstance(step, MutateStep):
            try:
                values = mutate_x(values, step.quiver, step.vertex, threshold=threshold)
            except EvaluationSingularError as exc:
                raise EvaluationSingularError(str(exc), step=s) from exc
        else:
            values = tuple(values[i] for i in step.perm)
    return ClusterPoint(values)


def compose(m1: ClusterMap, m2: ClusterMap) -> ClusterMap:
    """m1 followed by m2."""
    return m1.then(m2)
