"""
The Fock-Goncharov quiver Q_{T,n} of an ideal triangulation.

Each triangle is cut into n^2 small triangles; the quiver vertices are the
lattice points that are not corners. A point of triangle t has barycentric
weights w = (w0, w1, w2) with w0 + w1 + w2 = n. Arrows run along the small
segments in direction d_s (w_s - 1, w_{s+1} + 1), i.e. parallel to side s
from corner s towards corner s+1, skipping segments that lie on a side.
The exchange matrix sums these contributions over all triangles, so two
triangles sharing an edge can cancel each other's arrows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Dict, Final, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, igcd, ilcm

from app.core.surface.builtin import TORUS
from app.core.surface.triangulation import Triangulation, require_valid
from app.utils.exceptions import ConsistencyError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class QuiverVertex:
    """Location of a vertex: an edge point or a triangle interior point."""

    kind: str                   # "edge" or "face"
    index: int                  # edge index or triangle index
    coords: Tuple[int, ...]     # (p,) along the edge, or (w0, w1, w2)

    def label(self, edge_names: Optional[Sequence[str]] = None) -> str:
        if self.kind == "edge":
            name = edge_names[self.index] if edge_names else f"e{self.index}"
            return f"{name}:{self.coords[0]}"
        return f"t{self.index}:" + ",".join(map(str, self.coords))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index, "coords": list(self.coords)}

    @classmethod
    def from_dict(cls, data: dict) -> "QuiverVertex":
        return cls(str(data["kind"]), int(data["index"]), tuple(int(c) for c in data["coords"]))


class Quiver:
    """Vertices (in a fixed order) and the skew-symmetric exchange matrix."""

    __slots__ = ("rank", "vertices", "epsilon", "_index")

    def __init__(self, rank: int, vertices: Sequence[QuiverVertex], epsilon: np.ndarray):
        epsilon = np.array(epsilon, dtype=np.int64)
        if epsilon.shape != (len(vertices), len(vertices)):
            raise ValidationError(
                "bad quiver", [f"exchange matrix {epsilon.shape} does not match {len(vertices)} vertices"]
            )
        if not np.array_equal(epsilon, -epsilon.T):
            raise ValidationError("bad quiver", ["exchange matrix is not skew-symmetric"])
        epsilon.setflags(write=False)
        self.rank = rank
        self.vertices: Tuple[QuiverVertex, ...] = tuple(vertices)
        self.epsilon = epsilon
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, vertex: QuiverVertex) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise ConsistencyError(f"vertex {vertex} is not in the quiver") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.vertices == other.vertices
            and np.array_equal(self.epsilon, other.epsilon)
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.vertices, self.epsilon.tobytes()))

    def same_exchange_matrix(self, other: "Quiver") -> bool:
        return np.array_equal(self.epsilon, other.epsilon)

    def permuted(self, perm: Sequence[int], vertices: Optional[Sequence[QuiverVertex]] = None) -> "Quiver":
        """New vertex j is old vertex perm[j]."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(len(self))):
            raise ValidationError("bad permutation", [f"{perm.tolist()} is not a permutation of 0..{len(self) - 1}"])
        eps = self.epsilon[np.ix_(perm, perm)]
        labels = vertices if vertices is not None else [self.vertices[i] for i in perm]
        return Quiver(self.rank, labels, eps)

    def casimir_basis(self) -> List[Tuple[int, ...]]:
        """Integer basis of the kernel of the exchange matrix."""
        return integer_kernel(self.epsilon)

    def arrows(self) -> List[Tuple[int, int, int]]:
        """(i, j, multiplicity) for every pair with epsilon[i][j] > 0."""
        rows, cols = np.nonzero(self.epsilon > 0)
        return [(int(i), int(j), int(self.epsilon[i, j])) for i, j in zip(rows, cols)]

    def to_dict(self, edge_names: Optional[Sequence[str]] = None) -> dict:
        return {
            "rank": self.rank,
            "vertices": [dict(v.to_dict(), label=v.label(edge_names)) for v in self.vertices],
            "epsilon": self.epsilon.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Quiver":
        return cls(int(data["rank"]), [QuiverVertex.from_dict(v) for v in data["vertices"]], data["epsilon"])

    def __repr__(self) -> str:
        return f"Quiver(rank={self.rank}, vertices={len(self)}, arrows={len(self.arrows())})"


# =============================================================================
# CONSTRUCTION
# =============================================================================

# Orders that match hand-drawn figures of the once-punctured torus.
# Entry j is the index (in default order) of figure vertex y_{j+1}.
FIGURE_ORDERS: Final[Dict[Tuple[str, int], Tuple[int, ...]]] = {
    (TORUS, 2): (0, 2, 1),
    (TORUS, 3): (1, 0, 4, 7, 3, 5, 2, 6),
}


def lattice_points(n: int) -> List[Tuple[int, int, int]]:
    return [(w0, w1, n - w0 - w1) for w0 in range(n + 1) for w1 in range(n + 1 - w0)]


def locate(tri: Triangulation, t: int, w: Sequence[int], n: int) -> Optional[QuiverVertex]:
    """Canonical vertex at point ``w`` of triangle ``t`` (None at a corner)."""
    zeros = [k for k in range(3) if w[k] == 0]
    if len(zeros) >= 2:
        return None
    if not zeros:
        return QuiverVertex("face", t, tuple(w))
    # the zero weight is the one opposite side k, so the point is on side k
    k = (zeros[0] + 1) % 3
    edge, position = tri.edge_position((t, k), w[(k + 1) % 3], n)
    return QuiverVertex("edge", edge, (position,))


def default_vertices(tri: Triangulation, n: int) -> List[QuiverVertex]:
    edges = [QuiverVertex("edge", e, (p,)) for e in range(tri.edge_count) for p in range(1, n)]
    faces = [
        QuiverVertex("face", t, w)
        for t in range(tri.triangle_count)
        for w in sorted(lattice_points(n))
        if min(w) >= 1
    ]
    return edges + faces


def build_quiver(
    tri: Triangulation,
    n: int,
    *,
    order: Optional[Sequence[int]] = None,
) -> Quiver:
    """
    Q_{T,n}. Vertices follow the default order (edges by index then
    position, then triangle interiors) unless ``order`` picks them from it;
    surfaces with a known figure order use that one by default.
    """
    if not isinstance(n, int) or n < 2:
        raise ValidationError("bad rank", [f"n must be an integer >= 2, got {n!r}"])
    require_valid(tri)
    vertices = default_vertices(tri, n)
    if order is None:
        order = FIGURE_ORDERS.get((tri.name or "", n))
    if order is not None:
        if sorted(order) != list(range(len(vertices))):
            raise ValidationError("bad vertex order", [f"{list(order)} is not a permutation of 0..{len(vertices) - 1}"])
        vertices = [vertices[i] for i in order]

    index = {v: i for i, v in enumerate(vertices)}
    size = len(vertices)
    eps = np.zeros((size, size), dtype=np.int64)
    for t in range(tri.triangle_count):
        for w in lattice_points(n):
            for s in range(3):
                # w_{s+2} = 0 puts the segment on side s itself
                if w[s] == 0 or w[(s + 2) % 3] == 0:
                    continue
                target = list(w)
                target[s] -= 1
                target[(s + 1) % 3] += 1
                src = locate(tri, t, w, n)
                dst = locate(tri, t, target, n)
                i, j = index[src], index[dst]
                eps[i, j] += 1
                eps[j, i] -= 1
    logger.debug("built Q_{T,%d} on %s: %d vertices", n, tri.name, size)
    return Quiver(n, vertices, eps)


def mutate_quiver(q: Quiver, k: int) -> Quiver:
    """Matrix mutation at vertex k."""
    if not 0 <= k < len(q):
        raise IndexError(f"mutation index {k} out of range for {len(q)} vertices")
    eps = q.epsilon
    col = eps[:, k]
    row = eps[k, :]
    new = eps + (np.outer(np.abs(col), row) + np.outer(col, np.abs(row))) // 2
    new[k, :] = -row
    new[:, k] = -col
    return Quiver(q.rank, q.vertices, new)


def vertex_bijection(
    q: Quiver,
    other: Quiver,
    correspondence: Callable[[QuiverVertex], QuiverVertex],
) -> Tuple[int, ...]:
    """
    perm with perm[i] = index in ``other`` of correspondence(q.vertices[i]).
    """
    if q.rank != other.rank:
        raise ValidationError("rank mismatch", [f"{q.rank} vs {other.rank}"])
    if len(q) != len(other):
        raise ValidationError("vertex count mismatch", [f"{len(q)} vs {len(other)}"])
    perm = tuple(other.index(correspondence(v)) for v in q.vertices)
    if len(set(perm)) != len(perm):
        raise ConsistencyError("vertex correspondence is not a bijection")
    return perm


# =============================================================================
# CASIMIRS
# =============================================================================

def integer_kernel(matrix: np.ndarray) -> List[Tuple[int, ...]]:
    """Exact rational nullspace; each basis vector scaled to primitive integers."""
    arr = np.asarray(matrix)
    rows, cols = arr.shape
    basis = []
    for vec in Matrix(rows, cols, [int(x) for x in arr.ravel()]).nullspace():
        scale = reduce(ilcm, (x.q for x in vec), 1)
        ints = [int(x * scale) for x in vec]
        common = reduce(igcd, ints, 0)
        basis.append(tuple(x // common for x in ints))
    return basis
