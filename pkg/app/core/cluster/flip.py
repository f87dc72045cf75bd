"""
The cluster map of a single flip at rank n.

The two triangles on the flipped edge form a quadrilateral with corners
X, Y on the edge and apexes P (of t) and Q (of u). Seen as the upper and
lower faces of a tetrahedron with vertices q0 = X, q1 = Q, q2 = Y, q3 = P,
every vertex inside the quadrilateral gets tetrahedral coordinates
x = (x0, x1, x2, x3) summing to n: old t occupies x1 = 0, old u occupies
x3 = 0. The flip is the layered sequence of octahedron moves: for
h = 0 .. n-2, mutate (in ascending coordinate order) every vertex with
x1 + x3 == h and x0, x2 >= 1, moving it by (-1, +1, -1, +1). Vertices end
on the faces x2 = 0 (new t) or x0 = 0 (new u). In total n(n^2 - 1)/6
mutations; (n-1)^2 for n <= 3.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

from app.core.cluster.program import ClusterMap
from app.core.quiver.quiver import Quiver, QuiverVertex, build_quiver, locate
from app.core.surface.triangulation import Triangulation, flip
from app.utils.exceptions import ConsistencyError, ValidationError

logger = logging.getLogger(__name__)

Tet = Tuple[int, int, int, int]


def _tet_coordinates(tri: Triangulation, quad, vertex: QuiverVertex, n: int) -> Optional[Tet]:
    t, s, u, r = quad
    e = tri.edge_of((t, s))
    if vertex.kind == "edge":
        if vertex.index != e:
            return None
        position = vertex.coords[0]
        if tri.gluings[e][0] != (t, s):
            position = n - position
        _, w = tri.edge_point((t, s), position, n)
        tri_index = t
    elif vertex.index in (t, u):
        w = vertex.coords
        tri_index = vertex.index
    else:
        return None
    if tri_index == t:
        return (w[s], 0, w[(s + 1) % 3], w[(s + 2) % 3])
    return (w[(r + 1) % 3], w[(r + 2) % 3], w[r], 0)


def flip_schedule_size(n: int) -> int:
    return n * (n * n - 1) // 6


def flip_map(
    quiver: Quiver,
    tri: Triangulation,
    edge,
    *,
    check: bool = True,
) -> Tuple[ClusterMap, Triangulation]:
    """
    Cluster map for flipping ``edge`` of ``tri``, from Q_{T,n} (``quiver``,
    any vertex order) to Q_{T',n} in its canonical order. Returns the map
    and the flipped triangulation T'.
    """
    n = quiver.rank
    after = flip(tri, edge)
    quad = after.origin.quad
    t, _, u, _ = quad

    positions: Dict[int, List[int]] = {}
    for index, vertex in enumerate(quiver.vertices):
        coords = _tet_coordinates(tri, quad, vertex, n)
        if coords is not None:
            positions[index] = list(coords)

    m = ClusterMap.identity(quiver)
    for h in range(n - 1):
        layer = sorted(
            (i for i, x in positions.items() if x[1] + x[3] == h and x[0] >= 1 and x[2] >= 1),
            key=lambda i: tuple(positions[i]),
        )
        for i in layer:
            m = m.then_mutate(i)
            x = positions[i]
            positions[i] = [x[0] - 1, x[1] + 1, x[2] - 1, x[3] + 1]

    target = build_quiver(after, n, order=list(range(len(quiver))))
    moved: List[QuiverVertex] = []
    for index, vertex in enumerate(quiver.vertices):
        x = positions.get(index)
        if x is None:
            moved.append(vertex)
        elif x[2] == 0:
            moved.append(locate(after, t, (x[3], x[0], x[1]), n))
        elif x[0] == 0:
            moved.append(locate(after, u, (x[1], x[2], x[3]), n))
        else:
            raise ConsistencyError(f"vertex {vertex} did not reach a face of the tetrahedron")
    where = {v: i for i, v in enumerate(moved)}
    if len(where) != len(moved) or any(v not in where for v in target.vertices):
        raise ConsistencyError("flip schedule does not land on the vertices of the flipped quiver")
    perm = [where[v] for v in target.vertices]
    m = m.then_permute(perm, target.vertices)

    if check and not m.final.same_exchange_matrix(target):
        raise ConsistencyError(
            f"quiver after flipping edge {tri.edge_names[after.origin.edge]} at n={n} "
            "differs from the quiver of the flipped triangulation"
        )
    logger.debug("flip %s at n=%d: %d mutations", tri.edge_names[after.origin.edge], n, m.mutation_count)
    return m, after


def check_quiver_matches(quiver: Quiver, tri: Triangulation) -> None:
    if quiver.rank < 2:
        raise ValidationError("bad rank", [f"quiver rank {quiver.rank}"])
    expected = {v for v in build_quiver(tri, quiver.rank, order=list(range(len(quiver)))).vertices}
    if set(quiver.vertices) != expected:
        raise ConsistencyError("quiver vertices do not belong to the given triangulation")
