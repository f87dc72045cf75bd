"""Cluster maps of whole mapping classes, numeric and symbolic."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple, Union

from app.core.cluster.flip import flip_map
from app.core.cluster.program import ClusterMap, apply_map
from app.core.quiver.quiver import QuiverVertex, build_quiver, locate
from app.core.ratfun.rational import RationalFunction
from app.core.surface.mapping_word import FlipPlan, MappingWord, word_to_flips
from app.core.surface.triangulation import TriangleMap, Triangulation
from app.utils.exceptions import ConsistencyError, SizeCapExceededError

logger = logging.getLogger(__name__)


def transport_vertex(
    tri: Triangulation,
    target: Triangulation,
    rho: TriangleMap,
    vertex: QuiverVertex,
    n: int,
) -> QuiverVertex:
    """Image of a vertex of Q_{tri,n} under the isomorphism rho: tri -> target."""
    if vertex.kind == "face":
        image, w = rho.barycentric(vertex.index, vertex.coords)
    else:
        slot = tri.gluings[vertex.index][0]
        t, w = tri.edge_point(slot, vertex.coords[0], n)
        image, w = rho.barycentric(t, w)
    found = locate(target, image, w, n)
    if found is None:
        raise ConsistencyError(f"vertex {vertex} maps to a puncture")
    return found


def plan_cluster_map(plan: FlipPlan, n: int) -> ClusterMap:
    """Flips of ``plan`` followed by the relabeling back to Q_{T,n}."""
    start = build_quiver(plan.start, n)
    m = ClusterMap.identity(start)
    current = plan.start
    for move in plan.moves:
        piece, current = flip_map(m.final, current, move.edge)
        m = m.then(piece)
    perm = [
        m.final.index(transport_vertex(plan.start, current, plan.relabeling, v, n))
        for v in start.vertices
    ]
    m = m.then_permute(perm, start.vertices)
    if not m.final.same_exchange_matrix(start):
        raise ConsistencyError("mapping class does not return the quiver to itself")
    logger.info(
        "cluster map of %d flips at n=%d: %d mutations on %d coordinates",
        len(plan.moves), n, m.mutation_count, m.dimension,
    )
    return m


def mapping_class_map(tri: Triangulation, word: Union[str, MappingWord, FlipPlan], n: int) -> ClusterMap:
    if isinstance(word, FlipPlan):
        plan = word
    else:
        if isinstance(word, str):
            word = MappingWord.parse(word)
        plan = word_to_flips(tri, word)
    return plan_cluster_map(plan, n)


@dataclass(frozen=True)
class SymbolicMap:
    components: Tuple[RationalFunction, ...]

    @property
    def reduced(self) -> bool:
        return all(f.reduced for f in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> RationalFunction:
        return self.components[i]


def symbolic_map(m: ClusterMap, *, cap: int = None, require_reduced: bool = False) -> SymbolicMap:
    """phi*(y_i) as rational functions of y_1..y_l."""
    size = m.dimension
    variables: List[RationalFunction] = RationalFunction.variables(size)
    if cap is not None:
        for v in variables:
            v.cap = cap
    result = apply_map(m, variables)
    sym = SymbolicMap(tuple(result))
    if require_reduced and not sym.reduced:
        raise SizeCapExceededError("symbolic map grew past the gcd term cap; components left unreduced")
    return sym
