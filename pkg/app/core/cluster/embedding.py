"""
The principal embedding X_{T,2} -> X_{T,n}: every vertex on edge e gets the
rank-2 coordinate of e, every triangle interior gets 1. It commutes with
the cluster maps of mapping classes, so it carries rank-2 fixed points to
rank-n fixed points.
"""

from __future__ import annotations

from typing import Sequence, Tuple

from app.core.quiver.quiver import QuiverVertex, build_quiver
from app.core.surface.triangulation import Triangulation
from app.utils.exceptions import ValidationError


def embed_pgl2(point: Sequence, tri: Triangulation, n: int) -> Tuple:
    small = build_quiver(tri, 2)
    if len(point) != len(small):
        raise ValidationError(
            "dimension mismatch", [f"rank-2 point needs {len(small)} coordinates, got {len(point)}"]
        )
    big = build_quiver(tri, n)
    one = point[0] ** 0
    out = []
    for vertex in big.vertices:
        if vertex.kind == "edge":
            out.append(point[small.index(QuiverVertex("edge", vertex.index, (1,)))])
        else:
            out.append(one)
    return tuple(out)
