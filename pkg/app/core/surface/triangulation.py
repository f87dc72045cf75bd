"""
Ideal triangulations of punctured surfaces.

A triangle has corners 0, 1, 2 in counter-clockwise order; side k runs from
corner k to corner k+1. A slot (t, k) is side k of triangle t. Each edge
glues two slots, and the gluing is orientation-reversing: corner k of the
first slot meets corner r+1 of the second. The first slot of an edge's pair
is its canonical side; positions along the edge are measured from its
starting corner.

Flips replace the diagonal of the quadrilateral formed by the two triangles
on an edge. Triangle and edge indices are kept, so a flip sequence comes
with an explicit correspondence of labels.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from app.utils.exceptions import TriangulationError

logger = logging.getLogger(__name__)

Slot = Tuple[int, int]
Gluing = Tuple[Slot, Slot]


@dataclass(frozen=True)
class FlipRecord:
    """Where a triangulation came from: ``before`` flipped at ``edge``."""

    before: "Triangulation"
    edge: int
    # (t, s, u, r): the edge sat on slot (t, s) and (u, r) before the flip
    quad: Tuple[int, int, int, int]


@dataclass(frozen=True)
class TriangleMap:
    """
    Combinatorial isomorphism between triangulations: triangle t goes to
    images[t] = (t', shift), corner j of t landing on corner (j + shift) % 3.
    """

    images: Tuple[Tuple[int, int], ...]

    @classmethod
    def identity(cls, count: int) -> "TriangleMap":
        return cls(tuple((t, 0) for t in range(count)))

    def slot(self, slot: Slot) -> Slot:
        t, k = slot
        image, shift = self.images[t]
        return (image, (k + shift) % 3)

    def barycentric(self, t: int, w: Sequence[int]) -> Tuple[int, Tuple[int, int, int]]:
        image, shift = self.images[t]
        out = [0, 0, 0]
        for j in range(3):
            out[(j + shift) % 3] = w[j]
        return image, tuple(out)

    def then(self, other: "TriangleMap") -> "TriangleMap":
        """Apply self first, then ``other``."""
        images = []
        for image, shift in self.images:
            final, extra = other.images[image]
            images.append((final, (shift + extra) % 3))
        return TriangleMap(tuple(images))


@dataclass(frozen=True)
class Triangulation:
    triangle_count: int
    gluings: Tuple[Gluing, ...]
    edge_names: Tuple[str, ...] = ()
    name: Optional[str] = None
    # False marks an orientation-preserving gluing (invalid, kept for reporting)
    reversing: Tuple[bool, ...] = ()
    origin: Optional[FlipRecord] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.edge_names:
            object.__setattr__(self, "edge_names", tuple(f"e{i}" for i in range(len(self.gluings))))
        if not self.reversing:
            object.__setattr__(self, "reversing", (True,) * len(self.gluings))

    # ---------------------------------------------------------------------
    # DERIVED DATA
    # ---------------------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.gluings)

    @cached_property
    def slot_edges(self) -> Dict[Slot, int]:
        table = {}
        for e, (first, second) in enumerate(self.gluings):
            table[first] = e
            table[second] = e
        return table

    def partner(self, slot: Slot) -> Slot:
        first, second = self.gluings[self.slot_edges[slot]]
        return second if slot == first else first

    def edge_of(self, slot: Slot) -> int:
        return self.slot_edges[slot]

    def edge_index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.edge_count:
                raise TriangulationError("unknown edge", [f"edge index {name_or_index} out of range"])
            return name_or_index
        if name_or_index in self.edge_names:
            return self.edge_names.index(name_or_index)
        raise TriangulationError("unknown edge", [f"no edge named {name_or_index!r}"])

    @cached_property
    def punctures(self) -> List[List[Tuple[int, int]]]:
        """Corner orbits: each list of (triangle, corner) is one puncture."""
        seen = set()
        orbits = []
        for t in range(self.triangle_count):
            for k in range(3):
                if (t, k) in seen:
                    continue
                orbit = []
                corner = (t, k)
                while corner not in seen:
                    seen.add(corner)
                    orbit.append(corner)
                    u, r = self.partner(corner)
                    corner = (u, (r + 1) % 3)
                orbits.append(orbit)
        return orbits

    @property
    def puncture_count(self) -> int:
        return len(self.punctures)

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the punctured surface (F - E)."""
        return self.triangle_count - self.edge_count

    @property
    def genus(self) -> int:
        closed = self.puncture_count - self.edge_count + self.triangle_count
        return (2 - closed) // 2

    # ---------------------------------------------------------------------
    # QUIVER VERTEX LOCATIONS
    # ---------------------------------------------------------------------

    def edge_point(self, slot: Slot, position: int, n: int) -> Tuple[int, Tuple[int, int, int]]:
        """Barycentric point at ``position`` along ``slot`` (from its corner k)."""
        t, k = slot
        w = [0, 0, 0]
        w[k] = n - position
        w[(k + 1) % 3] = position
        return t, tuple(w)

    def edge_position(self, slot: Slot, position: int, n: int) -> Tuple[int, int]:
        """(edge, canonical position) of the point ``position`` along ``slot``."""
        e = self.slot_edges[slot]
        if self.gluings[e][0] == slot:
            return e, position
        return e, n - position


def validate(tri: Triangulation) -> List[str]:
    """Every problem with ``tri`` as a plain-language message ([] when valid)."""
    errors: List[str] = []
    if tri.triangle_count < 1:
        return ["triangulation has no triangles"]
    if len(tri.edge_names) != tri.edge_count:
        errors.append(f"{len(tri.edge_names)} edge names for {tri.edge_count} edges")
    uses: Dict[Slot, int] = {}
    for e, pair in enumerate(tri.gluings):
        name = tri.edge_names[e] if e < len(tri.edge_names) else str(e)
        for t, k in pair:
            if not (0 <= t < tri.triangle_count and 0 <= k < 3):
                errors.append(f"edge {name}: slot ({t}, {k}) does not exist")
                continue
            uses[(t, k)] = uses.get((t, k), 0) + 1
        (t1, _), (t2, _) = pair
        if pair[0] == pair[1]:
            errors.append(f"edge {name}: glues slot {pair[0]} to itself")
        elif t1 == t2:
            errors.append(f"edge {name} is self-folded (both sides in triangle {t1})")
        if e < len(tri.reversing) and not tri.reversing[e]:
            errors.append(f"edge {name}: orientation clash (gluing preserves orientation)")
    for t in range(tri.triangle_count):
        for k in range(3):
            count = uses.get((t, k), 0)
            if count == 0:
                errors.append(f"dangling side: slot ({t}, {k}) is not glued")
            elif count > 1:
                errors.append(f"slot ({t}, {k}) is glued {count} times")
    if errors:
        return errors
    if 3 * tri.triangle_count != 2 * tri.edge_count:
        errors.append("edge count does not match 3F = 2E")
        return errors
    if tri.euler_characteristic >= 0:
        errors.append(
            f"surface has Euler characteristic {tri.euler_characteristic}; "
            "need a hyperbolic punctured surface (2g - 2 + m > 0)"
        )
    elif tri.genus == 0 and tri.puncture_count <= 3:
        errors.append(
            f"genus-0 surface with {tri.puncture_count} punctures has no mapping class worth computing; "
            "need more than 3 punctures"
        )
    return errors


def require_valid(tri: Triangulation) -> None:
    errors = validate(tri)
    if errors:
        raise TriangulationError("invalid triangulation", errors)


# =============================================================================
# FLIPS
# =============================================================================

def flip(tri: Triangulation, edge) -> Triangulation:
    """
    Flip ``edge``. With the edge on slots (t, s) and (u, r) and corners
    X, Y on the edge, P apex of t, Q apex of u, the new triangles are
    t = (P, X, Q) and u = (Q, Y, P); the new diagonal sits on (t, 2), (u, 2).
    """
    e = tri.edge_index(edge)
    (t, s), (u, r) = tri.gluings[e]
    if t == u:
        raise TriangulationError("unflippable edge", [f"edge {tri.edge_names[e]} is self-folded"])
    remap: Dict[Slot, Slot] = {
        (t, (s + 2) % 3): (t, 0),
        (u, (r + 1) % 3): (t, 1),
        (u, (r + 2) % 3): (u, 0),
        (t, (s + 1) % 3): (u, 1),
    }
    gluings = []
    for index, (first, second) in enumerate(tri.gluings):
        if index == e:
            gluings.append(((t, 2), (u, 2)))
        else:
            gluings.append((remap.get(first, first), remap.get(second, second)))
    logger.debug("flip edge %s of %s (quad t=%d s=%d u=%d r=%d)", tri.edge_names[e], tri.name, t, s, u, r)
    return Triangulation(
        triangle_count=tri.triangle_count,
        gluings=tuple(gluings),
        edge_names=tri.edge_names,
        name=None,
        reversing=tri.reversing,
        origin=FlipRecord(before=tri, edge=e, quad=(t, s, u, r)),
    )


def return_map(record: FlipRecord) -> TriangleMap:
    """
    Isomorphism from ``record.before`` to the triangulation obtained by
    flipping the same edge twice.
    """
    t, s, u, r = record.quad
    images = [(i, 0) for i in range(record.before.triangle_count)]
    images[u] = (t, (-(r + 1)) % 3)
    images[t] = (u, (-(s + 1)) % 3)
    return TriangleMap(tuple(images))


def carry_across_flip(record: FlipRecord, rho: TriangleMap) -> TriangleMap:
    """
    Given rho: A -> B with ``record`` flipping edge e of A, return the induced isomorphism
    flip(A, e) -> flip(B, rho(e)). The two quad triangles go to the images
    of their old selves with no rotation.
    """
    t, _, u, _ = record.quad
    images = list(rho.images)
    images[t] = (rho.images[t][0], 0)
    images[u] = (rho.images[u][0], 0)
    return TriangleMap(tuple(images))


def image_edge(tri: Triangulation, rho: TriangleMap, target: Triangulation, edge: int) -> int:
    return target.edge_of(rho.slot(tri.gluings[edge][0]))


def is_isomorphism(tri: Triangulation, other: Triangulation, rho: TriangleMap) -> bool:
    """True when ``rho`` carries every gluing of ``tri`` onto a gluing of ``other``."""
    if tri.triangle_count != other.triangle_count or tri.edge_count != other.edge_count:
        return False
    if sorted(image for image, _ in rho.images) != list(range(other.triangle_count)):
        return False
    for first, second in tri.gluings:
        a, b = rho.slot(first), rho.slot(second)
        if a not in other.slot_edges or other.partner(a) != b:
            return False
    return True
