"""
Mapping classes given as flip sequences.

A mapping class is a sequence of flips taking a triangulation T to a
triangulation T' together with a combinatorial isomorphism T -> T'. Words
in named letters (L, R on the torus) are turned into one such sequence: the
flips of later letters are carried through the identifications made by the
earlier ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from app.core.surface.builtin import letters_for
from app.core.surface.triangulation import (
    FlipRecord,
    TriangleMap,
    Triangulation,
    carry_across_flip,
    flip,
    image_edge,
    is_isomorphism,
    require_valid,
)
from app.utils.exceptions import TriangulationError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlipMove:
    edge: int           # edge index in the triangulation the flip acts on


@dataclass(frozen=True)
class MappingWord:
    letters: Tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> "MappingWord":
        return cls(tuple(ch for ch in text if not ch.isspace()))

    def __str__(self) -> str:
        return "".join(self.letters)


@dataclass(frozen=True)
class FlipPlan:
    """Flips from ``start`` plus the identification start -> final."""

    start: Triangulation
    moves: Tuple[FlipMove, ...]
    relabeling: TriangleMap
    steps: Tuple[Triangulation, ...] = field(repr=False)

    @property
    def final(self) -> Triangulation:
        return self.steps[-1]


def plan_from_flips(tri: Triangulation, edges: Sequence, relabeling: TriangleMap) -> FlipPlan:
    """Validate an explicit flip sequence and its closing isomorphism."""
    require_valid(tri)
    steps = [tri]
    moves = []
    current = tri
    for edge in edges:
        e = current.edge_index(edge)
        current = flip(current, e)
        moves.append(FlipMove(e))
        steps.append(current)
    if len(relabeling.images) != tri.triangle_count or not is_isomorphism(tri, current, relabeling):
        raise TriangulationError(
            "bad mapping class", ["relabeling is not an isomorphism onto the flipped triangulation"]
        )
    return FlipPlan(start=tri, moves=tuple(moves), relabeling=relabeling, steps=tuple(steps))


def word_to_flips(tri: Triangulation, word: MappingWord) -> FlipPlan:
    require_valid(tri)
    letters = letters_for(tri)
    unknown = sorted({ch for ch in word.letters if ch not in letters})
    if unknown:
        raise ValidationError(
            "word does not fit the surface",
            [f"letter {ch!r} is not in the alphabet {sorted(letters) or '[]'} of {tri.name}" for ch in unknown],
        )

    current = tri
    rho = TriangleMap.identity(tri.triangle_count)
    moves: List[FlipMove] = []
    steps = [tri]
    for ch in word.letters:
        edge_name, sigma = letters[ch]
        edge = tri.edge_index(edge_name)
        target = image_edge(tri, rho, current, edge)
        current = flip(current, target)
        (t, s), (u, r) = tri.gluings[edge]
        base = FlipRecord(before=tri, edge=edge, quad=(t, s, u, r))
        rho = sigma.then(carry_across_flip(base, rho))
        moves.append(FlipMove(target))
        steps.append(current)
        logger.debug("letter %s: flip edge %s -> %d flips so far", ch, current.edge_names[target], len(moves))

    if not is_isomorphism(tri, current, rho):
        raise TriangulationError("bad mapping class", [f"word {word} does not close up"])
    return FlipPlan(start=tri, moves=tuple(moves), relabeling=rho, steps=tuple(steps))
