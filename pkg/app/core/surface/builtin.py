"""
Built-in triangulated surfaces and their named mapping classes.

Once-punctured torus: the unit square cut along its diagonal, triangle 0 =
(0,0),(1,0),(1,1) and triangle 1 = (0,0),(1,1),(0,1). Edge a is the
vertical side pair (x=1 in triangle 0, x=0 in triangle 1), b the diagonal
and c the horizontal pair (y=0 in triangle 0, y=1 in triangle 1).

Four-punctured sphere: the boundary of a tetrahedron with vertices 0..3,
faces listed counter-clockwise seen from outside.
"""

from __future__ import annotations

from typing import Callable, Dict, Final, Tuple

from app.core.surface.triangulation import TriangleMap, Triangulation
from app.utils.exceptions import ValidationError

TORUS: Final[str] = "once-punctured-torus"
SPHERE4: Final[str] = "four-punctured-sphere"


def build_once_punctured_torus() -> Triangulation:
    return Triangulation(
        triangle_count=2,
        gluings=(
            ((0, 1), (1, 2)),   # a
            ((0, 2), (1, 0)),   # b
            ((0, 0), (1, 1)),   # c
        ),
        edge_names=("a", "b", "c"),
        name=TORUS,
    )


def build_four_punctured_sphere() -> Triangulation:
    # faces: 0 = (1,2,3), 1 = (0,3,2), 2 = (0,1,3), 3 = (0,2,1)
    return Triangulation(
        triangle_count=4,
        gluings=(
            ((2, 0), (3, 2)),   # 01
            ((3, 0), (1, 2)),   # 02
            ((1, 0), (2, 2)),   # 03
            ((0, 0), (3, 1)),   # 12
            ((2, 1), (0, 2)),   # 13
            ((0, 1), (1, 1)),   # 23
        ),
        edge_names=("01", "02", "03", "12", "13", "23"),
        name=SPHERE4,
    )


BUILTIN_SURFACES: Final[Dict[str, Callable[[], Triangulation]]] = {
    TORUS: build_once_punctured_torus,
    "torus": build_once_punctured_torus,
    SPHERE4: build_four_punctured_sphere,
    "sphere4": build_four_punctured_sphere,
}


# Each letter flips one edge and then identifies the result with the
# starting triangulation: (edge name, triangle map T -> flip(T, edge)).
LetterTable = Dict[str, Tuple[str, TriangleMap]]

TORUS_LETTERS: Final[LetterTable] = {
    "L": ("c", TriangleMap(((1, 0), (0, 2)))),
    "R": ("a", TriangleMap(((0, 0), (1, 2)))),
}

LETTERS: Final[Dict[str, LetterTable]] = {
    TORUS: TORUS_LETTERS,
}


def builtin_surface(name: str) -> Triangulation:
    try:
        return BUILTIN_SURFACES[name]()
    except KeyError:
        raise ValidationError(
            "unknown surface", [f"{name!r} is not one of {sorted(BUILTIN_SURFACES)}"]
        ) from None


def letters_for(tri: Triangulation) -> LetterTable:
    return LETTERS.get(tri.name or "", {})
