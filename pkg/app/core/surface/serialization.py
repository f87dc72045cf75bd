"""
JSON form of triangulations and explicit flip programs.

Triangulation::

    {"name": "...", "triangles": 2,
     "edges": [{"name": "a", "sides": [[0, 1], [1, 2]], "reversing": true}, ...]}

Flip program (generic mapping class)::

    {"surface": <triangulation object or built-in name>,
     "flips": ["c", 0, ...],
     "relabeling": [[1, 0], [0, 2]]}

Schema problems are collected and reported together.
"""

from __future__ import annotations

from typing import Any, Dict, List, Tuple

from app.core.surface.builtin import builtin_surface
from app.core.surface.mapping_word import FlipPlan, plan_from_flips
from app.core.surface.triangulation import TriangleMap, Triangulation
from app.utils.exceptions import ValidationError


def triangulation_to_dict(tri: Triangulation) -> Dict[str, Any]:
    return {
        "name": tri.name,
        "triangles": tri.triangle_count,
        "edges": [
            {
                "name": tri.edge_names[e],
                "sides": [list(first), list(second)],
                "reversing": tri.reversing[e],
            }
            for e, (first, second) in enumerate(tri.gluings)
        ],
    }


def _slot(raw, where: str, errors: List[str]):
    if (
        isinstance(raw, (list, tuple))
        and len(raw) == 2
        and all(isinstance(x, int) and not isinstance(x, bool) for x in raw)
    ):
        return (raw[0], raw[1])
    errors.append(f"{where}: expected [triangle, side], got {raw!r}")
    return None


def triangulation_from_dict(data: Any) -> Triangulation:
    """Build (but do not validate) a triangulation from its JSON form."""
    if isinstance(data, str):
        return builtin_surface(data)
    errors: List[str] = []
    if not isinstance(data, dict):
        raise ValidationError("bad triangulation", [f"expected an object, got {type(data).__name__}"])
    count = data.get("triangles")
    if not isinstance(count, int) or isinstance(count, bool):
        errors.append("'triangles' must be an integer")
    edges = data.get("edges")
    if not isinstance(edges, list):
        errors.append("'edges' must be a list")
        edges = []
    gluings, names, reversing = [], [], []
    for i, entry in enumerate(edges):
        if not isinstance(entry, dict):
            errors.append(f"edge {i}: expected an object")
            continue
        sides = entry.get("sides")
        if not isinstance(sides, list) or len(sides) != 2:
            errors.append(f"edge {i}: 'sides' must list exactly two slots")
            continue
        first = _slot(sides[0], f"edge {i}", errors)
        second = _slot(sides[1], f"edge {i}", errors)
        if first is None or second is None:
            continue
        gluings.append((first, second))
        names.append(str(entry.get("name", f"e{i}")))
        reversing.append(bool(entry.get("reversing", True)))
    if errors:
        raise ValidationError("bad triangulation", errors)
    return Triangulation(
        triangle_count=count,
        gluings=tuple(gluings),
        edge_names=tuple(names),
        name=data.get("name"),
        reversing=tuple(reversing),
    )


def relabeling_from_list(raw: Any) -> TriangleMap:
    errors: List[str] = []
    images: List[Tuple[int, int]] = []
    if not isinstance(raw, list):
        raise ValidationError("bad relabeling", ["expected a list of [triangle, shift] pairs"])
    for i, item in enumerate(raw):
        pair = _slot(item, f"relabeling entry {i}", errors)
        if pair is not None:
            images.append((pair[0], pair[1] % 3))
    if errors:
        raise ValidationError("bad relabeling", errors)
    return TriangleMap(tuple(images))


def flip_program_from_dict(data: Any) -> FlipPlan:
    if not isinstance(data, dict):
        raise ValidationError("bad flip program", ["expected an object"])
    missing = [key for key in ("surface", "flips", "relabeling") if key not in data]
    if missing:
        raise ValidationError("bad flip program", [f"missing key {key!r}" for key in missing])
    tri = triangulation_from_dict(data["surface"])
    flips = data["flips"]
    if not isinstance(flips, list):
        raise ValidationError("bad flip program", ["'flips' must be a list of edge names or indices"])
    return plan_from_flips(tri, flips, relabeling_from_list(data["relabeling"]))


def flip_plan_to_dict(plan: FlipPlan) -> Dict[str, Any]:
    return {
        "surface": triangulation_to_dict(plan.start),
        "flips": [move.edge for move in plan.moves],
        "relabeling": [list(image) for image in plan.relabeling.images],
    }
