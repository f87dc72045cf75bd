import unittest

from app.core.surface.builtin import SPHERE4, TORUS, builtin_surface
from app.core.surface.mapping_word import MappingWord, plan_from_flips, word_to_flips
from app.core.surface.serialization import (
    flip_plan_to_dict,
    flip_program_from_dict,
    triangulation_from_dict,
    triangulation_to_dict,
)
from app.core.surface.triangulation import (
    TriangleMap,
    Triangulation,
    flip,
    is_isomorphism,
    require_valid,
    return_map,
    validate,
)
from app.utils.exceptions import TriangulationError, ValidationError


class TestBuiltinSurfaces(unittest.TestCase):
    def test_torus_counts(self):
        tri = builtin_surface(TORUS)
        self.assertEqual(validate(tri), [])
        self.assertEqual((tri.triangle_count, tri.edge_count), (2, 3))
        self.assertEqual(tri.puncture_count, 1)
        self.assertEqual(tri.euler_characteristic, -1)
        self.assertEqual(tri.genus, 1)

    def test_sphere_counts(self):
        tri = builtin_surface("sphere4")
        self.assertEqual(tri.name, SPHERE4)
        self.assertEqual(validate(tri), [])
        self.assertEqual(tri.puncture_count, 4)
        self.assertEqual(tri.euler_characteristic, -2)
        self.assertEqual(tri.genus, 0)

    def test_unknown_surface(self):
        with self.assertRaises(ValidationError):
            builtin_surface("klein-bottle")


class TestValidation(unittest.TestCase):
    def test_dangling_sides_are_all_reported(self):
        tri = Triangulation(triangle_count=2, gluings=(((0, 0), (1, 0)),))
        errors = validate(tri)
        self.assertEqual(sum("dangling side" in e for e in errors), 4)
        with self.assertRaises(TriangulationError):
            require_valid(tri)

    def test_self_folded_edge(self):
        tri = Triangulation(
            triangle_count=2,
            gluings=(((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2))),
        )
        self.assertTrue(any("self-folded" in e for e in validate(tri)))

    def test_orientation_clash(self):
        torus = builtin_surface(TORUS)
        tri = Triangulation(
            triangle_count=2,
            gluings=torus.gluings,
            edge_names=torus.edge_names,
            reversing=(True, False, True),
        )
        errors = validate(tri)
        self.assertEqual(len(errors), 1)
        self.assertIn("orientation clash", errors[0])


class TestFlips(unittest.TestCase):
    def test_double_flip_returns_to_start(self):
        for name in (TORUS, SPHERE4):
            tri = builtin_surface(name)
            for e in range(tri.edge_count):
                once = flip(tri, e)
                twice = flip(once, e)
                self.assertTrue(is_isomorphism(tri, twice, return_map(once.origin)), (name, e))

    def test_flip_keeps_surface_valid(self):
        tri = builtin_surface(SPHERE4)
        flipped = flip(tri, "13")
        self.assertEqual(validate(flipped), [])
        self.assertEqual(flipped.puncture_count, 4)

    def test_every_flip_keeps_surface_valid(self):
        for name in (TORUS, SPHERE4):
            tri = builtin_surface(name)
            for e in range(tri.edge_count):
                once = flip(tri, e)
                self.assertEqual(validate(once), [], (name, e))
                self.assertEqual(once.puncture_count, tri.puncture_count)
                self.assertEqual(once.euler_characteristic, tri.euler_characteristic)
        plan = word_to_flips(builtin_surface(TORUS), MappingWord.parse("LLRLRRL"))
        for step in plan.steps:
            self.assertEqual(validate(step), [])

    def test_torus_letters_close_up(self):
        tri = builtin_surface(TORUS)
        plan = word_to_flips(tri, MappingWord.parse("L R"))
        self.assertEqual(len(plan.moves), 2)
        self.assertEqual(plan.moves[0].edge, tri.edge_index("c"))
        self.assertTrue(is_isomorphism(tri, plan.final, plan.relabeling))

    def test_empty_word_is_identity(self):
        tri = builtin_surface(TORUS)
        plan = word_to_flips(tri, MappingWord.parse(""))
        self.assertEqual(plan.moves, ())
        self.assertEqual(plan.relabeling, TriangleMap.identity(2))

    def test_unknown_letter(self):
        with self.assertRaises(ValidationError) as ctx:
            word_to_flips(builtin_surface(TORUS), MappingWord.parse("LXY"))
        self.assertEqual(len(ctx.exception.errors), 2)

    def test_explicit_flips_need_an_isomorphism(self):
        tri = builtin_surface(TORUS)
        plan = plan_from_flips(tri, ["c"], TriangleMap(((1, 0), (0, 2))))
        self.assertEqual(len(plan.moves), 1)
        with self.assertRaises(TriangulationError):
            plan_from_flips(tri, ["c"], TriangleMap.identity(2))


class TestSerialization(unittest.TestCase):
    def test_triangulation_json(self):
        tri = builtin_surface(SPHERE4)
        self.assertEqual(triangulation_from_dict(triangulation_to_dict(tri)), tri)
        self.assertEqual(triangulation_from_dict("torus"), builtin_surface(TORUS))

    def test_schema_errors_are_collected(self):
        with self.assertRaises(ValidationError) as ctx:
            triangulation_from_dict({"triangles": "two", "edges": [{"sides": [[0, 1]]}, {"sides": [[0, "x"], [1, 0]]}]})
        self.assertEqual(len(ctx.exception.errors), 3)

    def test_flip_program(self):
        plan = flip_program_from_dict({"surface": "torus", "flips": ["c"], "relabeling": [[1, 0], [0, 2]]})
        data = flip_plan_to_dict(plan)
        self.assertEqual(data["flips"], [2])
        self.assertEqual(data["relabeling"], [[1, 0], [0, 2]])
        with self.assertRaises(ValidationError):
            flip_program_from_dict({"surface": "torus", "flips": ["c"]})


if __name__ == "__main__":
    unittest.main()
