import unittest

import numpy as np

from app.core.quiver.quiver import (
    Quiver,
    QuiverVertex,
    build_quiver,
    integer_kernel,
    mutate_quiver,
    vertex_bijection,
)
from app.core.surface.builtin import SPHERE4, TORUS, builtin_surface
from app.utils.exceptions import ValidationError

# figure positions of the two triangle interiors at n = 3
TORUS3_FACES = (3, 7)


class TestQuiverShape(unittest.TestCase):
    def setUp(self):
        self.torus = builtin_surface(TORUS)

    def test_rank_two_torus_is_doubled_triangle(self):
        q = build_quiver(self.torus, 2)
        self.assertEqual(len(q), 3)
        off = ~np.eye(3, dtype=bool)
        self.assertTrue(np.all(np.abs(q.epsilon[off]) == 2))
        self.assertTrue(np.all(q.epsilon.sum(axis=1) == 0))
        self.assertEqual(len(q.arrows()), 3)

    def test_vertex_counts(self):
        sphere = builtin_surface(SPHERE4)
        for n in range(2, 6):
            self.assertEqual(len(build_quiver(self.torus, n)), 3 * (n - 1) + 2 * (n - 1) * (n - 2) // 2)
            self.assertEqual(len(build_quiver(sphere, n)), 6 * (n - 1) + 4 * (n - 1) * (n - 2) // 2)

    def test_figure_order_at_rank_three(self):
        q = build_quiver(self.torus, 3)
        self.assertEqual(len(q), 8)
        faces = tuple(i for i, v in enumerate(q.vertices) if v.kind == "face")
        self.assertEqual(faces, TORUS3_FACES)
        self.assertEqual(q.vertices[0], QuiverVertex("edge", 0, (2,)))
        self.assertTrue(np.array_equal(q.epsilon, -q.epsilon.T))

    def test_bad_rank(self):
        with self.assertRaises(ValidationError):
            build_quiver(self.torus, 1)

    def test_json_round_trip(self):
        q = build_quiver(self.torus, 3)
        self.assertEqual(Quiver.from_dict(q.to_dict(self.torus.edge_names)), q)


class TestCasimirs(unittest.TestCase):
    def test_kernel_dimension_is_punctures_times_rank_minus_one(self):
        torus, sphere = builtin_surface(TORUS), builtin_surface(SPHERE4)
        for n in (2, 3):
            self.assertEqual(len(build_quiver(torus, n).casimir_basis()), n - 1)
        self.assertEqual(len(build_quiver(sphere, 2).casimir_basis()), 4)

    def test_rank_two_casimir(self):
        basis = build_quiver(builtin_surface(TORUS), 2).casimir_basis()
        self.assertEqual(basis, [(1, 1, 1)])

    def test_rank_three_casimirs_separate_edges_and_faces(self):
        q = build_quiver(builtin_surface(TORUS), 3)
        edges = [i for i in range(8) if i not in TORUS3_FACES]
        for v in q.casimir_basis():
            self.assertTrue(np.all(q.epsilon @ np.array(v) == 0))
            self.assertEqual(len({v[i] for i in edges}), 1)
            self.assertEqual(len({v[i] for i in TORUS3_FACES}), 1)

    def test_integer_kernel_is_primitive(self):
        self.assertEqual(integer_kernel(np.array([[2, -4], [1, -2]])), [(2, 1)])
        self.assertEqual(integer_kernel(np.array([[2, 3]])), [(-3, 2)])
        self.assertEqual(integer_kernel(np.array([[0, 1], [-1, 0]])), [])
        for v in integer_kernel(np.array([[0, 2, -2], [-2, 0, 2], [2, -2, 0]])):
            self.assertEqual(v, (1, 1, 1))


class TestMutation(unittest.TestCase):
    def test_mutation_is_an_involution(self):
        q = build_quiver(builtin_surface(TORUS), 3)
        for k in range(len(q)):
            once = mutate_quiver(q, k)
            self.assertTrue(np.array_equal(once.epsilon, -once.epsilon.T))
            self.assertEqual(mutate_quiver(once, k), q)

    def test_mutation_is_an_involution_on_random_quivers(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            size = int(rng.integers(2, 9))
            upper = np.triu(rng.integers(-3, 4, size=(size, size)), 1)
            vertices = [QuiverVertex("edge", i, (1,)) for i in range(size)]
            q = Quiver(2, vertices, upper - upper.T)
            k = int(rng.integers(0, size))
            once = mutate_quiver(q, k)
            self.assertTrue(np.array_equal(once.epsilon, -once.epsilon.T))
            self.assertEqual(mutate_quiver(once, k), q)

    def test_mutation_reverses_arrows_at_vertex(self):
        q = build_quiver(builtin_surface(TORUS), 2)
        m = mutate_quiver(q, 1)
        np.testing.assert_array_equal(m.epsilon[1], -q.epsilon[1])
        with self.assertRaises(IndexError):
            mutate_quiver(q, 3)

    def test_vertex_bijection(self):
        tri = builtin_surface(TORUS)
        q = build_quiver(tri, 3)
        default = build_quiver(tri, 3, order=list(range(8)))
        perm = vertex_bijection(q, default, lambda v: v)
        self.assertEqual(perm, (1, 0, 4, 7, 3, 5, 2, 6))
        self.assertTrue(np.array_equal(default.permuted(perm).epsilon, q.epsilon))


if __name__ == "__main__":
    unittest.main()
