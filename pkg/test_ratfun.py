import unittest
from fractions import Fraction

import numpy as np

from app.core.ratfun.dual import DualScalar, jacobian_rows
from app.core.ratfun.multipoly import MultiPoly, divide_exact, poly_gcd
from app.core.ratfun.rational import RationalFunction, rat_compose, rat_derive, rat_eval
from app.core.ratfun.scalars import QuadraticFieldScalar, detect_quadratic_point, snap_integer, to_complex
from app.core.ratfun.text_format import format_poly, format_rational, parse_poly, parse_rational
from app.core.ratfun.unipoly import UniPoly, format_unipoly, unipoly_ops
from app.utils.exceptions import EvaluationSingularError, MultiplicityMismatchError, ValidationError

OMEGA = QuadraticFieldScalar(Fraction(-1, 2), Fraction(1, 2), -3)


def random_poly(rng, nvars=3, terms=4, degree=3):
    data = {}
    for _ in range(terms):
        exp = tuple(int(k) for k in rng.integers(0, degree + 1, size=nvars))
        data[exp] = Fraction(int(rng.integers(-5, 6)))
    return MultiPoly(nvars, data)


class TestMultiPoly(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_ring_axioms_hold_exactly(self):
        for _ in range(20):
            a, b, c = (random_poly(self.rng) for _ in range(3))
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)
            self.assertEqual(a + b, b + a)
            self.assertTrue((a - a).is_zero)

    def test_exact_division(self):
        x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        p = (x + y) * (x - 1)
        self.assertEqual(divide_exact(p, x + y), x - 1)
        self.assertIsNone(divide_exact(p, x + 2))

    def test_gcd_is_monic_common_factor(self):
        x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        a = (x + y) * (x - 1) * 3
        b = (x + y) * (y + 2) * (-2)
        self.assertEqual(poly_gcd(a, b), x + y)
        self.assertEqual(poly_gcd(x * x * y, x * y * y), x * y)
        self.assertEqual(poly_gcd(x + 1, y + 1), MultiPoly.one(2))

    def test_gcd_of_random_products(self):
        for _ in range(5):
            f, g, h = (random_poly(self.rng, terms=3, degree=2) for _ in range(3))
            if f.is_zero or f.is_constant or g.is_zero or h.is_zero:
                continue
            common = poly_gcd(f * g, f * h)
            self.assertIsNotNone(divide_exact(common, f.monic()))

    def test_derivative_and_evaluate(self):
        p = parse_poly("y1^3*y2 + 2*y2", 2)
        self.assertEqual(p.derivative(0), parse_poly("3*y1^2*y2", 2))
        self.assertEqual(p.derivative(1), parse_poly("y1^3 + 2", 2))
        self.assertEqual(p.evaluate([Fraction(2), Fraction(3)]), Fraction(30))

        f = RationalFunction(p)
        self.assertEqual(rat_derive(f, 0), parse_rational("3*y1^2*y2", 2))
        self.assertEqual(rat_eval(f, [Fraction(2), Fraction(3)]), Fraction(30))
        self.assertAlmostEqual(abs(rat_eval(f, [2 + 0j, 3 + 0j]) - 30), 0, places=12)


class TestRationalFunction(unittest.TestCase):
    def test_normalization_cancels_common_factors(self):
        f = parse_rational("(y1^2 - 1)/(y1 - 1)", 1)
        self.assertEqual(f.numerator, parse_poly("y1 + 1", 1))
        self.assertTrue(f.denominator.is_constant)

    def test_denominator_is_monic(self):
        f = RationalFunction(parse_poly("y1", 1), parse_poly("2*y1 + 4", 1))
        self.assertEqual(f.denominator.leading_coefficient(), 1)
        self.assertEqual(f, parse_rational("y1/(2*y1 + 4)", 1))

    def test_size_cap_leaves_fraction_unreduced(self):
        num = parse_poly("(y1 + y2)*(y1 + 1)", 2)
        den = parse_poly("(y1 + y2)*(y2 + 1)", 2)
        f = RationalFunction(num, den, cap=1)
        self.assertFalse(f.reduced)
        g = f.normalized()
        self.assertTrue(g.reduced)
        self.assertEqual(g.denominator, parse_poly("y2 + 1", 2))

    def test_composition(self):
        f = parse_rational("y1/(1 + y1)", 1)
        g = parse_rational("1/y1", 1)
        self.assertEqual(rat_compose(f, [g]), parse_rational("1/(1 + y1)", 1))

    def test_evaluation_and_singularity(self):
        f = parse_rational("(1 + y1)/(y1*y2)", 2)
        self.assertEqual(rat_eval(f, [Fraction(1), Fraction(2)]), Fraction(1))
        with self.assertRaises(EvaluationSingularError):
            rat_eval(f, [Fraction(0), Fraction(2)])
        with self.assertRaises(EvaluationSingularError):
            rat_eval(f, [1e-15 + 0j, 2 + 0j])

    def test_derivative(self):
        f = parse_rational("1/y1", 1)
        self.assertEqual(rat_derive(f, 0), parse_rational("-1/y1^2", 1))

    def test_text_round_trip(self):
        text = "(1+y3)/(y3*(1+y6)*y8)"
        f = parse_rational(text, 8)
        self.assertEqual(parse_rational(format_rational(f), 8), f)
        self.assertEqual(format_poly(parse_poly("1 + y2*y1^2", 2)), "y1^2*y2 + 1")

    def test_parse_errors(self):
        with self.assertRaises(ValidationError):
            parse_rational("y1 + ", 1)
        with self.assertRaises(ValidationError):
            parse_rational("y3", 2)
        with self.assertRaises(ValidationError):
            parse_poly("1/y1", 1)

    def test_mixed_scalar_evaluation(self):
        f = parse_rational("y1^2 + y1 + 1", 1)
        self.assertTrue(f.evaluate([OMEGA]).is_zero())


class TestQuadraticField(unittest.TestCase):
    def test_cube_root_of_unity(self):
        self.assertEqual(OMEGA ** 3, 1)
        self.assertEqual(OMEGA * OMEGA.conjugate(), 1)
        self.assertEqual(OMEGA.norm(), 1)
        self.assertEqual(1 / OMEGA, OMEGA.conjugate())
        self.assertEqual(str(OMEGA), "-1/2+1/2*sqrt(-3)")

    def test_detect_from_complex(self):
        z = complex(-0.5, np.sqrt(3) / 2)
        self.assertEqual(QuadraticFieldScalar.from_complex(z, -3), OMEGA)
        self.assertIsNone(QuadraticFieldScalar.from_complex(complex(0.1234567, 0.7654321), -3, max_denominator=10))
        point = detect_quadratic_point([1 + 0j, z, z.conjugate()], -3)
        self.assertEqual(point, [QuadraticFieldScalar(1, 0, -3), OMEGA, OMEGA.conjugate()])

    def test_rejects_bad_discriminant(self):
        with self.assertRaises(ValueError):
            QuadraticFieldScalar(1, 1, 4)

    def test_snap_integer(self):
        self.assertEqual(snap_integer(complex(-84.0000000001, 1e-11), 1e-8), -84)
        self.assertIsNone(snap_integer(complex(2.5, 0), 1e-8))

    def test_numpy_and_builtin_complex(self):
        self.assertEqual(to_complex(np.complex128(1 + 2j)), complex(1, 2))
        self.assertEqual(to_complex(complex(3, -1)), complex(3, -1))
        self.assertEqual(to_complex(np.float64(2.5)), complex(2.5, 0))
        self.assertEqual(to_complex(Fraction(1, 4)), complex(0.25, 0))
        self.assertEqual(to_complex(OMEGA), complex(-0.5, np.sqrt(3) / 2))
        self.assertEqual(snap_integer(np.complex128(-84.0000000001 + 1e-11j), 1e-8), -84)
        self.assertEqual(snap_integer(np.float64(3.0), 1e-8), 3)

    def test_snapped_numpy_coefficients(self):
        coeffs = np.array([1.0000000001, -5, 1], dtype=np.complex128)
        self.assertEqual(UniPoly(coeffs).snapped(1e-8), UniPoly([1, -5, 1]))


class TestDualScalar(unittest.TestCase):
    def test_gradient_of_rational_expression(self):
        x, y = DualScalar.seed([2.0, 3.0])
        f = x * y + 1 / x
        self.assertAlmostEqual(f.value, 6.5)
        np.testing.assert_allclose(f.gradient, [3.0 - 0.25, 2.0])

    def test_exact_gradient(self):
        (x,) = DualScalar.seed([OMEGA])
        f = x ** 2 + x
        self.assertTrue(f.exact)
        self.assertEqual(f.value, -1)
        self.assertEqual(f.gradient[0], 2 * OMEGA + 1)

    def test_jacobian_rows(self):
        x, y = DualScalar.seed([1.0, 2.0])
        rows = jacobian_rows([x * y, x + y])
        np.testing.assert_allclose(rows, [[2.0, 1.0], [1.0, 1.0]])


class TestUniPoly(unittest.TestCase):
    def test_format(self):
        self.assertEqual(format_unipoly(UniPoly([1, -5, 1])), "t^2 - 5*t + 1")
        self.assertEqual(format_unipoly(UniPoly([-1, 1])), "t - 1")
        self.assertEqual(format_unipoly(UniPoly([])), "0")

    def test_linear_power_division(self):
        q = UniPoly([1, -5, 1])
        p = UniPoly.linear_power(3) * q
        k, cofactor = p.root_multiplicity(1)
        self.assertEqual(k, 3)
        self.assertEqual(cofactor, q)
        self.assertEqual(cofactor * UniPoly.linear_power(3), p)

    def test_numeric_multiplicity_tolerates_noise(self):
        p = UniPoly([c + 1e-12j for c in (UniPoly.linear_power(2) * UniPoly([5])).coefficients])
        k, cofactor = p.root_multiplicity(1, 1e-6)
        self.assertEqual(k, 2)
        self.assertAlmostEqual(abs(cofactor.eval_at(1) - 5), 0, places=6)

    def test_divide_by_linear_power_round_trip(self):
        rng = np.random.default_rng(11)
        for k in range(5):
            coeffs = [Fraction(int(c)) for c in rng.integers(-9, 10, size=4)]
            coeffs[-1] = Fraction(1)
            p = UniPoly.linear_power(k) * UniPoly(coeffs)
            q = p.divide_by_linear_power(k)
            self.assertEqual(q * UniPoly.linear_power(k), p)
        p = UniPoly([1, -5, 1]) * UniPoly.linear_power(2)
        self.assertEqual(p.divide_by_linear_power(0), p)

    def test_divide_by_linear_power_numeric(self):
        p = UniPoly([complex(c) + 1e-12j for c in (UniPoly.linear_power(2) * UniPoly([1, -5, 1])).coefficients])
        q = p.divide_by_linear_power(2)
        np.testing.assert_allclose([complex(c) for c in q.coefficients], [1, -5, 1], atol=1e-9)

    def test_divide_by_linear_power_mismatch(self):
        p = UniPoly.linear_power(2) * UniPoly([1, -5, 1])
        with self.assertRaises(MultiplicityMismatchError) as ctx:
            p.divide_by_linear_power(3)
        self.assertEqual((ctx.exception.found, ctx.exception.expected), (2, 3))
        with self.assertRaises(MultiplicityMismatchError):
            UniPoly([1, -5, 1]).divide_by_linear_power(1)

    def test_ops_dispatch(self):
        p, q = UniPoly([1, -5, 1]), UniPoly([-1, 1])
        self.assertEqual(unipoly_ops(p, q, "add"), UniPoly([0, -4, 1]))
        self.assertEqual(unipoly_ops(p, q, "sub"), UniPoly([2, -6, 1]))
        self.assertEqual(unipoly_ops(p, q, "mul"), p * q)
        self.assertEqual(unipoly_ops(p * q, 1, "divide_by_linear_power"), p)
        self.assertEqual(unipoly_ops(p, 1, "eval_at"), -3)
        with self.assertRaises(ValueError):
            unipoly_ops(p, q, "div")

    def test_snapped(self):
        p = UniPoly([1.0000000001 + 0j, -5 + 1e-10j, 1 + 0j])
        self.assertEqual(p.snapped(1e-8), UniPoly([1, -5, 1]))
        self.assertIsNone(UniPoly([0.5 + 0j]).snapped(1e-8))


if __name__ == "__main__":
    unittest.main()
