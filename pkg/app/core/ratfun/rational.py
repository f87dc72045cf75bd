"""
Rational functions N/D in y1..yl over QQ.

Canonical form: gcd(N, D) = 1 and D monic in graded-lex order. Construction
reduces with sympy's ``cancel``; arithmetic cancels against the operands'
denominators (Henrici style), so reduced inputs give reduced outputs
without a full gcd of the product. When a gcd would run past the term cap
the result is kept unreduced and ``reduced`` is False; equality still works
because it cross-multiplies.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.core.pipeline.config_manager import GCD_TERM_CAP, SINGULAR_THRESHOLD
from app.core.ratfun.multipoly import (
    GcdBudgetExceeded,
    MultiPoly,
    check_gcd_budget,
    exact_quotient,
    poly_gcd,
)
from app.core.ratfun.scalars import is_singular
from app.utils.exceptions import EvaluationSingularError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def _gcd_capped(a: MultiPoly, b: MultiPoly, cap: Optional[int]) -> Optional[MultiPoly]:
    try:
        return poly_gcd(a, b, cap=cap)
    except GcdBudgetExceeded:
        return None


def _cancel(num: MultiPoly, den: MultiPoly, cap: Optional[int]) -> Optional[Tuple[MultiPoly, MultiPoly]]:
    try:
        check_gcd_budget(num, den, cap)
    except GcdBudgetExceeded:
        return None
    p, q = num.element.cancel(den.element)
    return MultiPoly.wrap(p), MultiPoly.wrap(q)


class RationalFunction:
    __slots__ = ("numerator", "denominator", "reduced", "cap")

    def __init__(
        self,
        numerator: MultiPoly,
        denominator: Optional[MultiPoly] = None,
        *,
        normalize: bool = True,
        cap: Optional[int] = GCD_TERM_CAP,
    ):
        if denominator is None:
            denominator = MultiPoly.one(numerator.nvars)
        if numerator.nvars != denominator.nvars:
            raise ValueError("numerator and denominator use different variable counts")
        if denominator.is_zero:
            raise EvaluationSingularError("identically zero denominator")
        self.cap = cap
        self.reduced = True
        if numerator.is_zero:
            denominator = MultiPoly.one(numerator.nvars)
        elif normalize and not denominator.is_constant:
            cancelled = _cancel(numerator, denominator, cap)
            if cancelled is None:
                self.reduced = False
            else:
                numerator, denominator = cancelled
        lc = denominator.leading_coefficient()
        if lc != 1:
            numerator = numerator * (1 / lc)
            denominator = denominator * (1 / lc)
        self.numerator = numerator
        self.denominator = denominator

    @classmethod
    def _trusted(cls, num: MultiPoly, den: MultiPoly, reduced: bool, cap) -> "RationalFunction":
        # caller guarantees gcd(num, den) = 1 (when reduced) and den != 0
        obj = cls.__new__(cls)
        obj.cap = cap
        obj.reduced = reduced
        if num.is_zero:
            den = MultiPoly.one(num.nvars)
        lc = den.leading_coefficient()
        if lc != 1:
            num = num * (1 / lc)
            den = den * (1 / lc)
        obj.numerator = num
        obj.denominator = den
        return obj

    # ---------------------------------------------------------------------
    # CONSTRUCTORS
    # ---------------------------------------------------------------------

    @classmethod
    def variable(cls, nvars: int, index: int) -> "RationalFunction":
        return cls(MultiPoly.variable(nvars, index))

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "RationalFunction":
        return cls(MultiPoly.constant(nvars, value))

    @classmethod
    def variables(cls, nvars: int) -> List["RationalFunction"]:
        return [cls.variable(nvars, i) for i in range(nvars)]

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    def is_zero(self) -> bool:
        return self.numerator.is_zero

    def coerce_coefficient(self, coeff: Fraction) -> "RationalFunction":
        return RationalFunction.constant(self.nvars, coeff)

    # ---------------------------------------------------------------------
    # ARITHMETIC
    # ---------------------------------------------------------------------

    def _coerce(self, other) -> Optional["RationalFunction"]:
        if isinstance(other, RationalFunction):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction._trusted(other, MultiPoly.one(self.nvars), True, self.cap)
        if isinstance(other, (int, Fraction)):
            return RationalFunction._trusted(
                MultiPoly.constant(self.nvars, other), MultiPoly.one(self.nvars), True, self.cap
            )
        return None

    def _gcd(self, a: MultiPoly, b: MultiPoly) -> Optional[MultiPoly]:
        if a.is_constant or b.is_constant:
            return MultiPoly.one(a.nvars)
        return _gcd_capped(a, b, self.cap)

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.numerator, self.denominator
        c, d = other.numerator, other.denominator
        reduced = self.reduced and other.reduced
        if d.is_constant:
            return RationalFunction._trusted(a + c * b * (1 / d.constant_value()), b, reduced, self.cap)
        if b.is_constant:
            return RationalFunction._trusted(c + a * d * (1 / b.constant_value()), d, reduced, self.cap)
        g = self._gcd(b, d)
        if g is None:
            return RationalFunction._trusted(a * d + c * b, b * d, False, self.cap)
        if g.is_constant:
            return RationalFunction._trusted(a * d + c * b, b * d, reduced, self.cap)
        b1 = exact_quotient(b, g)
        d1 = exact_quotient(d, g)
        t = a * d1 + c * b1
        g2 = self._gcd(t, g)
        if g2 is None:
            return RationalFunction._trusted(t, b1 * d, False, self.cap)
        if not g2.is_constant:
            t = exact_quotient(t, g2)
            d = exact_quotient(d, g2)
        return RationalFunction._trusted(t, b1 * d, reduced, self.cap)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._trusted(-self.numerator, self.denominator, self.reduced, self.cap)

    def __sub__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.numerator, self.denominator
        c, d = other.numerator, other.denominator
        reduced = self.reduced and other.reduced
        g1 = self._gcd(a, d)
        g2 = self._gcd(c, b)
        if g1 is None or g2 is None:
            return RationalFunction._trusted(a * c, b * d, False, self.cap)
        if not g1.is_constant:
            a, d = exact_quotient(a, g1), exact_quotient(d, g1)
        if not g2.is_constant:
            c, b = exact_quotient(c, g2), exact_quotient(b, g2)
        return RationalFunction._trusted(a * c, b * d, reduced, self.cap)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.numerator.is_zero:
            raise EvaluationSingularError("reciprocal of the zero rational function")
        return RationalFunction._trusted(self.denominator, self.numerator, self.reduced, self.cap)

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, exponent: int) -> "RationalFunction":
        exponent = int(exponent)
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        return RationalFunction._trusted(
            self.numerator ** exponent, self.denominator ** exponent, self.reduced, self.cap
        )

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self) -> int:
        # meaningful for reduced values only
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        from app.core.ratfun.text_format import format_rational

        return f"RationalFunction({format_rational(self)!r})"

    def __str__(self) -> str:
        from app.core.ratfun.text_format import format_rational

        return format_rational(self)

    def normalized(self) -> "RationalFunction":
        """Force a full reduction (ignores the term cap)."""
        if self.reduced:
            return self
        return RationalFunction(self.numerator, self.denominator, cap=None)

    # ---------------------------------------------------------------------
    # EVALUATION & CALCULUS
    # ---------------------------------------------------------------------

    def evaluate(self, point: Sequence, *, threshold: float = SINGULAR_THRESHOLD):
        """Value at ``point``; raises EvaluationSingularError on a vanishing denominator."""
        den = self.denominator.evaluate(point)
        if is_singular(den, threshold):
            raise EvaluationSingularError("denominator vanishes at the evaluation point")
        return self.numerator.evaluate(point) / den

    def derivative(self, index: int) -> "RationalFunction":
        n, d = self.numerator, self.denominator
        num = n.derivative(index) * d - n * d.derivative(index)
        return RationalFunction(num, d * d, cap=self.cap)


def rat_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise EvaluationSingularError("division by the zero rational function")
        return a / b
    raise ValueError(f"unknown rational operation {op!r}")


def rat_eval(f: RationalFunction, point: Sequence, *, threshold: float = SINGULAR_THRESHOLD):
    return f.evaluate(point, threshold=threshold)


def rat_derive(f: RationalFunction, index: int) -> RationalFunction:
    return f.derivative(index)


def _poly_at(
    p: MultiPoly,
    args: Sequence[RationalFunction],
) -> Tuple[MultiPoly, Dict[int, int]]:
    """
    p(args) over the common denominator prod q_i^{M_i}; returns the numerator
    together with the exponents M_i.
    """
    nvars = args[0].nvars
    top = {i: p.degree(i) for i in range(p.nvars) if p.degree(i)}
    num_pow: Dict[Tuple[int, int], MultiPoly] = {}
    den_pow: Dict[Tuple[int, int], MultiPoly] = {}

    def power(cache, poly, key):
        if key not in cache:
            cache[key] = poly ** key[1]
        return cache[key]

    total = MultiPoly.zero(nvars)
    for exp, coeff in p.items():
        term = MultiPoly.constant(nvars, coeff)
        for i, top_i in top.items():
            k = exp[i]
            if k:
                term = term * power(num_pow, args[i].numerator, (i, k))
            if top_i - k:
                term = term * power(den_pow, args[i].denominator, (i, top_i - k))
        total = total + term
    return total, top


def rat_compose(f: RationalFunction, args: Sequence[RationalFunction]) -> RationalFunction:
    """Substitute ``args[i]`` for y_{i+1} in ``f`` with a single final reduction."""
    if len(args) != f.nvars:
        raise ValueError(f"need {f.nvars} arguments, got {len(args)}")
    if not args:
        return f
    nvars = args[0].nvars
    num, top_num = _poly_at(f.numerator, args)
    den, top_den = _poly_at(f.denominator, args)
    if den.is_zero:
        raise EvaluationSingularError("substitution gives an identically zero denominator")
    for i in set(top_num) | set(top_den):
        shift = top_den.get(i, 0) - top_num.get(i, 0)
        q = args[i].denominator
        if shift > 0:
            num = num * q ** shift
        elif shift < 0:
            den = den * q ** (-shift)
    if num.is_zero:
        return RationalFunction.constant(nvars, 0)
    return RationalFunction(num, den, cap=f.cap)
