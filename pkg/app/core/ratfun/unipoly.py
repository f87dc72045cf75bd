"""Dense univariate polynomials in t over any scalar kind."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from app.core.pipeline.config_manager import MULTIPLICITY_TOLERANCE
from app.core.ratfun.scalars import snap_integer, to_complex
from app.utils.exceptions import MultiplicityMismatchError


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction)) or hasattr(c, "is_rational")


def _exact_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


class UniPoly:
    """Coefficients low to high: coefficients[k] multiplies t^k."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        coeffs = list(coefficients)
        while coeffs and _exact_zero(coeffs[-1]):
            coeffs.pop()
        self.coefficients: Tuple = tuple(coeffs)

    @classmethod
    def linear_power(cls, k: int) -> "UniPoly":
        """(t - 1)^k with integer coefficients."""
        result = cls([1])
        for _ in range(k):
            result = result * cls([-1, 1])
        return result

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coefficients)

    def leading_coefficient(self):
        return self.coefficients[-1] if self.coefficients else 0

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int):
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __add__(self, other: "UniPoly") -> "UniPoly":
        size = max(len(self), len(other))
        return UniPoly(self[k] + other[k] for k in range(size))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coefficients)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coefficients)
        if not self.coefficients or not other.coefficients:
            return UniPoly([])
        out: List = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def eval_at(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def divide_linear(self, root=1) -> Tuple["UniPoly", object]:
        """Synthetic division by (t - root): (quotient, remainder)."""
        if not self.coefficients:
            return UniPoly([]), 0
        acc = 0
        quotient = []
        for c in reversed(self.coefficients):
            acc = acc * root + c
            quotient.append(acc)
        remainder = quotient.pop()
        return UniPoly(reversed(quotient)), remainder

    def _negligible(self, r, tol: float) -> bool:
        if _is_exact(r):
            return _exact_zero(r)
        scale = max((abs(to_complex(c)) for c in self.coefficients), default=1.0)
        return abs(to_complex(r)) <= tol * max(1.0, scale)

    def root_multiplicity(self, root=1, tol: float = MULTIPLICITY_TOLERANCE) -> Tuple[int, "UniPoly"]:
        """
        Multiplicity of ``root`` and the cofactor q with p = (t - root)^k q.
        Exact coefficients divide exactly, floating ones accept a remainder
        up to ``tol`` relative to the largest coefficient.
        """
        k = 0
        current = self
        while current.degree >= 1:
            quotient, remainder = current.divide_linear(root)
            if not current._negligible(remainder, tol):
                break
            current = quotient
            k += 1
        return k, current

    def divide_by_linear_power(self, k: int, tol: float = MULTIPLICITY_TOLERANCE) -> "UniPoly":
        """
        p / (t - 1)^k. Raises MultiplicityMismatchError (carrying the actual
        multiplicity) when some remainder along the way is not negligible.
        """
        current = self
        for _ in range(k):
            quotient, remainder = current.divide_linear(1)
            if not current._negligible(remainder, tol):
                found, _ = self.root_multiplicity(1, tol)
                raise MultiplicityMismatchError(found, k)
            current = quotient
        return current

    def snapped(self, tol: float) -> Optional["UniPoly"]:
        """Integer copy when every coefficient is within ``tol`` of one."""
        ints = []
        for c in self.coefficients:
            if _is_exact(c):
                if hasattr(c, "is_rational"):
                    if not c.is_rational or c.a.denominator != 1:
                        return None
                    ints.append(int(c.a))
                    continue
                if Fraction(c).denominator != 1:
                    return None
                ints.append(int(c))
                continue
            k = snap_integer(c, tol * max(1.0, abs(to_complex(c))))
            if k is None:
                return None
            ints.append(k)
        return UniPoly(ints)

    def to_complex(self) -> "UniPoly":
        return UniPoly(to_complex(c) for c in self.coefficients)

    def __repr__(self) -> str:
        return f"UniPoly({format_unipoly(self)!r})"


def unipoly_ops(p: UniPoly, q, op: str):
    """
    Dispatch by name. ``q`` is a UniPoly for add/sub/mul, the power k for
    divide_by_linear_power and the point for eval_at.
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "divide_by_linear_power":
        return p.divide_by_linear_power(int(q))
    if op == "eval_at":
        return p.eval_at(q)
    raise ValueError(f"unknown polynomial operation {op!r}")


def format_unipoly(p: UniPoly, var: str = "t") -> str:
    """Highest power first, e.g. ``t^2 - 5*t + 1``."""
    pieces: List[str] = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if _exact_zero(c):
            continue
        text = _coeff_text(c)
        negative = text.startswith("-")
        body = text[1:] if negative else text
        if k == 0:
            term = body
        else:
            power = var if k == 1 else f"{var}^{k}"
            term = power if body == "1" else f"{body}*{power}"
        if not pieces:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(pieces) if pieces else "0"


def _coeff_text(c) -> str:
    if isinstance(c, (int, Fraction)):
        return str(c)
    if hasattr(c, "is_rational"):
        text = str(c)
        if c.is_rational or c.a == 0:
            return text
        return f"({text})" if not text.startswith("-") else f"-({str(-c)})"
    z = to_complex(c)
    if z.imag == 0:
        return repr(z.real)
    return f"({z.real!r}{z.imag:+.17g}j)"
