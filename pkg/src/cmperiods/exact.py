"""Exact arithmetic in Q(sqrt m) and polynomials over it."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZero, DomainError
from .numerics import PrecisionContext

MAX_DEGREE = 8


def _squarefree_positive(m: int) -> bool:
    if m < 1:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class QuadExt:
    """a + b sqrt(m) with a, b rational and m a squarefree positive integer."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    m: int = 1

    def __post_init__(self):
        a, b, m = Fraction(self.a), Fraction(self.b), int(self.m)
        if not _squarefree_positive(m):
            raise DomainError(f"m = {m} is not a squarefree positive integer")
        if m == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)

    def _lift(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            return other
        return QuadExt(Fraction(other), 0, self.m)

    def _common(self, other):
        other = self._lift(other)
        if self.b and other.b and self.m != other.m:
            raise DomainError(f"mixing Q(sqrt {self.m}) and Q(sqrt {other.m})")
        m = self.m if self.b else other.m
        return QuadExt(self.a, self.b, m), QuadExt(other.a, other.b, m)

    def __add__(self, other):
        x, y = self._common(other)
        return QuadExt(x.a + y.a, x.b + y.b, x.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.m)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        x, y = self._common(other)
        return QuadExt(x.a * y.a + x.b * y.b * x.m, x.a * y.b + x.b * y.a, x.m)

    __rmul__ = __mul__

    def conj(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.m

    def inv(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero in Q(sqrt m)")
        return QuadExt(self.a / n, -self.b / n, self.m)

    def __truediv__(self, other):
        return self * self._lift(other).inv()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = QuadExt(1, 0, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        o = self._lift(other)
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        return self.a == o.a and self.b == o.b and self.m == o.m

    def __hash__(self):
        return hash((self.a, self.b, self.m if self.b else 1))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign of the real number a + b sqrt(m)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        lhs = self.a * self.a
        rhs = self.b * self.b * self.m
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def to_real(self, ctx: PrecisionContext):
        mp = ctx.mp
        return ctx.real(self.a) + ctx.real(self.b) * mp.sqrt(self.m)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.m})"

    def to_json(self):
        return {
            "a_num": self.a.numerator,
            "a_den": self.a.denominator,
            "b_num": self.b.numerator,
            "b_den": self.b.denominator,
            "m": self.m,
        }

    @classmethod
    def from_json(cls, obj) -> "QuadExt":
        return cls(Fraction(obj["a_num"], obj["a_den"]), Fraction(obj["b_num"], obj["b_den"]), obj["m"])


def quadext_ops(x: QuadExt, y: QuadExt = None, op: str = "add", ctx: PrecisionContext = None):
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inv()
    if op == "conj":
        return x.conj()
    if op == "to_real":
        return x.to_real(ctx or PrecisionContext())
    raise DomainError(f"unknown op {op!r}")


class QuadPoly:
    """Polynomial sum coeffs[i] y^i over Q(sqrt m), stored low degree first."""

    __slots__ = ("coeffs", "m")

    def __init__(self, coeffs: Sequence, m: int = None):
        cs = [c if isinstance(c, QuadExt) else QuadExt(Fraction(c)) for c in coeffs]
        if m is None:
            m = next((c.m for c in cs if c.b), 1)
        for c in cs:
            if c.b and c.m != m:
                raise DomainError(f"coefficient {c} is not in Q(sqrt {m})")
        cs = [c if c.m == m else QuadExt(c.a, 0, m) for c in cs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if len(cs) - 1 > MAX_DEGREE:
            raise DomainError(f"degree {len(cs) - 1} exceeds {MAX_DEGREE}")
        self.coeffs = tuple(cs)
        self.m = m

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> QuadExt:
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, QuadPoly) and self.coeffs == other.coeffs

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = QuadExt(0, 0, self.m)
        out = [
            (self.coeffs[i] if i < len(self.coeffs) else zero) + (other.coeffs[i] if i < len(other.coeffs) else zero)
            for i in range(n)
        ]
        return QuadPoly(out, self.m)

    def __sub__(self, other):
        return self + other.scale(QuadExt(-1, 0, self.m))

    def scale(self, c: QuadExt):
        return QuadPoly([c * x for x in self.coeffs], self.m)

    def __mul__(self, other):
        if not isinstance(other, QuadPoly):
            return self.scale(QuadExt(Fraction(other)) if not isinstance(other, QuadExt) else other)
        if self.is_zero() or other.is_zero():
            return QuadPoly([], self.m)
        out = [QuadExt(0, 0, self.m)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return QuadPoly(out, self.m)

    def conj(self):
        return QuadPoly([c.conj() for c in self.coeffs], self.m)

    def monic(self):
        return self.scale(self.leading().inv())

    def __call__(self, y):
        acc = QuadExt(0, 0, self.m)
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def __repr__(self):
        return f"QuadPoly({[str(c) for c in self.coeffs]})"


def poly_divrem(p: QuadPoly, q: QuadPoly):
    if q.is_zero():
        raise DivisionByZero("polynomial division by zero")
    m = p.m if any(c.b for c in p.coeffs) else q.m
    rem = list(p.coeffs)
    dq = q.degree
    lead_inv = q.leading().inv()
    quot = [QuadExt(0, 0, m)] * max(len(rem) - dq, 0)
    while len(rem) - 1 >= dq and rem:
        k = len(rem) - 1 - dq
        c = rem[-1] * lead_inv
        quot[k] = c
        for i, b in enumerate(q.coeffs):
            rem[i + k] = rem[i + k] - c * b
        rem.pop()
        while rem and rem[-1].is_zero():
            rem.pop()
    return QuadPoly(quot, m), QuadPoly(rem, m)


# ----------------------------------------------------- the d = -276 sextic


@dataclass(frozen=True)
class CoefficientTemplate:
    """scale * (p + q s)^power."""

    scale: Fraction
    p: Fraction
    q: Fraction
    power: int = 1

    def at(self, s: QuadExt) -> QuadExt:
        return (s * self.q + self.p) ** self.power * self.scale


def build_section6_sextic(s: QuadExt, templates=None) -> QuadPoly:
    """Degree-6 polynomial whose coefficients are the templates evaluated at s.

    ``templates`` lists CoefficientTemplate objects from y^0 up to y^6; the
    default comes from the packaged fixture file.
    """
    if templates is None:
        from .fixtures import load_section6

        templates = load_section6()["sextic"]
    poly = QuadPoly([t.at(s) for t in templates], s.m)
    if poly.degree != 6:
        raise DomainError(f"expected a sextic, got degree {poly.degree}")
    return poly
