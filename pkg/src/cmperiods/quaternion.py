"""Arithmetic in the quaternion algebra B = (-1, 3 / Q).

Elements are x + yI + zJ + wIJ with I^2 = -1, J^2 = 3, IJ = -JI.  The maximal
order is O = Z + ZI + ZJ + Z(1 + I + J + IJ)/2 and the trace-zero lattice
L = O ∩ {tr = 0} = ZI + ZJ + ZIJ carries the pairing <a, b> = tr(a b').
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError, PrecisionError
from .numerics import PrecisionContext


@dataclass(frozen=True)
class QuatElement:
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)
    w: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("x", "y", "z", "w"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def coords(self):
        return (self.x, self.y, self.z, self.w)

    def trace(self) -> Fraction:
        return 2 * self.x

    def norm(self) -> Fraction:
        return self.x**2 + self.y**2 - 3 * self.z**2 - 3 * self.w**2

    def conj(self) -> "QuatElement":
        return QuatElement(self.x, -self.y, -self.z, -self.w)

    def inverse(self) -> "QuatElement":
        n = self.norm()
        if n == 0:
            raise DomainError("element of norm 0 is not invertible")
        return self.conj().scale(1 / n)

    def scale(self, c) -> "QuatElement":
        c = Fraction(c)
        return QuatElement(self.x * c, self.y * c, self.z * c, self.w * c)

    def __add__(self, other):
        other = _coerce(other)
        return QuatElement(*(a + b for a, b in zip(self.coords, other.coords)))

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        other = _coerce(other)
        return QuatElement(*(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return quat_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __str__(self):
        parts = []
        for c, name in zip(self.coords, ("", "I", "J", "IJ")):
            if c:
                parts.append(f"{c}{name}" if name else f"{c}")
        return " + ".join(parts) or "0"


def _coerce(v):
    if isinstance(v, QuatElement):
        return v
    return QuatElement(Fraction(v))


ONE = QuatElement(1)
I = QuatElement(0, 1)
J = QuatElement(0, 0, 1)
IJ = QuatElement(0, 0, 0, 1)
E = QuatElement(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
ORDER_BASIS = (ONE, I, J, E)


def quat_mul(a: QuatElement, b: QuatElement) -> QuatElement:
    x1, y1, z1, w1 = a.coords
    x2, y2, z2, w2 = b.coords
    return QuatElement(
        x1 * x2 - y1 * y2 + 3 * z1 * z2 + 3 * w1 * w2,
        x1 * y2 + y1 * x2 - 3 * z1 * w2 + 3 * w1 * z2,
        x1 * z2 + z1 * x2 - y1 * w2 + w1 * y2,
        x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
    )


def order_coordinates(a: QuatElement):
    """Solve a = c0 + c1 I + c2 J + c3 (1+I+J+IJ)/2 over Q.

    The basis matrix is unitriangular after reordering, so back substitution
    gives the unique rational solution.
    """
    c3 = 2 * a.w
    half = c3 / 2
    return (a.x - half, a.y - half, a.z - half, c3)


def in_order(a: QuatElement) -> bool:
    return all(c.denominator == 1 for c in order_coordinates(a))


def pure(a1, a2, a3) -> QuatElement:
    return QuatElement(0, a1, a2, a3)


def embed_matrix(a: QuatElement, ctx: PrecisionContext):
    """iota(a) with iota(I) = ((0,-1),(1,0)), iota(J) = diag(sqrt3, -sqrt3)."""
    mp = ctx.mp
    r3 = mp.sqrt(3)
    x, y, z, w = (ctx.real(c) for c in a.coords)
    return mp.matrix([[x + z * r3, -y + w * r3], [y + w * r3, x - z * r3]])


def mobius(m, tau):
    return (m[0, 0] * tau + m[0, 1]) / (m[1, 0] * tau + m[1, 1])


def cm_point(a1: int, a2: int, a3: int, d: int, ctx: PrecisionContext):
    """tau_d = (a2 sqrt3 + sqrt d)/(a1 + a3 sqrt3), checked as a fixed point."""
    tau, residual = cm_point_with_residual(a1, a2, a3, d, ctx)
    if residual > ctx.mp.mpf(10) ** (-(ctx.decimal_digits - 5)):
        raise PrecisionError(f"fixed-point residual {residual} too large")
    return tau


def cm_point_with_residual(a1, a2, a3, d, ctx: PrecisionContext):
    if d >= 0:
        raise DomainError("d must be negative")
    mp = ctx.mp
    r3 = mp.sqrt(3)
    den = a1 + a3 * r3
    if not den > 0:
        raise DomainError("a1 + a3*sqrt(3) must be positive")
    lam = pure(a1, a2, a3)
    if lam.norm() != -d:
        raise DomainError(f"n({lam}) = {lam.norm()} differs from |d| = {-d}")
    tau = mp.mpc(a2 * r3, mp.sqrt(-d)) / den
    image = mobius(embed_matrix(lam, ctx), tau)
    return tau, abs(image - tau) / abs(tau)


def z_point(tau, ctx: PrecisionContext):
    """iota of z(tau) = ((1+tau^2)/2) I + (tau/sqrt3) J + ((1-tau^2)/(2 sqrt3)) IJ.

    This is the isotropic vector attached to tau; conjugation by alpha acts on
    it compatibly with the Mobius action of iota(alpha).
    """
    mp = ctx.mp
    r3 = mp.sqrt(3)
    cy = (1 + tau**2) / 2
    cz = tau / r3
    cw = (1 - tau**2) / (2 * r3)
    return mp.matrix([[cz * r3, -cy + cw * r3], [cy + cw * r3, -cz * r3]])


# --------------------------------------------------------- lattices


def pairing(u, v) -> int:
    """<u, v> = tr(u v') on L = ZI + ZJ + ZIJ in coordinates (y, z, w)."""
    return 2 * (u[0] * v[0] - 3 * u[1] * v[1] - 3 * u[2] * v[2])


def _check_pure_order(lam: QuatElement):
    if lam.trace() != 0:
        raise DomainError(f"trace of {lam} is not 0")
    if lam.norm() <= 0:
        raise DomainError(f"norm of {lam} is not positive")
    if not in_order(lam):
        raise DomainError(f"{lam} is not in the maximal order")


def content(lam: QuatElement) -> int:
    """Largest g with lam/g in O, for trace-zero lam in O."""
    _check_pure_order(lam)
    return gcd(gcd(int(lam.y), int(lam.z)), int(lam.w))


def primitive_part(lam: QuatElement) -> QuatElement:
    return lam.scale(Fraction(1, content(lam)))


def embedding_discriminant(lam: QuatElement) -> int:
    lam0 = primitive_part(lam)
    n = int(lam0.norm())
    if in_order((ONE + lam0).scale(Fraction(1, 2))):
        return -n
    return -4 * n


def integer_kernel(row):
    """Basis of {v in Z^k : row . v = 0} by unimodular column reduction."""
    k = len(row)
    row = list(row)
    basis = [[int(i == j) for j in range(k)] for i in range(k)]  # columns of U
    while sum(1 for c in row if c) > 1:
        nz = [i for i in range(k) if row[i]]
        p = min(nz, key=lambda i: abs(row[i]))
        for i in nz:
            if i == p:
                continue
            q = row[i] // row[p]
            row[i] -= q * row[p]
            basis[i] = [a - q * b for a, b in zip(basis[i], basis[p])]
    return [basis[i] for i in range(k) if row[i] == 0]


@dataclass(frozen=True)
class LatticeSplit:
    lattice_basis_plus: tuple
    lattice_basis_minus: tuple
    gram_minus: tuple
    disc_minus: int


def lattice_split(lam: QuatElement) -> LatticeSplit:
    g = content(lam)
    v = (int(lam.y), int(lam.z), int(lam.w))
    plus = tuple(c // g for c in v)
    row = (2 * v[0], -6 * v[1], -6 * v[2])
    minus = integer_kernel(row)
    if len(minus) != 2:
        raise DomainError("kernel of the pairing map is not of rank 2")
    u, w = minus
    gram = ((pairing(u, u), pairing(u, w)), (pairing(w, u), pairing(w, w)))
    disc = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0]
    return LatticeSplit((plus,), (tuple(u), tuple(w)), gram, disc)


def level_cofactor_r(d: int) -> int:
    """r = product of the primes p | 6 not dividing d."""
    return (2 if d % 2 else 1) * (3 if d % 3 else 1)
