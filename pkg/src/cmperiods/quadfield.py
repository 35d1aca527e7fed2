"""Imaginary quadratic fields: Kronecker characters, reduced forms, class
numbers and the Chowla-Selberg period constants omega_d, Omega_d."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .numerics import PrecisionContext, log_gamma


def _squarefree(n: int) -> bool:
    n = abs(n)
    if n % 4 == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def is_fundamental(d: int) -> bool:
    if d >= 0:
        raise DomainError(f"expected a negative discriminant, got {d}")
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _require_fundamental(d):
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a negative fundamental discriminant")


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d: int, a: int) -> int:
    """Kronecker symbol (d/a) for any integers with d = 0, 1 mod 4."""
    if a == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if a < 0:
        a = -a
        if d < 0:
            result = -result
    while a % 2 == 0:
        a //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    if a == 1:
        return result
    return result * _jacobi(d, a)


def kronecker_chi(d: int, a: int) -> int:
    """chi_d(a) for a negative fundamental discriminant d."""
    _require_fundamental(d)
    return kronecker(d, a)


@lru_cache(maxsize=None)
def _chi_table(d):
    n = -d
    return tuple(kronecker(d, a) for a in range(n))


def reduced_forms(d: int) -> list:
    """All reduced primitive forms (a, b, c) with b^2 - 4ac = d."""
    _require_fundamental(d)
    return list(_reduced_forms(d))


@lru_cache(maxsize=None)
def _reduced_forms(d):
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return tuple(forms)


def units_count(d: int) -> int:
    return 6 if d == -3 else 4 if d == -4 else 2


@dataclass(frozen=True)
class QuadFieldData:
    d: int
    h: int
    mu: int
    forms: tuple

    def chi(self, a: int) -> int:
        return _chi_table(self.d)[a % -self.d]


@lru_cache(maxsize=None)
def field_data(d: int) -> QuadFieldData:
    _require_fundamental(d)
    forms = _reduced_forms(d)
    return QuadFieldData(d, len(forms), units_count(d), forms)


def l_one_chi(d: int, ctx: PrecisionContext):
    """L(1, chi_d) by the finite closed form for odd characters.

    For d < 0 fundamental, L(1, chi_d) = -pi / |d|^{3/2} * sum_{a<|d|} chi_d(a) a.
    This is exact up to rounding, so no truncation bound is involved.
    """
    _require_fundamental(d)
    n = -d
    chi = _chi_table(d)
    s = sum(chi[a] * a for a in range(1, n))
    mp = ctx.mp
    return -mp.pi * s / mp.power(n, mp.mpf(3) / 2)


def class_number_analytic(d: int, ctx: PrecisionContext = None):
    """h = mu sqrt|d| L(1,chi_d) / (2 pi), returned unrounded."""
    ctx = ctx or PrecisionContext(30)
    mp = ctx.mp
    return units_count(d) * mp.sqrt(-d) * l_one_chi(d, ctx) / (2 * mp.pi)


def log_omega(d: int, ctx: PrecisionContext):
    data = field_data(d)
    n = -d
    mp = ctx.mp
    s = mp.zero
    for a in range(1, n):
        c = data.chi(a)
        if c:
            s += c * log_gamma(Fraction(a, n), ctx)
    return -mp.log(n) / 2 + mp.mpf(data.mu) / (4 * data.h) * s


def omega(d: int, ctx: PrecisionContext):
    """Chowla-Selberg constant omega_d via a log-Gamma sum."""
    return _omega_cached(d, ctx)


@lru_cache(maxsize=1024)
def _omega_cached(d, ctx):
    return ctx.mp.exp(log_omega(d, ctx))


def big_omega(d: int, ctx: PrecisionContext):
    """Omega_d = sqrt(pi |d|) omega_d."""
    mp = ctx.mp
    return mp.sqrt(mp.pi * (-d)) * omega(d, ctx)


def reduced_form_points(d: int, ctx: PrecisionContext):
    """Heegner points tau_j = (-b_j + sqrt d)/(2 a_j), one per reduced form."""
    mp = ctx.mp
    root = mp.sqrt(-d)
    return [(a, mp.mpc(mp.mpf(-b) / (2 * a), root / (2 * a))) for a, b, _ in _reduced_forms(d)]
