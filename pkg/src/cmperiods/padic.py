"""p-adic numbers at finite precision, Morita's Gamma_p and p-adic pFq limits."""
from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from threading import Lock
from typing import List, Optional

from .errors import ConvergenceError, DomainError, NoRootInQp
from .numerics import HypParams
from .quadfield import field_data

TERM_CAP = 200
WINDOW = 6
SAFETY = 3


def valuation(x, p: int) -> Optional[int]:
    """v_p of a nonzero rational; None for 0."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PadicNumber:
    """p^valuation * unit, with unit known modulo p^precision_K.

    The zero element is stored with unit 0 and precision_K 0; its valuation is
    then the absolute precision to which it is known to vanish.
    """

    p: int
    unit: int
    valuation: int
    precision_K: int

    def __post_init__(self):
        if self.precision_K < 0:
            raise DomainError("negative precision")
        if self.precision_K == 0:
            object.__setattr__(self, "unit", 0)
        else:
            u = self.unit % self.p**self.precision_K
            if u % self.p == 0:
                raise DomainError("unit part must be coprime to p")
            object.__setattr__(self, "unit", u)

    @classmethod
    def from_rational(cls, x, p: int, K: int) -> "PadicNumber":
        """x with K digits of relative precision."""
        x = Fraction(x)
        v = valuation(x, p)
        if v is None:
            return cls(p, 0, K, 0)
        y = x / Fraction(p) ** v
        mod = p**K
        return cls(p, y.numerator * pow(y.denominator, -1, mod) % mod, v, K)

    @classmethod
    def zero(cls, p: int, absolute: int) -> "PadicNumber":
        return cls(p, 0, absolute, 0)

    @property
    def is_zero(self) -> bool:
        return self.precision_K == 0

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.precision_K

    def reduce(self, K: int) -> "PadicNumber":
        """Drop to relative precision K."""
        if self.is_zero or K >= self.precision_K:
            return self
        return PadicNumber(self.p, self.unit, self.valuation, K)

    def _check(self, other):
        if not isinstance(other, PadicNumber):
            raise TypeError("expected PadicNumber")
        if other.p != self.p:
            raise DomainError("primes differ")

    def __mul__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(other, self.p, self.precision_K or 1)
        self._check(other)
        if self.is_zero or other.is_zero:
            a = self.valuation + (other.valuation if not other.is_zero else 0)
            b = other.valuation + (self.valuation if not self.is_zero else 0)
            return PadicNumber.zero(self.p, min(a, b) if self.is_zero and other.is_zero else max(a, b))
        K = min(self.precision_K, other.precision_K)
        return PadicNumber(self.p, self.unit * other.unit, self.valuation + other.valuation, K)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero:
            raise ZeroDivisionError("inverse of p-adic zero")
        mod = self.p**self.precision_K
        return PadicNumber(self.p, pow(self.unit, -1, mod), -self.valuation, self.precision_K)

    def __truediv__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(other, self.p, self.precision_K or 1)
        return self * other.inverse()

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.p, -self.unit, self.valuation, self.precision_K)

    def __add__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(other, self.p, self.absolute_precision - valuation_or(other, self.p))
        self._check(other)
        N = min(self.absolute_precision, other.absolute_precision)
        base = min(self.valuation, other.valuation)
        total = 0
        for x in (self, other):
            if not x.is_zero:
                total += x.unit * self.p ** (x.valuation - base)
        span = N - base
        if span <= 0:
            return PadicNumber.zero(self.p, N)
        total %= self.p**span
        if total == 0:
            return PadicNumber.zero(self.p, N)
        v = 0
        while total % self.p == 0:
            total //= self.p
            v += 1
        return PadicNumber(self.p, total, base + v, span - v)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(other, self.p, self.absolute_precision - valuation_or(other, self.p))
        return self + (-other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicNumber(self.p, 1, 0, self.precision_K or 1)
        if k == 0:
            return result
        if self.is_zero:
            return PadicNumber.zero(self.p, self.valuation * k)
        mod = self.p**self.precision_K
        return PadicNumber(self.p, pow(self.unit, k, mod), self.valuation * k, self.precision_K)

    def congruent(self, other, N: int) -> bool:
        """self == other modulo p^N (absolute)."""
        return (self - other).valuation >= N

    def residual_valuation(self, other) -> int:
        """Absolute precision to which self and other are known to agree."""
        diff = self - other
        return diff.valuation

    def digits(self) -> int:
        """Integer representative of the value modulo p^absolute_precision (v >= 0)."""
        if self.valuation < 0:
            raise DomainError("value is not a p-adic integer")
        if self.is_zero:
            return 0
        return self.unit * self.p**self.valuation

    def __str__(self):
        if self.is_zero:
            return f"O({self.p}^{self.valuation})"
        return f"{self.p}^{self.valuation}*{self.unit} + O({self.p}^{self.absolute_precision})"


def valuation_or(x, p, default=0):
    v = valuation(x, p)
    return default if v is None else v


# ------------------------------------------------------------ Gamma_p

_table_lock = Lock()


@lru_cache(maxsize=8)
def _prefix_table(p: int, K: int):
    """P[n] = prod_{0<j<n, p∤j} j mod p^K for 1 <= n <= p^K."""
    mod = p**K
    table = array("q", [0]) * (mod + 1)
    acc = 1
    table[1] = 1
    for n in range(2, mod + 1):
        j = n - 1
        if j % p:
            acc = acc * j % mod
        table[n] = acc
    return table


def _check_prime(p: int):
    if p == 2:
        raise DomainError("p = 2 is not supported")
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")


def gamma_p_integer(n: int, p: int, K: int) -> int:
    """Morita Gamma_p(n) mod p^K for a positive integer n.

    Full blocks of p^K consecutive integers contribute -1 each (Wilson), so
    only a partial block is multiplied out.
    """
    _check_prime(p)
    if n < 1:
        raise DomainError("n must be positive")
    mod = p**K
    q, r = divmod(n - 1, mod)
    with _table_lock:
        table = _prefix_table(p, K)
    prod = table[r + 1] if r else 1
    if q % 2:
        prod = -prod
    if n % 2:
        prod = -prod
    return prod % mod


def gamma_p_direct(n: int, p: int, K: int) -> int:
    """Definition by direct product; slow, used as a test oracle."""
    mod = p**K
    acc = 1
    for j in range(1, n):
        if j % p:
            acc = acc * j % mod
    return (-acc if n % 2 else acc) % mod


def gamma_p(x, p: int, K: int) -> PadicNumber:
    """Gamma_p(x) mod p^K for x in Z_p, via the integer n = x mod p^K in [1, p^K]."""
    _check_prime(p)
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DomainError(f"{x} is not a p-adic integer for p = {p}")
    mod = p**K
    n = x.numerator * pow(x.denominator, -1, mod) % mod
    if n == 0:
        n = mod
    return PadicNumber(p, gamma_p_integer(n, p, K), 0, K)


# ----------------------------------------------------------- roots


def _hensel_root(t: int, v: int, x0: int, p: int, K: int) -> int:
    mod = p
    x = x0 % p
    k = 1
    while k < K:
        k = min(2 * k, K)
        mod = p**k
        fx = (pow(x, v, mod) - t) % mod
        dfx = v * pow(x, v - 1, mod) % mod
        x = (x - fx * pow(dfx, -1, mod)) % mod
    return x


def unit_roots(u: PadicNumber, v: int) -> List[PadicNumber]:
    """All X with X^v = u for a unit u and v coprime to p."""
    p, K = u.p, u.precision_K
    if v % p == 0:
        raise DomainError("root degree divisible by p is not supported")
    if u.valuation % v:
        return []
    roots = []
    for x0 in range(1, p):
        if (pow(x0, v, p) - u.unit) % p == 0:
            roots.append(PadicNumber(p, _hensel_root(u.unit, v, x0, p, K), u.valuation // v, K))
    return roots


def sqrt_padic(x: PadicNumber) -> set:
    """Both square roots when they exist in Q_p, otherwise the empty set."""
    _check_prime(x.p)
    if x.is_zero:
        return {PadicNumber.zero(x.p, x.valuation // 2)}
    return set(unit_roots(x, 2))


def teichmuller(a: int, p: int, K: int) -> int:
    """Unique (p-1)-th root of unity congruent to a mod p."""
    mod = p**K
    x = a % mod
    for _ in range(K + 1):
        x = pow(x, p, mod)
    return x


def gamma_quotient_unit(d: int, p: int, K: int) -> PadicNumber:
    """U = prod_{a<|d|} Gamma_p(a/|d|)^chi_d(a)."""
    _check_prime(p)
    if d % p == 0:
        raise DomainError(f"p = {p} divides d = {d}")
    data = field_data(d)
    n = -d
    num = den = 1
    mod = p**K
    for a in range(1, n):
        c = data.chi(a)
        if c == 0:
            continue
        g = gamma_p(Fraction(a, n), p, K).unit
        if c > 0:
            num = num * g % mod
        else:
            den = den * g % mod
    return PadicNumber(p, num * pow(den, -1, mod), 0, K)


def omega_p_squared_candidates(d: int, p: int, K: int) -> set:
    """All X in Z_p with X^v = U^u where mu_d/(4 h_d) = u/v in lowest terms."""
    data = field_data(d)
    e = Fraction(data.mu, 4 * data.h)
    U = gamma_quotient_unit(d, p, K)
    target = U ** e.numerator
    if e.denominator == 1:
        return {target}
    roots = unit_roots(target, e.denominator)
    if not roots:
        raise NoRootInQp(f"U^{e.numerator} has no {e.denominator}-th root in Q_{p} (d = {d})")
    return set(roots)


# ------------------------------------------------------------- series


@dataclass(frozen=True)
class PadicSeriesResult:
    value: PadicNumber
    terms: int
    valuations: tuple
    partial_sums: tuple = field(repr=False)


def pfq_padic_detailed(params: HypParams, p: int, K: int, cap: int = TERM_CAP) -> PadicSeriesResult:
    _check_prime(p)
    z = params.argument
    if not isinstance(z, Fraction):
        raise DomainError("p-adic pFq needs a rational argument")
    num, den = params.numerator_params, params.denominator_params
    if z == 0:
        one = PadicNumber.from_rational(1, p, K)
        return PadicSeriesResult(one, 1, (0,), (Fraction(1),))
    term = Fraction(1)
    total = Fraction(1)
    vals = [0]
    sums = [total]
    for n in range(cap):
        ratio = z
        for a in num:
            ratio *= a + n
        for b in den:
            ratio /= b + n
        ratio /= n + 1
        term *= ratio
        if term == 0:
            return PadicSeriesResult(_to_padic(total, p, K), n + 2, tuple(vals), tuple(sums))
        total += term
        vals.append(valuation(term, p))
        sums.append(total)
        if len(vals) > WINDOW:
            window = vals[-WINDOW:]
            floor = K + SAFETY + max(0, -min(vals))
            growing = vals[-1] > vals[-WINDOW]
            if min(window) >= floor and growing:
                return PadicSeriesResult(_to_padic(total, p, K), n + 2, tuple(vals), tuple(sums))
    raise ConvergenceError(
        f"term valuations did not grow within {cap} terms (last valuations {vals[-WINDOW:]})"
    )


def _to_padic(x: Fraction, p: int, K: int) -> PadicNumber:
    """Rational as a p-adic number known modulo p^K (absolute)."""
    v = valuation(x, p)
    if v is None or v >= K:
        return PadicNumber.zero(p, K)
    return PadicNumber.from_rational(x, p, K - v)


def pfq_padic(params: HypParams, p: int, K: int) -> PadicNumber:
    return pfq_padic_detailed(params, p, K).value


# ------------------------------------------------------- tabulated p-adic rows


@dataclass(frozen=True)
class A2Target:
    """coefficient * sqrt(radicand)^radical_power."""

    coefficient: Fraction
    radicand: int = 1
    radical_power: int = 0

    def __str__(self):
        if self.radical_power == 0 or self.radicand == 1:
            return str(self.coefficient)
        return f"{self.coefficient}*sqrt({self.radicand})^{self.radical_power}"


@dataclass
class PadicRowReport:
    d: int
    status: str
    precision: int
    details: str
    choices: dict = field(default_factory=dict)


def verify_remark4_row(d: int, M: int, N: int, A2: A2Target, K: int, p: int = 7, slack: int = 0) -> PadicRowReport:
    """Search omega^2 candidates and square-root choices for F = A2 * omega^2 mod p^(K - slack)."""
    target_prec = K - slack
    params = HypParams(
        (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)), (Fraction(3, 4), Fraction(5, 4)), Fraction(M, N)
    )
    try:
        series = pfq_padic_detailed(params, p, K)
    except ConvergenceError as exc:
        return PadicRowReport(d, "SKIPPED", 0, f"ConvergenceError: {exc}")
    try:
        cands = sorted(omega_p_squared_candidates(d, p, K), key=lambda c: c.unit)
    except NoRootInQp as exc:
        return PadicRowReport(d, "SKIPPED", 0, f"NoRootInQp: {exc}")
    coeff = PadicNumber.from_rational(A2.coefficient, p, K)
    if A2.radical_power and A2.radicand != 1:
        radical = PadicNumber.from_rational(A2.radicand, p, K)
        roots = sorted(sqrt_padic(radical), key=lambda r: r.unit)
        if not roots:
            return PadicRowReport(
                d, "SKIPPED", 0, f"UNVERIFIABLE-IN-QP: {A2.radicand} is not a square mod {p}"
            )
        choices = [(r.unit, coeff * r**A2.radical_power) for r in roots]
    else:
        choices = [(None, coeff)]
    best = None
    for root_choice, a in choices:
        for c in cands:
            got = series.value.residual_valuation(a * c)
            if best is None or got > best[0]:
                best = (got, root_choice, c.unit)
    reached, root_choice, cand = best
    reached = min(reached, K)
    chosen = {"omega_sq_unit": cand, "sqrt_unit": root_choice, "terms": series.terms}
    status = "PASS" if reached >= target_prec else "FAIL"
    detail = f"congruent mod {p}^{reached} (target {p}^{target_prec}), {len(cands)} omega^2 candidate(s)"
    return PadicRowReport(d, status, reached, detail, chosen)
