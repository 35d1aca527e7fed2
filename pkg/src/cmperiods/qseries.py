"""Exact q-expansions of Dedekind eta quotients.

A :class:`QSeries` stores c_0, c_1, ... for the monomials q^(leading + k);
only the first ``truncation_order`` coefficients are known.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Tuple

from .errors import DomainError, PrecisionError
from .numerics import PrecisionContext, qexp_eval

DEFAULT_TRUNCATION = 200


@dataclass(frozen=True)
class QSeries:
    leading_exponent: Fraction
    coefficients: Tuple[Fraction, ...]
    truncation_order: int = -1

    def __post_init__(self):
        lead = Fraction(self.leading_exponent)
        if 24 % lead.denominator:
            raise DomainError(f"leading exponent {lead} is not in (1/24)Z")
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        n = self.truncation_order
        if n < 0:
            n = len(coeffs)
        if n > len(coeffs):
            coeffs = coeffs + (Fraction(0),) * (n - len(coeffs))
        object.__setattr__(self, "leading_exponent", lead)
        object.__setattr__(self, "coefficients", coeffs[:n])
        object.__setattr__(self, "truncation_order", n)

    @property
    def precision(self) -> Fraction:
        """Exponents below this value are known exactly."""
        return self.leading_exponent + self.truncation_order

    def coefficient(self, exponent) -> Fraction:
        exponent = Fraction(exponent)
        k = exponent - self.leading_exponent
        if k.denominator != 1:
            return Fraction(0)
        if k < 0:
            return Fraction(0)
        if k >= self.truncation_order:
            raise DomainError(f"coefficient of q^{exponent} lies beyond the truncation")
        return self.coefficients[int(k)]

    def terms(self):
        """Nonzero (exponent, coefficient) pairs."""
        return [(self.leading_exponent + k, c) for k, c in enumerate(self.coefficients) if c]

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.leading_exponent, tuple(c * a for a in self.coefficients), self.truncation_order)

    def __add__(self, other: "QSeries") -> "QSeries":
        return series_add(self, other)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __str__(self):
        parts = []
        for e, c in self.terms()[:8]:
            parts.append(f"{c}*q^{e}")
        return " + ".join(parts) + f" + O(q^{self.precision})"


def series_add(a: QSeries, b: QSeries) -> QSeries:
    shift = b.leading_exponent - a.leading_exponent
    if shift.denominator != 1:
        raise DomainError("series exponents differ by a non-integer")
    lead = min(a.leading_exponent, b.leading_exponent)
    prec = min(a.precision, b.precision)
    n = int(prec - lead)
    out = []
    for k in range(n):
        e = lead + k
        out.append(_coef_or_zero(a, e) + _coef_or_zero(b, e))
    return QSeries(lead, tuple(out), n)


def _coef_or_zero(s, e):
    k = e - s.leading_exponent
    if k < 0:
        return Fraction(0)
    return s.coefficients[int(k)]


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.truncation_order, b.truncation_order)
    ca, cb = a.coefficients, b.coefficients
    out = []
    for k in range(n):
        s = Fraction(0)
        for i in range(k + 1):
            if ca[i] and cb[k - i]:
                s += ca[i] * cb[k - i]
        out.append(s)
    return QSeries(a.leading_exponent + b.leading_exponent, tuple(out), n)


def series_pow(a: QSeries, r: int) -> QSeries:
    """a^r for integer r (possibly negative) when a has leading coefficient != 0.

    Uses the recurrence b_n = (1/(n a_0)) sum_{k=1..n} ((r+1)k - n) a_k b_{n-k}.
    """
    c = a.coefficients
    n = a.truncation_order
    if not n or c[0] == 0:
        raise DomainError("series power needs a nonzero leading coefficient")
    out = [c[0] ** r]
    for m in range(1, n):
        s = Fraction(0)
        for k in range(1, m + 1):
            if c[k]:
                s += ((r + 1) * k - m) * c[k] * out[m - k]
        out.append(s / (m * c[0]))
    return QSeries(a.leading_exponent * r, tuple(out), n)


def series_inverse(a: QSeries) -> QSeries:
    return series_pow(a, -1)


def one(upto: int = DEFAULT_TRUNCATION) -> QSeries:
    return QSeries(Fraction(0), (Fraction(1),), upto)


# ---------------------------------------------------------------- eta


def _pentagonal_product(upto: int):
    """Coefficients of prod_{n>=1} (1 - q^n) below q^upto (Euler)."""
    c = [0] * upto
    k = 0
    while True:
        done = True
        for j in ((k, -k) if k else (0,)):
            e = j * (3 * j - 1) // 2
            if e < upto:
                c[e] += -1 if j % 2 else 1
                done = False
        if done:
            break
        k += 1
    return c


def eta_expansion(upto: int = DEFAULT_TRUNCATION) -> QSeries:
    """eta(tau) = q^(1/24) prod (1 - q^n), coefficients of q^(1/24 + k), k < upto."""
    if upto < 1:
        raise DomainError("upto must be >= 1")
    return QSeries(Fraction(1, 24), tuple(Fraction(c) for c in _pentagonal_product(upto)), upto)


def dilate(s: QSeries, delta: int) -> QSeries:
    """Substitute q -> q^delta; truncation order is kept in units of q."""
    n = s.truncation_order
    out = [Fraction(0)] * n
    for k, c in enumerate(s.coefficients):
        if k * delta >= n:
            break
        out[k * delta] = c
    return QSeries(s.leading_exponent * delta, tuple(out), n)


def delta_expansion(upto: int = DEFAULT_TRUNCATION) -> QSeries:
    """Discriminant function eta^24 = q - 24 q^2 + 252 q^3 - ..."""
    return series_pow(eta_expansion(upto), 24)


@dataclass(frozen=True)
class EtaQuotient:
    exponents: Dict[int, int] = field(default_factory=dict)
    level: int = 1

    def __post_init__(self):
        items = {int(k): int(v) for k, v in dict(self.exponents).items()}
        for k in items:
            if k <= 0 or self.level % k:
                raise DomainError(f"eta index {k} does not divide level {self.level}")
        object.__setattr__(self, "exponents", dict(sorted(items.items())))

    def __hash__(self):
        return hash((tuple(self.exponents.items()), self.level))

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(self.exponents.values()), 2)


def eta_quotient_expansion(eq: EtaQuotient, upto: int = DEFAULT_TRUNCATION) -> QSeries:
    """prod eta(delta tau)^r_delta as an exact Laurent series in q^(1/24)."""
    if upto < 1:
        raise DomainError("upto must be >= 1")
    base = QSeries(Fraction(0), tuple(Fraction(c) for c in _pentagonal_product(upto)), upto)
    result = one(upto)
    lead = Fraction(0)
    for delta, r in eq.exponents.items():
        if r == 0:
            continue
        result = series_mul(result, series_pow(dilate(base, delta), r))
        lead += Fraction(delta * r, 24)
    return QSeries(lead, result.coefficients, upto)


def divisors(n: int):
    return [k for k in range(1, n + 1) if n % k == 0]


def eta_cusp_orders(eq: EtaQuotient) -> Dict[int, Fraction]:
    """24 x (order at cusp 1/c) for every c | level, by Ligozat's formula.

    24 ord_{1/c} = N sum_delta gcd(c, delta)^2 r_delta / (gcd(c, N/c) c delta).
    """
    n = eq.level
    for delta in eq.exponents:
        if n % delta:
            raise DomainError(f"eta index {delta} does not divide level {n}")
    out = {}
    for c in divisors(n):
        total = Fraction(0)
        for delta, r in eq.exponents.items():
            total += Fraction(n * gcd(c, delta) ** 2 * r, gcd(c, n // c) * c * delta)
        out[c] = total
    return out


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    a, b = x.numerator, x.denominator
    return isqrt(a) ** 2 == a and isqrt(b) ** 2 == b


@dataclass(frozen=True)
class EtaModularityReport:
    conditions: Dict[str, bool]
    values: Dict[str, object]
    note: str = "scalar prefactors multiplying the eta quotient are ignored by these conditions"

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())

    def __bool__(self):
        return self.ok


def lemma13_check(eq: EtaQuotient, dual_order: int = 72) -> EtaModularityReport:
    """The four arithmetic conditions an eta quotient must meet to feed the lift:

    (1) sum r_d = 1, (2) dual_order * prod d^r_d is a rational square,
    (3) sum d r_d = 0 mod 24, (4) sum (M/d) r_d = 0 mod 24.
    """
    m = eq.level
    r = eq.exponents
    s1 = sum(r.values())
    prod = Fraction(dual_order)
    for d, e in r.items():
        prod *= Fraction(d) ** e
    s3 = sum(d * e for d, e in r.items())
    s4 = sum((m // d) * e for d, e in r.items())
    conditions = {
        "sum_r_is_1": s1 == 1,
        "square_condition": _is_rational_square(prod),
        "sum_d_r_mod_24": s3 % 24 == 0,
        "sum_M_over_d_r_mod_24": s4 % 24 == 0,
    }
    values = {"sum_r": s1, "square_product": prod, "sum_d_r": s3, "sum_M_over_d_r": s4}
    return EtaModularityReport(conditions, values)


def e0_parity(c0: Dict[int, int]):
    """Parity data for an e_0-component with coefficients c0[m].

    Returns (sum_r c0(-r^2), sum_r c0(-3 r^2), c0(0)/2, ok) where ok means all
    three agree mod 2 and c0(0) is even.
    """
    lowest = min(c0) if c0 else 0
    s1 = s3 = 0
    r = 1
    while -(r * r) >= lowest:
        s1 += c0.get(-r * r, 0)
        s3 += c0.get(-3 * r * r, 0)
        r += 1
    z = c0.get(0, 0)
    ok = z % 2 == 0 and s1 % 2 == s3 % 2 == (z // 2) % 2
    return s1, s3, Fraction(z, 2), ok


# ------------------------------------------------------------ evaluation


def qseries_eval(series: QSeries, tau, ctx: PrecisionContext, growth=(1, 12)):
    """Evaluate sum c_k q^(leading + k) at q = exp(2 pi i tau).

    The tail beyond the truncation is bounded with |c_k| <= C (k+1)^e where
    growth = (C, e).  The default (1, 12) is valid for the discriminant
    function: |tau(n)| <= d(n) n^(11/2) <= n^12.  Other series must pass a
    bound of their own.
    """
    mp = ctx.mp
    tau = mp.mpc(tau)
    q = qexp_eval(tau, ctx)
    lead = series.leading_exponent
    head = mp.exp(2 * mp.pi * mp.mpc(0, 1) * tau * mp.mpf(lead.numerator) / lead.denominator)
    total = mp.mpc(0)
    power = mp.mpc(1)
    for c in series.coefficients:
        if c:
            total += power * (mp.mpf(c.numerator) / c.denominator)
        power *= q
    n = series.truncation_order
    cbound, e = growth
    aq = abs(q)
    r = (mp.mpf(n + 2) / (n + 1)) ** e * aq
    if r >= 1:
        raise PrecisionError("q too large for the coefficient bound")
    first = cbound * mp.mpf(n + 1) ** e * aq**n
    tail = first / (1 - r) * abs(head)
    value = head * total
    if tail >= ctx.eps * abs(value):
        raise PrecisionError(f"tail bound {mp.nstr(tail, 5)} exceeds target; raise the truncation")
    return value


def half_weight_f(upto: int = DEFAULT_TRUNCATION) -> QSeries:
    return eta_quotient_expansion(F_QUOTIENT, upto) * 2 + eta_quotient_expansion(G_QUOTIENT, upto) * 2


def half_weight_g(upto: int = DEFAULT_TRUNCATION) -> QSeries:
    return eta_quotient_expansion(G_QUOTIENT, upto) * 2


F_QUOTIENT = EtaQuotient({2: 1, 3: 2, 4: 4, 6: 4, 12: -10}, 12)
G_QUOTIENT = EtaQuotient({1: 1, 2: 3, 6: 2, 3: -1, 4: -1, 12: -3}, 12)
