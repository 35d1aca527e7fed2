"""Arbitrary-precision reals, the Gamma function and pFq summation.

Every routine takes an explicit :class:`PrecisionContext`.  Values are mpmath
``mpf``/``mpc`` objects owned by a per-thread mpmath context at the working
precision ``decimal_digits + guard_digits``; the global ``mpmath.mp`` is never
touched, so callers in different threads can use different precisions.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import mpmath
from mpmath.ctx_mp import MPContext

from .errors import ConvergenceError, DomainError, PrecisionError

Rational = Union[int, Fraction]

TERM_CAP = 10**6
RATIO_THRESHOLD = Fraction(95, 100)

_local = threading.local()


def _context_for(dps):
    table = getattr(_local, "contexts", None)
    if table is None:
        table = _local.contexts = {}
    mp = table.get(dps)
    if mp is None:
        mp = MPContext()
        mp.dps = dps
        table[dps] = mp
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    decimal_digits: int = 40
    guard_digits: int = 20

    def __post_init__(self):
        if int(self.decimal_digits) < 10:
            raise DomainError(f"decimal_digits must be >= 10, got {self.decimal_digits}")
        if int(self.guard_digits) < 10:
            raise DomainError(f"guard_digits must be >= 10, got {self.guard_digits}")

    @property
    def working_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def mp(self) -> MPContext:
        """mpmath context at working precision, private to the calling thread."""
        return _context_for(self.working_digits)

    @property
    def eps(self):
        return self.mp.mpf(10) ** (-self.working_digits)

    def tolerance(self, slack: int = 10):
        """Acceptance threshold 10^-(decimal_digits - slack)."""
        return self.mp.mpf(10) ** (-(self.decimal_digits - slack))

    def bumped(self, extra: int = 10) -> "PrecisionContext":
        return PrecisionContext(self.decimal_digits + extra, self.guard_digits)

    def real(self, x):
        """Promote an int, Fraction, string or mpf to a BigReal of this context."""
        mp = self.mp
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)

    def complex(self, re, im=0):
        return self.mp.mpc(self.real(re), self.real(im))


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


# ---------------------------------------------------------------- elementary


_ELEM_KINDS = ("exp", "log", "sqrt", "nth_root", "pi", "power_rational")


def elem(op_kind: str, x=None, aux=None, ctx: PrecisionContext = None):
    """Elementary functions at context precision.

    ``nth_root`` takes the degree in ``aux`` and returns the positive real root;
    ``power_rational`` raises ``x > 0`` to the rational exponent ``aux``.
    """
    if ctx is None:
        ctx = PrecisionContext()
    if op_kind not in _ELEM_KINDS:
        raise DomainError(f"unknown op_kind {op_kind!r}")
    mp = ctx.mp
    if op_kind == "pi":
        return +mp.pi
    v = ctx.real(x)
    if op_kind == "exp":
        return mp.exp(v)
    if op_kind == "log":
        if v <= 0:
            raise DomainError("log needs x > 0")
        return mp.log(v)
    if op_kind == "sqrt":
        if v < 0:
            raise DomainError("sqrt needs x >= 0")
        return mp.sqrt(v)
    if op_kind == "nth_root":
        n = int(aux)
        if n < 1 or n != aux:
            raise DomainError(f"root degree must be a positive integer, got {aux}")
        if v < 0:
            raise DomainError("nth_root needs x >= 0")
        return mp.root(v, n)
    e = as_fraction(aux)
    if v < 0 or (v == 0 and e <= 0):
        raise DomainError("power_rational needs x > 0")
    if v == 0:
        return mp.zero
    if e.denominator == 1:
        return v ** e.numerator
    return mp.root(v, e.denominator) ** e.numerator


def sqrt(x, ctx):
    return elem("sqrt", x, None, ctx)


def nth_root(x, n, ctx):
    return elem("nth_root", x, n, ctx)


def rpow(x, e, ctx):
    return elem("power_rational", x, e, ctx)


def pi(ctx):
    return elem("pi", ctx=ctx)


# --------------------------------------------------------------------- gamma


def _spouge_parameter(dps):
    # relative error < a^-1/2 (2 pi)^-(a+1/2)
    return int(math.ceil(dps * math.log(10) / math.log(2 * math.pi))) + 2


@lru_cache(maxsize=32)
def _spouge_coefficients(dps):
    a = _spouge_parameter(dps)
    # coefficients alternate and grow like (2 pi)^a; carry that many extra digits
    inner = dps + int(a * math.log10(2 * math.pi)) + 10
    mp = _context_for(inner)
    coeffs = [mp.sqrt(2 * mp.pi)]
    fact = mp.one
    for k in range(1, a):
        if k > 1:
            fact *= k - 1
        c = mp.power(a - k, k - mp.mpf(1) / 2) * mp.exp(a - k) / fact
        coeffs.append(c if k % 2 else -c)
    return a, inner, tuple(coeffs)


def _spouge_log(z, dps):
    """log Gamma(z + 1) for real z >= 0 by Spouge's approximation."""
    a, inner, coeffs = _spouge_coefficients(dps)
    mp = _context_for(inner)
    z = mp.mpf(z) if not isinstance(z, Fraction) else mp.mpf(z.numerator) / z.denominator
    s = coeffs[0]
    for k in range(1, a):
        s += coeffs[k] / (z + k)
    return (z + mp.mpf(1) / 2) * mp.log(z + a) - (z + a) + mp.log(s)


def _reduce(x: Fraction):
    """Write x = y * shift with y in [1, 2) and shift an exact rational factor.

    Returns (y, ratio) so that Gamma(x) = Gamma(y) * ratio.
    """
    ratio = Fraction(1)
    y = x
    while y >= 2:
        y -= 1
        ratio *= y
    while y < 1:
        if y <= 0 and y.denominator == 1:
            raise DomainError(f"Gamma has a pole at {x}")
        ratio /= y
        y += 1
    return y, ratio


@lru_cache(maxsize=8192)
def _log_gamma_rational(x: Fraction, dps: int):
    y, ratio = _reduce(x)
    mp = _context_for(dps + 5)
    core = _spouge_log(y - 1, dps + 5)
    return mp.mpf(core) + mp.log(abs(mp.mpf(ratio.numerator) / ratio.denominator)), ratio < 0


def _log_gamma_real(x, dps):
    mp = _context_for(dps + 5)
    x = mp.mpf(x)
    ratio = mp.one
    while x >= 2:
        x -= 1
        ratio *= x
    while x < 1:
        ratio /= x
        x += 1
    return _spouge_log(x - 1, dps + 5) + mp.log(ratio)


def log_gamma(x, ctx: PrecisionContext):
    """log Gamma(x) for x > 0 (exact rational or BigReal)."""
    if is_exact(x):
        x = Fraction(x)
        if x <= 0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        value, _ = _log_gamma_rational(x, ctx.working_digits)
    else:
        if not x > 0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        value = _log_gamma_real(x, ctx.working_digits)
    return +ctx.mp.mpf(value)


def gamma(x, ctx: PrecisionContext):
    """Gamma(x) for x > 0."""
    return ctx.mp.exp(log_gamma(x, ctx))


def _gamma_signed(x: Fraction, ctx):
    """Gamma at any rational that is not a pole (used by Gauss's formula)."""
    value, negative = _log_gamma_rational(x, ctx.working_digits)
    g = ctx.mp.exp(value)
    return -g if negative else g


# ----------------------------------------------------------- hypergeometric


@dataclass(frozen=True)
class HypParams:
    numerator_params: tuple = ()
    denominator_params: tuple = ()
    argument: object = Fraction(0)

    def __post_init__(self):
        num = tuple(as_fraction(a) for a in self.numerator_params)
        den = tuple(as_fraction(b) for b in self.denominator_params)
        for b in den:
            if b <= 0 and b.denominator == 1:
                raise DomainError(f"denominator parameter {b} is a non-positive integer")
        z = self.argument
        if is_exact(z) or isinstance(z, str):
            z = as_fraction(z)
        object.__setattr__(self, "numerator_params", num)
        object.__setattr__(self, "denominator_params", den)
        object.__setattr__(self, "argument", z)

    def shifted(self, k: int = 1) -> "HypParams":
        """Parameters with every a_i and b_j raised by k (derivative contiguity)."""
        return HypParams(
            tuple(a + k for a in self.numerator_params),
            tuple(b + k for b in self.denominator_params),
            self.argument,
        )


@dataclass(frozen=True)
class HypResult:
    value: object
    terms: int
    tail_bound: object


def _terminating_length(num):
    best = None
    for a in num:
        if a <= 0 and a.denominator == 1:
            n = int(-a) + 1
            best = n if best is None else min(best, n)
    return best


def _ratio_bound(num, den, n):
    """Bound sup_{m >= n} |(a+m)...| / |(b+m)...(m+1)| as an exact rational.

    Valid once n exceeds every |parameter|: each paired factor (a+m)/(b+m)
    is then positive and monotone in m with limit 1.
    """
    dens = list(den) + [Fraction(1)]
    bound = Fraction(1)
    for i, b in enumerate(dens):
        if i < len(num):
            bound *= max((num[i] + n) / (b + n), Fraction(1))
        else:
            bound /= b + n
    return bound


def hyp_pfq(params: HypParams, ctx: PrecisionContext) -> HypResult:
    """Direct summation of pFq with a certified geometric tail bound."""
    return _hyp_cached(params, ctx.working_digits)


@lru_cache(maxsize=4096)
def _hyp_cached(params: HypParams, dps: int) -> HypResult:
    mp = _context_for(dps)
    num, den, z = params.numerator_params, params.denominator_params, params.argument
    exact_z = isinstance(z, Fraction)
    zr = mp.mpf(z.numerator) / z.denominator if exact_z else mp.mpf(z)
    stop = _terminating_length(num)

    if zr == 0:
        return HypResult(mp.one, 1, mp.zero)
    if stop is None:
        if len(num) > len(den) + 1:
            raise ConvergenceError("pFq with p > q+1 diverges for z != 0")
        if len(num) == len(den) + 1 and abs(zr) >= 1:
            raise ConvergenceError(f"|z| = {mp.nstr(abs(zr), 8)} >= 1")

    eps = mp.mpf(10) ** (-dps)
    absz = abs(z) if exact_z else None
    start = int(max([abs(p) for p in num + den] + [0])) + 1
    term = mp.one
    total = mp.one
    n = 0
    while True:
        ratio = Fraction(1)
        for a in num:
            ratio *= a + n
        for b in den:
            ratio /= b + n
        ratio /= n + 1
        if exact_z:
            q = ratio * z
            term = term * mp.mpf(q.numerator) / q.denominator
        else:
            term = term * zr * mp.mpf(ratio.numerator) / ratio.denominator
        n += 1
        total += term
        if stop is not None and n >= stop:
            return HypResult(total, n + 1, mp.zero)
        if n >= start:
            rb = _ratio_bound(num, den, n)
            if exact_z:
                r = rb * absz
                below = r < RATIO_THRESHOLD
                rr = mp.mpf(r.numerator) / r.denominator
            else:
                rr = mp.mpf(rb.numerator) / rb.denominator * abs(zr)
                below = rr < mp.mpf(RATIO_THRESHOLD.numerator) / RATIO_THRESHOLD.denominator
            if below:
                tail = abs(term) * rr / (1 - rr)
                scale = min(mp.one, abs(total)) if total != 0 else mp.one
                if tail < eps * scale:
                    return HypResult(total, n + 1, tail)
        if n >= TERM_CAP:
            raise PrecisionError(f"tail bound not reached within {TERM_CAP} terms")


def hyp(num: Iterable, den: Iterable, z, ctx: PrecisionContext):
    """Convenience wrapper returning only the value."""
    return hyp_pfq(HypParams(tuple(num), tuple(den), z), ctx).value


def gauss_2f1_at_1(a, b, c, ctx: PrecisionContext):
    """2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b))."""
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    if c - a - b <= 0:
        raise DomainError("2F1 at 1 diverges unless c - a - b > 0")
    if a == 0 or b == 0:
        return ctx.mp.one
    for x in (c - a, c - b):
        if x <= 0 and x.denominator == 1:
            # 1/Gamma vanishes there: the series terminates with value 0
            return ctx.mp.zero
    for x in (c, c - a - b):
        if x <= 0 and x.denominator == 1:
            raise DomainError(f"Gamma argument {x} is a pole")
    num = _gamma_signed(c, ctx) * _gamma_signed(c - a - b, ctx)
    return num / (_gamma_signed(c - a, ctx) * _gamma_signed(c - b, ctx))


# ----------------------------------------------------------------- q and I/O


def qexp_eval(tau, ctx: PrecisionContext):
    """q = exp(2 pi i tau) for tau in the upper half-plane."""
    mp = ctx.mp
    tau = mp.mpc(tau)
    if not tau.imag > 0:
        raise DomainError("qexp_eval needs Im(tau) > 0")
    mod = mp.exp(-2 * mp.pi * tau.imag)
    return mp.mpc(mod * mp.cospi(2 * tau.real), mod * mp.sinpi(2 * tau.real))


def to_decimal(x, ctx: PrecisionContext) -> str:
    """Serialize a BigReal or BigComplex with every working digit."""
    mp = ctx.mp
    digits = ctx.working_digits
    if isinstance(x, mpmath.mpc) or type(x).__name__ == "mpc":
        re = mp.nstr(x.real, digits, min_fixed=1, max_fixed=0)
        im = mp.nstr(abs(x.imag), digits, min_fixed=1, max_fixed=0)
        sign = "-" if x.imag < 0 else "+"
        return f"{re}{sign}{im}j"
    return mp.nstr(mp.mpf(x), digits, min_fixed=1, max_fixed=0)


def from_decimal(text: str, ctx: PrecisionContext):
    mp = ctx.mp
    text = text.strip()
    if text.endswith("j"):
        body = text[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        while cut > 0 and body[cut - 1] in "eE":
            cut = max(body.rfind("+", 0, cut - 1), body.rfind("-", 0, cut - 1))
        return mp.mpc(mp.mpf(body[:cut]), mp.mpf(body[cut:]))
    return mp.mpf(text)


def relative_residual(lhs, rhs, ctx: PrecisionContext):
    denom = abs(rhs)
    if denom == 0:
        return abs(lhs - rhs)
    return abs(lhs - rhs) / denom
