from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cmperiods.errors import ConvergenceError, DomainError
from cmperiods.numerics import (
    HypParams,
    PrecisionContext,
    elem,
    from_decimal,
    gamma,
    gauss_2f1_at_1,
    hyp,
    hyp_pfq,
    log_gamma,
    qexp_eval,
    relative_residual,
    to_decimal,
)

fractions = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(40), max_denominator=60)


def close(a, b, digits):
    return abs(a - b) <= mpmath.mpf(10) ** (-digits) * max(abs(b), 1)


# ------------------------------------------------------------ contexts


def test_context_rejects_low_precision():
    with pytest.raises(DomainError):
        PrecisionContext(5)
    with pytest.raises(DomainError):
        PrecisionContext(30, 3)


def test_context_is_private_to_caller():
    before = mpmath.mp.dps
    c = PrecisionContext(80)
    assert c.mp.dps == 100
    assert mpmath.mp.dps == before


# ------------------------------------------------------------ elementary


def test_sqrt_and_root(ctx30):
    r = elem("sqrt", 2, ctx=ctx30)
    assert str(r).startswith("1.41421356237309504880168872420")
    x = elem("nth_root", 45, 8, ctx30)
    assert close(x**8, 45, 30)


def test_pi_two_series(ctx30):
    # Machin's arctan formula in integer arithmetic
    digits = 45
    unity = 10 ** (digits + 5)

    def arctan_inv(n):
        total, term, k, sign = 0, unity // n, 1, 1
        while term:
            total += sign * (term // k)
            term //= n * n
            k += 2
            sign = -sign
        return total

    machin = 4 * (4 * arctan_inv(5) - arctan_inv(239))
    # Gauss-Legendre AGM iteration
    with mpmath.workdps(50):
        a, b, t, p = mpmath.mpf(1), 1 / mpmath.sqrt(2), mpmath.mpf(1) / 4, mpmath.mpf(1)
        for _ in range(8):
            an = (a + b) / 2
            b = mpmath.sqrt(a * b)
            t -= p * (a - an) ** 2
            a = an
            p *= 2
        agm = (a + b) ** 2 / (4 * t)
        ours = elem("pi", ctx=ctx30)
        assert abs(agm - mpmath.mpf(machin) / unity) < mpmath.mpf(10) ** -40
        assert abs(ours - agm) < mpmath.mpf(10) ** -30


def test_elem_domain_errors(ctx30):
    for kind, x in (("log", 0), ("sqrt", -1), ("nth_root", -2)):
        with pytest.raises(DomainError):
            elem(kind, x, 3, ctx30)
    with pytest.raises(DomainError):
        elem("sin", 1, ctx=ctx30)


def test_power_rational(ctx30):
    assert close(elem("power_rational", 8, Fraction(2, 3), ctx30), 4, 30)


# ------------------------------------------------------------ Gamma


def test_gamma_trivial_values(ctx):
    mp = ctx.mp
    assert close(gamma(Fraction(1, 2), ctx), mp.sqrt(mp.pi), 40)
    assert close(gamma(5, ctx), 24, 40)
    assert close(gamma(Fraction(1, 4), ctx) * gamma(Fraction(3, 4), ctx), mp.pi * mp.sqrt(2), 40)


def test_gamma_rejects_nonpositive(ctx):
    with pytest.raises(DomainError):
        gamma(0, ctx)
    with pytest.raises(DomainError):
        log_gamma(Fraction(-1, 2), ctx)


@settings(max_examples=40, deadline=None)
@given(fractions)
def test_log_gamma_matches_mpmath(x):
    c = PrecisionContext(40)
    with mpmath.workdps(70):
        ref = mpmath.loggamma(mpmath.mpf(x.numerator) / x.denominator)
        assert abs(log_gamma(x, c) - ref) < mpmath.mpf(10) ** -40 * max(1, abs(ref))


@settings(max_examples=20, deadline=None)
@given(fractions)
def test_gamma_recurrence(x):
    c = PrecisionContext(30)
    assert close(gamma(x + 1, c), c.real(x) * gamma(x, c), 30)


@settings(max_examples=10, deadline=None)
@given(fractions)
def test_gamma_monotone_precision(x):
    c = PrecisionContext(30)
    assert close(gamma(x, c), gamma(x, c.bumped()), 30)


# ------------------------------------------------------------ pFq


def test_hyp_at_zero(ctx):
    assert hyp_pfq(HypParams((Fraction(1, 3),), (Fraction(1, 2),), 0), ctx).value == 1


def test_hyp_log_closed_form(ctx):
    mp = ctx.mp
    assert close(hyp((1, 1), (2,), Fraction(1, 2), ctx), 2 * mp.log(2), 40)


def test_hyp_reports_terms_and_tail(ctx):
    r = hyp_pfq(HypParams((Fraction(1, 24), Fraction(5, 24)), (Fraction(3, 4),), Fraction(-2401, 3375)), ctx)
    assert r.terms > 50
    assert r.tail_bound < mpmath.mpf(10) ** -60


def test_hyp_first_table_row(ctx):
    """2F1(1/24,5/24;3/4;-2401/3375) = A1 w_{-120}/w_{-4}, A1 = 45^(1/8) sqrt(12+2 sqrt30)/2."""
    from cmperiods.quadfield import omega

    mp = ctx.mp
    a1 = mp.root(45, 8) * mp.sqrt(12 + 2 * mp.sqrt(30)) / 2
    lhs = hyp((Fraction(1, 24), Fraction(5, 24)), (Fraction(3, 4),), Fraction(-2401, 3375), ctx)
    assert relative_residual(lhs, a1 * omega(-120, ctx) / omega(-4, ctx), ctx) < mp.mpf(10) ** -35


def test_hyp_convergence_errors(ctx):
    with pytest.raises(ConvergenceError):
        hyp((Fraction(1, 2), Fraction(1, 3)), (Fraction(3, 4),), 1, ctx)
    with pytest.raises(ConvergenceError):
        hyp((Fraction(1, 2), Fraction(1, 3)), (Fraction(3, 4),), Fraction(-3, 2), ctx)


def test_hyp_params_reject_pole():
    with pytest.raises(DomainError):
        HypParams((1,), (-2,), Fraction(1, 2))


def test_hyp_terminating(ctx):
    # (1 - z)^2 as 2F1(-2, 1; 1; z)
    assert close(hyp((-2, 1), (1,), Fraction(3, 2), ctx), Fraction(1, 4), 40)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.fractions(min_value=Fraction(1, 24), max_value=3, max_denominator=24), min_size=2, max_size=3),
    st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=500),
)
def test_hyp_matches_mpmath(params, z):
    c = PrecisionContext(30)
    num, den = params, [Fraction(5, 4)] * (len(params) - 1)
    with mpmath.workdps(60):
        ref = mpmath.hyper([mpmath.mpf(a.numerator) / a.denominator for a in num],
                           [mpmath.mpf(b.numerator) / b.denominator for b in den],
                           mpmath.mpf(z.numerator) / z.denominator)
        assert abs(hyp(num, den, z, c) - ref) <= mpmath.mpf(10) ** -30 * abs(ref)


@settings(max_examples=10, deadline=None)
@given(st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=200))
def test_derivative_contiguity(z):
    """d/dz pFq = (prod a / prod b) pFq(a+1; b+1; z), by a central difference."""
    c = PrecisionContext(40)
    mp = c.mp
    params = HypParams((Fraction(1, 12), Fraction(1, 4), Fraction(5, 12)), (Fraction(1, 2), Fraction(3, 4)), z)
    h = Fraction(1, 10**8)
    up = hyp(params.numerator_params, params.denominator_params, z + h, c)
    down = hyp(params.numerator_params, params.denominator_params, z - h, c)
    numeric = (up - down) / (2 * c.real(h))
    shifted = params.shifted()
    factor = Fraction(1, 12) * Fraction(1, 4) * Fraction(5, 12) / (Fraction(1, 2) * Fraction(3, 4))
    exact = c.real(factor) * hyp(shifted.numerator_params, shifted.denominator_params, z, c)
    assert abs(numeric - exact) < mp.mpf(10) ** -13


def test_remark_derivative_constant():
    # the factor in front of the shifted 3F2 for d/ds F1(s)^2
    assert Fraction(1, 12) * Fraction(1, 4) * Fraction(5, 12) / (Fraction(1, 2) * Fraction(3, 4)) == Fraction(5, 216)
    assert Fraction(7, 12) * Fraction(3, 4) * Fraction(11, 12) / (Fraction(3, 2) * Fraction(5, 4)) == Fraction(77, 360)


@settings(max_examples=10, deadline=None)
@given(st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=300))
def test_clausen_products(s):
    c = PrecisionContext(30)
    f1 = hyp((Fraction(1, 24), Fraction(5, 24)), (Fraction(3, 4),), s, c)
    f2 = hyp((Fraction(7, 24), Fraction(11, 24)), (Fraction(5, 4),), s, c)
    p = hyp((Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)), (Fraction(3, 4), Fraction(5, 4)), s, c)
    assert close(f1 * f2, p, 30)
    g1 = hyp((Fraction(1, 24), Fraction(7, 24)), (Fraction(5, 6),), s, c)
    g2 = hyp((Fraction(5, 24), Fraction(11, 24)), (Fraction(7, 6),), s, c)
    q = hyp((Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)), (Fraction(5, 6), Fraction(7, 6)), s, c)
    assert close(g1 * g2, q, 30)


@settings(max_examples=8, deadline=None)
@given(st.fractions(min_value=Fraction(-7, 10), max_value=Fraction(7, 10), max_denominator=100))
def test_hyp_monotone_precision(z):
    c = PrecisionContext(30)
    num, den = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)), (Fraction(3, 4), Fraction(5, 4))
    assert close(hyp(num, den, z, c), hyp(num, den, z, c.bumped()), 30)


# ------------------------------------------------------------ Gauss at z = 1


def test_gauss_trivial(ctx):
    assert gauss_2f1_at_1(0, Fraction(1, 3), 2, ctx) == 1


def test_gauss_gamma_form(ctx):
    lhs = gauss_2f1_at_1(Fraction(1, 12), Fraction(5, 12), 1, ctx)
    rhs = gamma(Fraction(1, 2), ctx) / (gamma(Fraction(11, 12), ctx) * gamma(Fraction(7, 12), ctx))
    assert close(lhs, rhs, 40)


def test_gauss_divergent(ctx):
    with pytest.raises(DomainError):
        gauss_2f1_at_1(Fraction(1, 2), Fraction(1, 2), 1, ctx)


def test_gauss_against_near_one(ctx30):
    """The series value approaches the Gamma-product value as z -> 1 from below."""
    a, b, c = Fraction(1, 12), Fraction(5, 12), Fraction(5, 2)
    exact = gauss_2f1_at_1(a, b, c, ctx30)
    gaps = [abs(hyp((a, b), (c,), 1 - h, ctx30) - exact) for h in (Fraction(1, 5), Fraction(1, 10), Fraction(1, 15))]
    assert gaps[0] > gaps[1] > gaps[2]
    # the truncation rule needs |z| below the 0.95 ratio threshold, so stop at z = 14/15
    assert gaps[2] < 0.01


# ------------------------------------------------------------ q and I/O


def test_qexp_values(ctx):
    mp = ctx.mp
    assert close(qexp_eval(mp.mpc(0, 1), ctx), mp.exp(-2 * mp.pi), 40)
    assert close(qexp_eval(mp.mpc(1, 1), ctx), mp.exp(-2 * mp.pi), 40)
    assert close(qexp_eval(mp.mpc(0, 0.5), ctx), mp.exp(-mp.pi), 40)
    with pytest.raises(DomainError):
        qexp_eval(mp.mpc(0, -1), ctx)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=0.01, max_value=3))
def test_qexp_modulus(re, im):
    c = PrecisionContext(30)
    mp = c.mp
    assert close(abs(qexp_eval(mp.mpc(re, im), c)), mp.exp(-2 * mp.pi * im), 30)


@settings(max_examples=30, deadline=None)
@given(fractions, st.fractions(min_value=-5, max_value=5, max_denominator=50))
def test_decimal_roundtrip(x, y):
    c = PrecisionContext(30)
    mp = c.mp
    for v in (gamma(x, c), mp.mpc(gamma(x, c), c.real(y))):
        text = to_decimal(v, c)
        back = from_decimal(text, c)
        assert abs(back - v) <= mp.mpf(10) ** -(c.working_digits - 2) * abs(v)
        assert to_decimal(back, c) == text
