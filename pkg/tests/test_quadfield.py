import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cmperiods.errors import DomainError
from cmperiods.numerics import PrecisionContext
from cmperiods.quadfield import (
    big_omega,
    class_number_analytic,
    field_data,
    is_fundamental,
    kronecker_chi,
    l_one_chi,
    omega,
    reduced_form_points,
    reduced_forms,
)

FUNDAMENTAL = [d for d in range(-400, -2) if is_fundamental(d)]

# class numbers from standard tables
KNOWN_H = {-3: 1, -4: 1, -7: 1, -8: 1, -15: 2, -20: 2, -23: 3, -24: 2, -40: 2, -47: 5,
           -52: 2, -84: 4, -120: 4, -132: 4, -163: 1, -276: 8}


def test_fundamental_examples():
    assert is_fundamental(-4) and is_fundamental(-3) and is_fundamental(-276)
    assert not is_fundamental(-12)
    assert not is_fundamental(-16)
    assert not is_fundamental(-5)
    with pytest.raises(DomainError):
        is_fundamental(5)


def test_fundamental_against_sympy():
    for d in range(-400, -2):
        n = -d
        core = sympy.ntheory.factor_.core(n)
        if n == core:
            expected = d % 4 == 1
        elif n == 4 * core:
            expected = (-core) % 4 in (2, 3)
        else:
            expected = False
        assert is_fundamental(d) == expected, d


def test_kronecker_examples():
    assert kronecker_chi(-4, 3) == -1
    assert kronecker_chi(-3, 2) == -1
    assert kronecker_chi(-120, 7) == -1
    with pytest.raises(DomainError):
        kronecker_chi(-12, 5)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FUNDAMENTAL), st.integers(min_value=1, max_value=10**4))
def test_kronecker_matches_sympy(d, a):
    # for odd a the Kronecker symbol is the Jacobi symbol
    if a % 2 and a > 1:
        assert kronecker_chi(d, a) == sympy.jacobi_symbol(d % a, a)
    elif a == 1:
        assert kronecker_chi(d, a) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FUNDAMENTAL), st.integers(min_value=1, max_value=500), st.integers(min_value=1, max_value=500))
def test_character_properties(d, a, b):
    assert kronecker_chi(d, a * b) == kronecker_chi(d, a) * kronecker_chi(d, b)
    assert kronecker_chi(d, a + (-d)) == kronecker_chi(d, a)
    assert kronecker_chi(d, -a) == -kronecker_chi(d, a)  # odd character


def test_class_numbers():
    for d, h in KNOWN_H.items():
        assert field_data(d).h == h
        assert len(reduced_forms(d)) == h


def test_reduced_forms_shape():
    for d in FUNDAMENTAL:
        for a, b, c in reduced_forms(d):
            assert b * b - 4 * a * c == d
            assert abs(b) <= a <= c
            assert sympy.gcd(sympy.gcd(a, b), c) == 1
            if abs(b) == a or a == c:
                assert b >= 0


def test_class_number_formula_all():
    ctx = PrecisionContext(30)
    for d in FUNDAMENTAL:
        h = class_number_analytic(d, ctx)
        assert abs(h - field_data(d).h) < mpmath.mpf(10) ** -25


def test_l_value_against_digamma():
    """A periodic Dirichlet series at s = 1 is -(1/n) sum chi(a) digamma(a/n)."""
    ctx = PrecisionContext(30)
    for d in (-4, -3, -7, -120, -276):
        n = -d
        with mpmath.workdps(40):
            ref = -sum(kronecker_chi(d, a) * mpmath.digamma(mpmath.mpf(a) / n) for a in range(1, n)) / n
        assert abs(l_one_chi(d, ctx) - ref) < mpmath.mpf(10) ** -28


def test_omega_closed_forms():
    ctx = PrecisionContext(40)
    with mpmath.workdps(60):
        g = mpmath.gamma
        w4 = g(mpmath.mpf(1) / 4) ** 2 / (2 * mpmath.pi * mpmath.sqrt(2))
        w3 = (g(mpmath.mpf(1) / 3) / g(mpmath.mpf(2) / 3)) ** (mpmath.mpf(3) / 2) / mpmath.sqrt(3)
        assert abs(omega(-4, ctx) - w4) < mpmath.mpf(10) ** -40
        assert abs(omega(-3, ctx) - w3) < mpmath.mpf(10) ** -40
        assert abs(big_omega(-4, ctx) - mpmath.sqrt(4 * mpmath.pi) * w4) < mpmath.mpf(10) ** -40


def test_omega_is_eta_product():
    """Second route through the Dedekind eta function: the geometric mean of
    sqrt(Im tau)|eta(tau)|^2 over the reduced points is omega_d |d|^(1/4) / sqrt(4 pi)."""
    ctx = PrecisionContext(30)
    mp = ctx.mp

    def eta(tau):
        return mp.exp(2j * mp.pi * tau / 24) * mp.qp(mp.exp(2j * mp.pi * tau))

    for d in (-3, -4, -7, -8, -15, -20, -24, -84, -120, -276):
        pts = reduced_form_points(d, ctx)
        mean = mp.exp(sum(mp.log(mp.sqrt(t.imag) * abs(eta(t)) ** 2) for _, t in pts) / len(pts))
        expected = omega(d, ctx) * mp.power(-d, mp.mpf(1) / 4) / mp.sqrt(4 * mp.pi)
        assert abs(mean / expected - 1) < mp.mpf(10) ** -25, d


def test_rejects_non_fundamental():
    ctx = PrecisionContext(30)
    with pytest.raises(DomainError):
        omega(-12, ctx)
    with pytest.raises(DomainError):
        l_one_chi(-16, ctx)
