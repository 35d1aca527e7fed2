from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cmperiods.errors import DomainError, PrecisionError
from cmperiods.fixtures import load_qseries
from cmperiods.numerics import PrecisionContext, gamma
from cmperiods.qseries import (
    F_QUOTIENT,
    G_QUOTIENT,
    EtaQuotient,
    QSeries,
    delta_expansion,
    dilate,
    e0_parity,
    eta_cusp_orders,
    eta_expansion,
    eta_quotient_expansion,
    half_weight_f,
    half_weight_g,
    lemma13_check,
    one,
    qseries_eval,
    series_inverse,
    series_mul,
    series_pow,
)
from cmperiods.quadfield import omega

# Ramanujan tau(1..10), frozen from standard tables
RAMANUJAN_TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def naive_product_power(power, upto):
    """Coefficients of prod_{n>=1} (1 - q^n)^power by repeated multiplication."""
    c = [1] + [0] * upto
    for n in range(1, upto + 1):
        for _ in range(power):
            for k in range(upto, n - 1, -1):
                c[k] -= c[k - n]
    return c


def test_eta_prefix():
    s = eta_expansion(10)
    assert s.leading_exponent == Fraction(1, 24)
    assert list(s.coefficients[:6]) == [1, -1, -1, 0, 0, 1]
    assert list(s.coefficients) == naive_product_power(1, 9)


def test_delta_coefficients():
    d = delta_expansion(12)
    assert d.leading_exponent == 1
    assert list(d.coefficients[:10]) == RAMANUJAN_TAU
    assert list(d.coefficients) == naive_product_power(24, 11)


def test_dilation():
    s = dilate(eta_expansion(10), 2)
    assert s.leading_exponent == Fraction(2, 24)
    assert s.coefficient(Fraction(2, 24) + 2) == -1
    assert s.coefficient(Fraction(2, 24) + 1) == 0


def test_half_weight_examples():
    f = half_weight_f(10)
    assert [(e, c) for e, c in f.terms()[:3]] == [(-3, 2), (0, -6), (1, -18)]
    g = half_weight_g(10)
    assert [(e, c) for e, c in g.terms()[:4]] == [(-1, 2), (0, -2), (1, -8), (2, 8)]
    assert eta_quotient_expansion(EtaQuotient({}, 12), 5).terms() == [(0, 1)]


def test_fixture_prefixes():
    data = load_qseries()
    for name, builder in (("f", half_weight_f), ("g", half_weight_g)):
        s = builder(40)
        prefix = data[name]["expected_prefix"]
        assert {e: s.coefficient(e) for e in prefix} == prefix


def test_truncation_is_not_zero():
    s = eta_expansion(5)
    with pytest.raises(DomainError):
        s.coefficient(Fraction(1, 24) + 5)


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.sampled_from([1, 2, 3, 4, 6, 12]), st.integers(-4, 4), max_size=4))
def test_quotient_is_product_of_powers(exps):
    upto = 25
    eq = EtaQuotient(exps, 12)
    direct = one(upto)
    for delta, r in exps.items():
        direct = series_mul(direct, series_pow(dilate(eta_expansion(upto), delta), r))
    q = eta_quotient_expansion(eq, upto)
    assert q.leading_exponent == direct.leading_exponent
    n = min(q.truncation_order, direct.truncation_order)
    assert q.coefficients[:n] == direct.coefficients[:n]


@settings(max_examples=20, deadline=None)
@given(st.integers(-6, 6))
def test_power_laws(r):
    e = eta_expansion(30)
    assert series_mul(series_pow(e, r), series_pow(e, -r)).coefficients == one(30).coefficients
    assert series_pow(e, r + 1).coefficients == series_mul(series_pow(e, r), e).coefficients


def test_inverse():
    e = eta_expansion(40)
    product = series_mul(e, series_inverse(e))
    assert product.leading_exponent == 0
    assert product.coefficients == one(40).coefficients


def test_cusp_order_examples():
    assert eta_cusp_orders(EtaQuotient({1: 1}, 12))[2] == 3
    assert eta_cusp_orders(EtaQuotient({12: 1}, 12))[12] == 12
    orders = eta_cusp_orders(F_QUOTIENT)
    assert orders[12] < 0
    assert all(v >= 0 for c, v in orders.items() if c != 12)
    with pytest.raises(DomainError):
        EtaQuotient({5: 1}, 12)


def test_cusp_table_matches_fixture():
    data = load_qseries()
    table = data["cusp_table"]
    for delta, row in table["rows"].items():
        orders = eta_cusp_orders(EtaQuotient({int(delta): 1}, 12))
        assert [orders[c] for c in table["columns"]] == list(row)


def test_cusp_order_at_infinity_is_leading_exponent():
    for eq in (F_QUOTIENT, G_QUOTIENT, EtaQuotient({1: 24}, 12), EtaQuotient({2: 3, 4: -1}, 12)):
        lead = eta_quotient_expansion(eq, 5).leading_exponent
        assert eta_cusp_orders(eq)[12] == 24 * lead


def test_admissibility_conditions():
    assert lemma13_check(F_QUOTIENT, 72).ok
    assert lemma13_check(G_QUOTIENT, 72).ok
    bad = lemma13_check(EtaQuotient({}, 12), 72)
    assert not bad
    assert not bad.conditions["sum_r_is_1"]
    assert sum(d * r for d, r in F_QUOTIENT.exponents.items()) == -72


def test_e0_parity():
    data = load_qseries()["e0_components"]
    for name, expected in (("f", (0, 2, 4)), ("g", (2, 0, 6))):
        s1, s3, half, ok = e0_parity(data[name])
        assert (s1, s3, half) == expected
        assert ok


def test_delta_at_i():
    ctx = PrecisionContext(40)
    mp = ctx.mp
    value = qseries_eval(delta_expansion(60), mp.mpc(0, 1), ctx)
    expected = gamma(Fraction(1, 4), ctx) ** 24 / (mp.mpf(2) ** 24 * mp.pi**18)
    assert abs(value - expected) < mp.mpf(10) ** -38 * expected
    assert abs(value - omega(-4, ctx) ** 12 / (2 * mp.pi) ** 6) < mp.mpf(10) ** -38 * expected


def test_eval_periodic_and_trivial():
    ctx = PrecisionContext(30)
    mp = ctx.mp
    d = delta_expansion(60)
    tau = mp.mpc(mp.mpf(1) / 3, mp.mpf(6) / 5)
    assert abs(qseries_eval(d, tau, ctx) - qseries_eval(d, tau + 1, ctx)) < mp.mpf(10) ** -28 * abs(qseries_eval(d, tau, ctx))
    # a known-constant series: coefficients beyond the truncation are bounded by 0
    assert qseries_eval(one(5), tau, ctx, growth=(0, 0)) == 1


def test_eval_precision_error():
    ctx = PrecisionContext(40)
    with pytest.raises(PrecisionError):
        qseries_eval(delta_expansion(10), ctx.mp.mpc(0, 0.2), ctx)


def test_qseries_rejects_bad_exponent():
    with pytest.raises(DomainError):
        QSeries(Fraction(1, 5), (1,))
