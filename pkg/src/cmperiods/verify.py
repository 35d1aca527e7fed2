"""Verification engine: every identity is checked against fixture data and
reported as a VerifyReport.

Numeric cases compare both sides at the context precision and pass when the
relative residual is below 10^-(digits - 10).  Exact cases (polynomial
division, quaternion identities, integer tables) use no tolerance at all.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

from . import fixtures as fx
from .errors import CMPeriodsError, FixtureError
from .exact import QuadExt, build_section6_sextic, poly_divrem
from .fixtures import Expression, Identity, Monomial, SpecialPoint, Theorem2Row
from .numerics import (
    HypParams,
    PrecisionContext,
    gamma,
    gauss_2f1_at_1,
    hyp_pfq,
    relative_residual,
)
from .padic import (
    A2Target,
    PadicNumber,
    gamma_p_direct,
    gamma_p_integer,
    sqrt_padic,
    verify_remark4_row,
)
from .qseries import (
    EtaQuotient,
    QSeries,
    e0_parity,
    delta_expansion,
    eta_cusp_orders,
    eta_expansion,
    eta_quotient_expansion,
    lemma13_check,
    qseries_eval,
    series_inverse,
    series_mul,
)
from .quadfield import big_omega, class_number_analytic, field_data, omega, reduced_form_points
from .quaternion import (
    cm_point,
    cm_point_with_residual,
    level_cofactor_r,
    embed_matrix,
    embedding_discriminant,
    in_order,
    lattice_split,
    mobius,
    pure,
)

__all__ = ["Theorem2Row", "VerifyReport", "SUITES", "run_suite"]

SLACK_DIGITS = 10

F1 = ((Fraction(1, 24), Fraction(5, 24)), (Fraction(3, 4),))
F2 = ((Fraction(7, 24), Fraction(11, 24)), (Fraction(5, 4),))
G1 = ((Fraction(1, 24), Fraction(7, 24)), (Fraction(5, 6),))
P_S = ((Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)), (Fraction(3, 4), Fraction(5, 4)))
P_T = ((Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)), (Fraction(5, 6), Fraction(7, 6)))


@dataclass
class VerifyReport:
    case_id: str
    status: str
    residual: object
    digits_checked: int
    details: str

    def residual_decimal(self) -> str:
        r = self.residual
        if r is None:
            return "nan"
        if isinstance(r, (int, Fraction)):
            return str(r)
        from mpmath import nstr

        return nstr(r, 6)

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "status": self.status,
            "residual_decimal": self.residual_decimal(),
            "digits_checked": self.digits_checked,
            "details": self.details,
        }


def tolerance_digits(ctx: PrecisionContext) -> int:
    return ctx.decimal_digits - SLACK_DIGITS


def _numeric(case_id, residuals, ctx, details=""):
    """residuals: list of (label, residual)."""
    tol = ctx.mp.mpf(10) ** (-tolerance_digits(ctx))
    worst_label, worst = max(residuals, key=lambda kv: kv[1])
    status = "PASS" if worst < tol else "FAIL"
    parts = [f"{label}: {ctx.mp.nstr(r, 3)}" for label, r in residuals]
    text = "; ".join(parts)
    if details:
        text = f"{details}; {text}"
    return VerifyReport(case_id, status, worst, tolerance_digits(ctx), text)


def _exact(case_id, checks):
    """checks: list of (label, bool)."""
    failed = [label for label, ok in checks if not ok]
    status = "FAIL" if failed else "PASS"
    details = "exact: " + (", ".join(label for label, _ in checks) if not failed else "failed " + ", ".join(failed))
    return VerifyReport(case_id, status, Fraction(1 if failed else 0), 0, details)


# ------------------------------------------------------- expression values


def _series(entry, z, ctx):
    num, den = entry
    return hyp_pfq(HypParams(num, den, z), ctx).value


def _real(x, ctx):
    return ctx.real(x)


def _arg(z: QuadExt, ctx):
    return z.a if z.b == 0 else z.to_real(ctx)


def evaluate_monomial(m: Monomial, ctx: PrecisionContext):
    mp = ctx.mp
    v = m.coeff.to_real(ctx)
    for base, e in m.powers:
        if base <= 0:
            raise CMPeriodsError(f"power base {base} must be positive")
        v *= mp.power(_real(base, ctx), _real(e, ctx))
    for d, e in m.omegas:
        v *= mp.power(omega(d, ctx), _real(e, ctx))
    for d, e in m.big_omegas:
        v *= mp.power(big_omega(d, ctx), _real(e, ctx))
    if m.pi:
        v *= mp.power(mp.pi, _real(m.pi, ctx))
    for x, e in m.gammas:
        v *= mp.power(gamma(x, ctx), _real(e, ctx))
    for x, e in m.sinpi:
        v *= mp.power(mp.sinpi(_real(x, ctx)), _real(e, ctx))
    for s, k in m.surds:
        v *= s.to_real(ctx) ** k
    for num, den, z, e in m.hyps:
        v *= mp.power(hyp_pfq(HypParams(num, den, _arg(z, ctx)), ctx).value, _real(e, ctx))
    for a, b, c, e in m.gauss:
        v *= mp.power(gauss_2f1_at_1(a, b, c, ctx), _real(e, ctx))
    return v


def evaluate_expression(expr: Expression, ctx: PrecisionContext):
    total = sum((evaluate_monomial(t, ctx) for t in expr.terms), ctx.mp.zero)
    return evaluate_monomial(expr.prefactor, ctx) * total


def verify_identity(case_id: str, ident: Identity, ctx: PrecisionContext) -> VerifyReport:
    lhs = evaluate_expression(ident.lhs, ctx)
    rhs = evaluate_expression(ident.rhs, ctx)
    return _numeric(case_id, [("lhs/rhs", relative_residual(lhs, rhs, ctx))], ctx)


# ------------------------------------------------------------ tabulated evaluations


def verify_theorem2_row(row: Theorem2Row, ctx: PrecisionContext) -> VerifyReport:
    """Both displayed evaluations in power form: F^8 (or G^12) and the 3F2 squared."""
    z = row.argument
    w = omega(row.d, ctx)
    if row.family == "S":
        lhs1 = _series(F1, z, ctx) ** 8
        rhs1 = row.hyp1_pow.to_real(ctx) * (w / omega(-4, ctx)) ** 8
        second = _series(P_S, z, ctx)
    else:
        lhs1 = _series(G1, z, ctx) ** 12
        rhs1 = row.hyp1_pow.to_real(ctx) * (w / omega(-3, ctx)) ** 12
        second = _series(P_T, z, ctx)
    lhs2 = second**2
    rhs2 = row.hyp2_sq.to_real(ctx) * w**4
    return _numeric(
        f"theorem2/{row.case_id}",
        [("2F1", relative_residual(lhs1, rhs1, ctx)), ("3F2", relative_residual(lhs2, rhs2, ctx))],
        ctx,
        f"{row.family}-family, z = {z}",
    )


def _prop27_sides(family, d, embedding, scale, z, ctx):
    """Right-hand sides of the four algebraic evaluations, without the series.

    Returns (first, second) where first multiplies the omega ratio for the
    2F1 power and second multiplies omega^8 (S) or omega^12 (T).  second is
    None at z = 0, where the 3F2 relation degenerates.
    """
    mp = ctx.mp
    a1, a2, a3 = embedding
    A = ctx.real(scale)
    rd = mp.sqrt(-d)
    r3 = mp.sqrt(3)
    if family == "S":
        first = A / (2**12 * 3) * (a1 + rd) ** 4
        second = None if z == 0 else 9 * A / (2**10 * ctx.real(abs(z))) * (a2**2 + a3**2) ** 2
    else:
        if z >= 0:
            first = A / (2**7 * 3**3) * ((a2 + 2 * a3) * r3 + rd) ** 6
            lead = 27 * mp.mpf(a2 + a3) ** 6
        else:
            first = A / (2**7 * 3**3) * ((a1 - 2 * a3) * r3 + rd) ** 6
            lead = mp.mpf(a1 - 3 * a3) ** 6
        second = None if z == 0 else A / (216 * ctx.real(abs(z))) * lead
    return first, second


def _sign_constraint_ok(family, z, embedding) -> bool:
    a1, a2, a3 = embedding
    if family == "S":
        return a2 == 0 if z >= 0 else a2 == -a3
    return a1 == 3 * a3 if z >= 0 else a2 == -a3


def verify_prop27(row: Theorem2Row, ctx: PrecisionContext) -> VerifyReport:
    """Series against the embedding-based closed forms, plus agreement of those
    closed forms with the tabulated values."""
    case_id = f"prop27/{row.case_id}"
    z = row.argument
    if not _sign_constraint_ok(row.family, z, row.embedding):
        return VerifyReport(case_id, "FAIL", None, 0, f"embedding {row.embedding} violates the sign constraint for z = {z}")
    w = omega(row.d, ctx)
    first, second = _prop27_sides(row.family, row.d, row.embedding, row.scale, z, ctx)
    if row.family == "S":
        ratio = (w / omega(-4, ctx)) ** 8
        lhs1 = _series(F1, z, ctx) ** 8
        lhs2 = _series(P_S, z, ctx) ** 4
        wpow = w**8
        tab1, tab2 = row.hyp1_pow.to_real(ctx), row.hyp2_sq.to_real(ctx) ** 2
    else:
        ratio = (w / omega(-3, ctx)) ** 12
        lhs1 = _series(G1, z, ctx) ** 12
        lhs2 = _series(P_T, z, ctx) ** 6
        wpow = w**12
        tab1, tab2 = row.hyp1_pow.to_real(ctx), row.hyp2_sq.to_real(ctx) ** 3
    labels = ("(23)", "(24)") if row.family == "S" else ("(25)", "(26)")
    res = [
        (labels[0], relative_residual(lhs1, first * ratio, ctx)),
        (labels[1], relative_residual(lhs2, second * wpow, ctx)),
        ("cross " + labels[0], relative_residual(first, tab1, ctx)),
        ("cross " + labels[1], relative_residual(second, tab2, ctx)),
    ]
    return _numeric(case_id, res, ctx, f"embedding {row.embedding}")


def verify_special_point(pt: SpecialPoint, ctx: PrecisionContext) -> VerifyReport:
    """The points where the Hauptmodul takes the values 0 and 1.

    z = 0 reduces the first relation to a statement about the scale alone;
    z = 1 is handled with Gauss's closed form, and the 3F2 there is the
    product of the two 2F1 values (Clausen's product, continuous up to z = 1
    since the 3F2 converges at 1).
    """
    case_id = f"prop27/d{pt.d}"
    z = pt.value
    if not _sign_constraint_ok(pt.family, z, pt.embedding):
        return VerifyReport(case_id, "FAIL", None, 0, f"embedding {pt.embedding} violates the sign constraint")
    first, second = _prop27_sides(pt.family, pt.d, pt.embedding, pt.scale, z, ctx)
    w = omega(pt.d, ctx)
    if pt.family == "S":
        ratio = (w / omega(-4, ctx)) ** 8
        if z == 1:
            f1 = gauss_2f1_at_1(*F1[0], F1[1][0], ctx)
            f2 = gauss_2f1_at_1(*F2[0], F2[1][0], ctx)
            return _numeric(
                case_id,
                [("(23) at 1", relative_residual(f1**8, first * ratio, ctx)),
                 ("(24) at 1", relative_residual((f1 * f2) ** 4, second * w**8, ctx))],
                ctx, "Gauss evaluation at z = 1",
            )
        lhs = _series(F1, z, ctx) ** 8
    else:
        ratio = (w / omega(-3, ctx)) ** 12
        lhs = _series(G1, z, ctx) ** 12
    res = [("first relation", relative_residual(lhs, first * ratio, ctx))]
    if second is not None:
        entry, wp = (P_S, w**8) if pt.family == "S" else (P_T, w**12)
        power = 4 if pt.family == "S" else 6
        res.append(("second relation", relative_residual(_series(entry, z, ctx) ** power, second * wp, ctx)))
    return _numeric(case_id, res, ctx, f"special point z = {z}")


def verify_cayley_ratio(row: Theorem2Row, ctx: PrecisionContext) -> VerifyReport:
    """For S rows with 0 < s < 1 the CM point is iy, and
    -(12^(1/4) omega_{-4}^2)^(-1) s^(1/4) F2(s)/F1(s) = (y - 1)/(y + 1)."""
    mp = ctx.mp
    a1, a2, a3 = row.embedding
    s = row.argument
    tau = cm_point(a1, a2, a3, row.d, ctx)
    y = tau.imag
    c = -1 / (mp.root(12, 4) * omega(-4, ctx) ** 2)
    lhs = c * mp.root(ctx.real(s), 4) * _series(F2, s, ctx) / _series(F1, s, ctx)
    rhs = (y - 1) / (y + 1)
    return _numeric(f"prop27/{row.case_id}/cayley_ratio", [("ratio", relative_residual(lhs, rhs, ctx))], ctx,
                    f"Re tau = {mp.nstr(tau.real, 3)}")


# ----------------------------------------------------------- constants


def dim_cusp_forms(k: int) -> int:
    return 1 - k + k // 4 + (3 * k) // 8 + (5 * k) // 12


def verify_constants(ctx: PrecisionContext, consts: dict, special: List[SpecialPoint]) -> List[VerifyReport]:
    mp = ctx.mp
    out = [verify_identity(f"constants/{i.case_id}", i, ctx) for i in consts["identities"]]

    by_d = {pt.d: pt for pt in special}
    cr = consts["cm_ratio"]
    p_num = cm_point(*by_d[cr["d_num"]].embedding, cr["d_num"], ctx)
    p_den = cm_point(*by_d[cr["d_den"]].embedding, cr["d_den"], ctx)
    ratio = (p_num - p_den) / (p_num - mp.conj(p_den))
    expected = mp.mpc(cr["re"].to_real(ctx), cr["im"].to_real(ctx))
    out.append(_numeric("constants/cm_ratio", [("ratio", relative_residual(ratio, expected, ctx))], ctx))

    dims = consts["dim_cusp_forms"]
    computed = {k: dim_cusp_forms(k) for k in range(4, 17, 2)}
    checks = [(f"d_{k} = {computed[k]}", computed.get(k) == v) for k, v in sorted(dims.items())]
    checks.append(("d_k >= 0 for k = 4..16", all(v >= 0 for v in computed.values())))
    out.append(_exact("constants/dim_cusp_forms", checks))

    # |C1| and |C2| from the Borcherds-side values at the points where the
    # Hauptmodul vanishes, against the closed forms.
    pt4 = by_d[-4]
    tau4 = cm_point(*pt4.embedding, -4, ctx)
    psi4 = ctx.real(pt4.scale) * 16 / 64 * (omega(-4, ctx) / mp.sqrt(mp.pi)) ** 8 / tau4.imag**4
    pt3 = by_d[-3]
    tau3 = cm_point(*pt3.embedding, -3, ctx)
    psi3 = ctx.real(pt3.scale) * 27 / 512 * (omega(-3, ctx) / mp.sqrt(mp.pi)) ** 12 / tau3.imag**6
    out.append(_numeric("constants/period_constant_C1",
                        [("|C1|", relative_residual(psi4, evaluate_expression(consts["C1"], ctx), ctx))], ctx))
    out.append(_numeric("constants/period_constant_C2",
                        [("|C2|", relative_residual(psi3, evaluate_expression(consts["C2"], ctx), ctx))], ctx))
    return out


def verify_remark1_instances(ctx: PrecisionContext, identities: List[Identity]) -> List[VerifyReport]:
    return [verify_identity(f"remark1/{i.case_id}", i, ctx) for i in identities]


# ------------------------------------------------------------ d = -276


def run_section6(ctx: PrecisionContext, data: dict) -> List[VerifyReport]:
    mp = ctx.mp
    out = []
    s1, s2 = data["s1"], data["s2"]
    sextic = build_section6_sextic(s1, data["sextic"])
    quad = data["quadratic_factor"]
    quotient, rem = poly_divrem(sextic, quad)
    out.append(_exact("section6/sextic_divisible", [
        ("degree 6", sextic.degree == 6),
        ("monic", sextic.leading() == 1),
        ("remainder 0", rem.is_zero()),
        ("cofactor degree 4", quotient.degree == 4),
    ]))

    sextic2 = build_section6_sextic(s2, data["sextic"])
    out.append(_exact("section6/galois", [
        ("s2 = conj(s1)", s2 == s1.conj()),
        ("sextic(s2) = conj(sextic(s1))", sextic2 == sextic.conj()),
    ]))

    root = data["ratio_root"]
    ratio = quad.coeffs[0] / quad.leading()
    out.append(_exact("section6/ratio_abs", [
        ("constant/leading = root^4", ratio == root**4),
        ("root > 0", root.sign() > 0),
    ]))

    b = data["borcherds_factor"]
    out.append(_exact("section6/schofer_constant", [
        ("factor^2 root^2 = constant", b * b * root * root == data["schofer_constant"]),
    ]))

    alpha, alpha_p = data["alpha"], data["alpha_prime"]
    l1, l2 = pure(*data["lambda1"]), pure(*data["lambda2"])
    d = data["d"]
    checks = [
        ("disc(lambda1) = d", embedding_discriminant(l1) == d),
        ("disc(lambda2) = d", embedding_discriminant(l2) == d),
        ("alpha in O", in_order(alpha)),
        ("n(alpha) matches", alpha.norm() == data["alpha_norm"]),
        ("alpha lambda1 alpha^-1 = lambda2", alpha * l1 * alpha.inverse() == l2),
        ("alpha' in O", in_order(alpha_p)),
        ("alpha' lambda1 alpha'^-1 = lambda2", alpha_p * l1 * alpha_p.inverse() == l2),
    ]
    out.append(_exact("section6/alpha", checks))

    tau1 = cm_point(*data["lambda1"], d, ctx)
    tau2 = cm_point(*data["lambda2"], d, ctx)
    moved = mobius(embed_matrix(alpha, ctx), tau1)
    s1r, s2r = s1.to_real(ctx), s2.to_real(ctx)
    res = [("iota(alpha) tau1 = tau2", relative_residual(moved, tau2, ctx))]
    in_range = 0.37 < s1r < 0.38 and s2r > 1
    rep = _numeric("section6/hecke_translate", res, ctx, f"s1 = {mp.nstr(s1r, 8)}, s2 = {mp.nstr(s2r, 8)}")
    if not in_range:
        rep.status = "FAIL"
        rep.details += "; s1 outside (0.37, 0.38) or s2 <= 1"
    out.append(rep)

    # |F(tau1)| (Im tau1)^4 from both sides.
    w = omega(d, ctx)
    c1 = 12 * omega(-4, ctx) ** 8 / mp.pi**4
    f1 = _series(F1, s1r, ctx)
    hyp_side = c1 * f1**8 * 2**8 / abs(tau1 + mp.mpc(0, 1)) ** 8 * tau1.imag**4
    borcherds = b.to_real(ctx) * d**2 * w**8 / (64 * mp.pi**4)
    schofer = mp.sqrt(ctx.real(data["schofer_constant"])) / root.to_real(ctx) * d**2 * w**8 / (64 * mp.pi**4)
    out.append(_numeric("section6/borcherds_side", [
        ("series vs Borcherds", relative_residual(hyp_side, borcherds, ctx)),
        ("Borcherds vs Schofer", relative_residual(borcherds, schofer, ctx)),
    ], ctx))

    out.extend(verify_identity(f"section6/{i.case_id}", i, ctx) for i in data["finals"])
    return out


# ------------------------------------------------------------ p-adic


def _padic_row_case(row, t2_rows, K, p):
    case_id = f"padic/d{row.d}"
    ref = t2_rows.get(row.d)
    if ref is None or ref.m_num != row.m_num or ref.n_den != row.n_den:
        return VerifyReport(case_id, "FAIL", None, 0, "argument differs from the archimedean table")
    if row.a2 is None:
        target = A2Target(Fraction(1))
        rep = verify_remark4_row(row.d, row.m_num, row.n_den, target, K, p)
        if rep.status == "SKIPPED" and rep.details.startswith("ConvergenceError"):
            return VerifyReport(case_id, "SKIPPED", None, 0, rep.details)
        return VerifyReport(case_id, "FAIL", None, 0, "expected divergence, series converged")
    rep = verify_remark4_row(row.d, row.m_num, row.n_den, row.a2, K, p)
    residual = Fraction(1, p**rep.precision) if rep.status != "SKIPPED" else None
    details = rep.details
    if rep.choices:
        details += f"; choices {rep.choices}"
    return VerifyReport(case_id, rep.status, residual, rep.precision, details)


def _padic_properties(K: int, p: int, cases: int = 200, seed: int = 20240607):
    rng = random.Random(seed)
    bad = []
    for _ in range(cases):
        k = rng.randint(1, min(K, 4))
        n = rng.randint(1, p**k * 3)
        m = n + p**k * rng.randint(1, 20)
        if gamma_p_integer(n, p, K) % p**k != gamma_p_integer(m, p, K) % p**k:
            bad.append(("continuity", n, m, k))
        if n < 5000 and gamma_p_integer(n, p, K) != gamma_p_direct(n, p, K):
            bad.append(("direct", n))
    cont = _exact("padic/gamma_continuity", [(f"{cases} random pairs", not bad)])
    bad = []
    for _ in range(cases):
        x = PadicNumber.from_rational(rng.randint(1, p**K - 1), p, K)
        for r in sqrt_padic(x):
            if not (r * r).congruent(x, K + x.valuation):
                bad.append(x)
    squares = _exact("padic/hensel_square", [(f"{cases} random units", not bad)])
    return [cont, squares]


# ------------------------------------------------------------ Chowla-Selberg


_DELTA = {}


def _delta_series(upto=200) -> QSeries:
    if upto not in _DELTA:
        _DELTA[upto] = delta_expansion(upto)
    return _DELTA[upto]


def verify_class_number(d: int, ctx: PrecisionContext) -> VerifyReport:
    data = field_data(d)
    analytic = class_number_analytic(d, ctx)
    res = abs(analytic - data.h) / data.h
    rep = _numeric(f"chowla_selberg/d{d}/class_number", [("h", res)], ctx, f"h = {data.h}")
    return rep


def verify_delta_product(d: int, ctx: PrecisionContext) -> VerifyReport:
    """prod_j a_j^-6 |Delta(tau_j)| = omega_d^(12h) / (2 pi)^(6h) over reduced forms."""
    mp = ctx.mp
    data = field_data(d)
    delta = _delta_series()
    lhs = mp.one
    for a, tau in reduced_form_points(d, ctx):
        lhs *= abs(qseries_eval(delta, tau, ctx)) / mp.mpf(a) ** 6
    rhs = omega(d, ctx) ** (12 * data.h) / (2 * mp.pi) ** (6 * data.h)
    return _numeric(f"chowla_selberg/d{d}/delta_product", [("product", relative_residual(lhs, rhs, ctx))], ctx,
                    f"{data.h} reduced form(s)")


def verify_delta_at_i(expr: Expression, ctx: PrecisionContext) -> VerifyReport:
    value = qseries_eval(_delta_series(), ctx.mp.mpc(0, 1), ctx)
    return _numeric("chowla_selberg/delta_at_i",
                    [("Delta(i)", relative_residual(value, evaluate_expression(expr, ctx), ctx))], ctx)


# ------------------------------------------------------------ q-series


def _quotient_series(specs, level, upto):
    total = None
    for entry in specs:
        s = eta_quotient_expansion(EtaQuotient(entry.exponents, level), upto).scale(entry.scalar)
        total = s if total is None else total + s
    return total


def _prefix_matches(series: QSeries, expected: dict) -> bool:
    return all(series.coefficient(Fraction(e)) == c for e, c in expected.items())


def verify_qseries(data: dict) -> List[VerifyReport]:
    out = []
    level = data["level"]
    upto = 24
    for name in ("f", "g"):
        block = data[name]
        series = _quotient_series(block["quotients"], level, upto)
        got = ", ".join(f"q^{e}: {series.coefficient(Fraction(e))}" for e in block["expected_prefix"])
        out.append(_exact(f"qseries/{name}_prefix", [(f"coefficients {got}", _prefix_matches(series, block["expected_prefix"]))]))
        for i, entry in enumerate(block["quotients"], 1):
            report = lemma13_check(EtaQuotient(entry.exponents, level), data["dual_order"])
            checks = [(k, v) for k, v in report.conditions.items()]
            rep = _exact(f"qseries/eta_conditions/{name}{i}", checks)
            rep.details += f"; {report.note}"
            out.append(rep)
        s1, s3, half, ok = e0_parity({k: v for k, v in data["e0_components"][name].items()})
        integral = all(v.denominator == 1 for v in data["e0_components"][name].values())
        out.append(_exact(f"qseries/parity/{name}", [(f"({s1}, {s3}, {half}) agree mod 2", integral and ok)]))

    table = data["cusp_table"]
    checks = []
    for delta, expected in sorted(table["rows"].items()):
        orders = eta_cusp_orders(EtaQuotient({delta: 1}, level))
        got = [orders[c] for c in table["columns"]]
        checks.append((f"eta({delta} tau)", got == expected))
    checks.append(("36 entries", sum(len(v) for v in table["rows"].values()) == 36))
    out.append(_exact("qseries/cusp_table", checks))

    first = data["f"]["quotients"][0]
    orders = eta_cusp_orders(EtaQuotient(first.exponents, level))
    negative = [c for c, v in orders.items() if v < 0]
    out.append(_exact("qseries/f1_poles", [(f"negative orders at {negative}", negative == [level])]))

    n = len(data["eta_prefix"])
    eta = eta_expansion(max(n, 8))
    out.append(_exact("qseries/eta_prefix", [
        ("pentagonal coefficients", list(eta.coefficients[:n]) == data["eta_prefix"]),
        ("leading exponent 1/24", eta.leading_exponent == Fraction(1, 24)),
    ]))
    n = len(data["delta_prefix"])
    delta = delta_expansion(max(n, 8))
    out.append(_exact("qseries/delta_prefix", [
        ("eta^24 coefficients", list(delta.coefficients[:n]) == data["delta_prefix"]),
        ("leading exponent 1", delta.leading_exponent == 1),
    ]))
    inv = series_mul(eta, series_inverse(eta))
    out.append(_exact("qseries/eta_inverse", [
        ("eta * eta^-1 = 1", inv.leading_exponent == 0 and inv.coefficients[0] == 1 and not any(inv.coefficients[1:])),
    ]))
    return out


# ------------------------------------------------------------ quaternion


def verify_embedding(d, family, embedding, z, ctx: PrecisionContext) -> VerifyReport:
    a1, a2, a3 = embedding
    lam = pure(a1, a2, a3)
    case_id = f"quaternion/d{d}"
    try:
        disc = embedding_discriminant(lam)
        split = lattice_split(lam)
        _, residual = cm_point_with_residual(a1, a2, a3, d, ctx)
    except CMPeriodsError as exc:
        return VerifyReport(case_id, "FAIL", None, 0, f"{type(exc).__name__}: {exc}")
    r = level_cofactor_r(d)
    tol = ctx.mp.mpf(10) ** (-tolerance_digits(ctx))
    checks = [
        (f"discriminant {disc}", disc == d),
        (f"disc L- = {split.disc_minus} = {r}^2 |d|", split.disc_minus == r * r * -d),
        ("Gram negative definite", split.gram_minus[0][0] < 0 and split.disc_minus > 0),
        ("sign constraint", _sign_constraint_ok(family, z, embedding)),
        ("fixed point", residual < tol),
    ]
    rep = _exact(case_id, checks)
    rep.residual = residual
    rep.digits_checked = tolerance_digits(ctx)
    return rep


# ------------------------------------------------------------ suites


SUITES = ("theorem2", "prop27", "constants", "remark1", "section6", "padic", "chowla_selberg", "qseries", "quaternion")


def _cases(suite: str, ctx: PrecisionContext, root, padic_precision: int) -> List[tuple]:
    """(case_id, thunk) pairs for a suite.  Fixtures are loaded here, so schema
    problems surface before any case runs."""
    if suite == "theorem2":
        t2 = fx.load_theorem2(root)
        return [(f"theorem2/{r.case_id}", lambda r=r: verify_theorem2_row(r, ctx)) for r in t2["rows"]]
    if suite == "prop27":
        t2 = fx.load_theorem2(root)
        cases = [(f"prop27/{r.case_id}", lambda r=r: verify_prop27(r, ctx)) for r in t2["rows"]]
        cases += [(f"prop27/{r.case_id}/cayley_ratio", lambda r=r: verify_cayley_ratio(r, ctx))
                  for r in t2["rows"] if r.family == "S" and r.m_num > 0]
        cases += [(f"prop27/d{p.d}", lambda p=p: verify_special_point(p, ctx)) for p in t2["special_points"]]
        return cases
    if suite == "constants":
        consts = fx.load_constants(root)
        special = fx.load_theorem2(root)["special_points"]
        return [("constants/*", lambda: verify_constants(ctx, consts, special))]
    if suite == "remark1":
        ids = fx.load_remark1(root)
        return [(f"remark1/{i.case_id}", lambda i=i: verify_identity(f"remark1/{i.case_id}", i, ctx)) for i in ids]
    if suite == "section6":
        data = fx.load_section6(root)
        return [("section6/*", lambda: run_section6(ctx, data))]
    if suite == "padic":
        r4 = fx.load_remark4(root)
        t2 = {r.d: r for r in fx.load_theorem2(root)["rows"]}
        p = r4["p"]
        cases = [(f"padic/d{r.d}", lambda r=r: _padic_row_case(r, t2, padic_precision, p)) for r in r4["rows"]]
        cases.append(("padic/properties", lambda: _padic_properties(padic_precision, p)))
        return cases
    if suite == "chowla_selberg":
        cs = fx.load_chowla_selberg(root)
        cases = []
        for d in cs["discriminants"]:
            cases.append((f"chowla_selberg/d{d}/class_number", lambda d=d: verify_class_number(d, ctx)))
            cases.append((f"chowla_selberg/d{d}/delta_product", lambda d=d: verify_delta_product(d, ctx)))
        cases.append(("chowla_selberg/delta_at_i", lambda: verify_delta_at_i(cs["delta_at_i"], ctx)))
        return cases
    if suite == "qseries":
        data = fx.load_qseries(root)
        return [("qseries/*", lambda: verify_qseries(data))]
    if suite == "quaternion":
        t2 = fx.load_theorem2(root)
        cases = [(f"quaternion/{r.case_id}", lambda r=r: verify_embedding(r.d, r.family, r.embedding, r.argument, ctx))
                 for r in t2["rows"]]
        cases += [(f"quaternion/d{p.d}", lambda p=p: verify_embedding(p.d, p.family, p.embedding, p.value, ctx))
                  for p in t2["special_points"]]
        return cases
    raise CMPeriodsError(f"unknown suite {suite!r}")


def _guarded(case_id: str, thunk: Callable) -> List[VerifyReport]:
    try:
        result = thunk()
    except (CMPeriodsError, ArithmeticError, ValueError) as exc:
        return [VerifyReport(case_id, "FAIL", None, 0, f"{type(exc).__name__}: {exc}")]
    return result if isinstance(result, list) else [result]


def run_suite(suite: str, digits: int = 40, padic_precision: int = 6, fixtures_path=None, jobs: int = 1) -> List[VerifyReport]:
    """Run one suite (or 'all') and return its reports sorted by case_id.

    A fixture schema violation becomes a single FAIL report naming the file
    and field, so a corrupted table can never pass silently.
    """
    ctx = PrecisionContext(digits)
    names = SUITES if suite == "all" else (suite,)
    cases = []
    failures = []
    for name in names:
        try:
            cases.extend(_cases(name, ctx, fixtures_path, padic_precision))
        except FixtureError as exc:
            failures.append(VerifyReport(f"{name}/fixtures", "FAIL", None, 0, str(exc)))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: _guarded(*c), cases))
    else:
        results = [_guarded(*c) for c in cases]
    reports = failures + [r for batch in results for r in batch]
    reports.sort(key=lambda r: r.case_id)
    ids = [r.case_id for r in reports]
    if len(set(ids)) != len(ids):
        raise CMPeriodsError("duplicate case ids in suite output")
    return reports
