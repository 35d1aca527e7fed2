"""Loading and validating the JSON fixture tables.

Every loader takes an optional directory; when omitted the directory comes
from the CMP_FIXTURES environment variable, falling back to the copy shipped
inside the package.  Schema violations raise FixtureError naming the file and
the offending field.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CMPeriodsError, FixtureError
from .exact import CoefficientTemplate, QuadExt, QuadPoly
from .quaternion import QuatElement

ENV_VAR = "CMP_FIXTURES"
PACKAGE_DIR = Path(__file__).with_name("fixtures")


def fixtures_dir(root=None) -> Path:
    if root is not None:
        return Path(root)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else PACKAGE_DIR


def _read(name: str, root=None):
    path = fixtures_dir(root) / name
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh), str(path)
    except FileNotFoundError:
        raise FixtureError(str(path), "file not found") from None
    except json.JSONDecodeError as exc:
        raise FixtureError(str(path), f"invalid JSON: {exc}") from None


# ------------------------------------------------------------ scalar fields


class _Ctx:
    """Carries the file path and a field trail for error messages."""

    def __init__(self, path, trail=""):
        self.path = path
        self.trail = trail

    def at(self, key) -> "_Ctx":
        sep = "" if not self.trail else "."
        key = f"[{key}]" if isinstance(key, int) else f"{sep}{key}"
        return _Ctx(self.path, self.trail + key)

    def fail(self, message):
        raise FixtureError(self.path, f"{self.trail or '<root>'}: {message}")


def _get(obj, key, c: _Ctx):
    if not isinstance(obj, dict):
        c.fail("expected an object")
    if key not in obj:
        c.at(key).fail("missing field")
    return obj[key]


def _integer(v, c: _Ctx) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        c.fail(f"expected an integer, got {v!r}")
    return v


def _rational(v, c: _Ctx) -> Fraction:
    if isinstance(v, bool):
        c.fail(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            num, _, den = v.strip().partition("/")
            return Fraction(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError):
            pass
    c.fail(f"expected an integer or 'p/q' string, got {v!r}")


def _list(v, c: _Ctx, length=None) -> list:
    if not isinstance(v, list):
        c.fail("expected a list")
    if length is not None and len(v) != length:
        c.fail(f"expected {length} entries, got {len(v)}")
    return v


def _quadext(v, c: _Ctx) -> QuadExt:
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return QuadExt(_rational(v, c))
    parts = {k: _integer(_get(v, k, c), c.at(k)) for k in ("a_num", "a_den", "b_num", "b_den", "m")}
    if parts["a_den"] == 0 or parts["b_den"] == 0:
        c.fail("zero denominator")
    try:
        return QuadExt(Fraction(parts["a_num"], parts["a_den"]), Fraction(parts["b_num"], parts["b_den"]), parts["m"])
    except CMPeriodsError as exc:
        c.at("m").fail(str(exc))


def _discriminant(v, c: _Ctx) -> int:
    d = _integer(v, c)
    if d >= 0:
        c.fail(f"discriminant must be negative, got {d}")
    return d


# --------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Monomial:
    """A product of factors of the kinds that occur in the closed forms.

    coeff * prod base^e * prod omega_d^e * prod Omega_d^e * pi^e
          * prod Gamma(x)^e * prod sin(pi x)^e * prod surd^k
          * prod pFq(...)^e * prod 2F1(a,b;c;1)^e
    """

    coeff: QuadExt = QuadExt(1)
    powers: tuple = ()
    omegas: tuple = ()
    big_omegas: tuple = ()
    pi: Fraction = Fraction(0)
    gammas: tuple = ()
    sinpi: tuple = ()
    surds: tuple = ()
    hyps: tuple = ()
    gauss: tuple = ()


@dataclass(frozen=True)
class Expression:
    """prefactor * (sum of terms)."""

    terms: tuple
    prefactor: Monomial = Monomial()


@dataclass(frozen=True)
class Identity:
    case_id: str
    lhs: Expression
    rhs: Expression


def _pairs(v, c: _Ctx, first, second):
    out = []
    for i, item in enumerate(_list(v, c)):
        ci = c.at(i)
        item = _list(item, ci, 2)
        out.append((first(item[0], ci.at(0)), second(item[1], ci.at(1))))
    return tuple(out)


def _hyp_factor(v, c: _Ctx):
    num = tuple(_rational(x, c.at("num").at(i)) for i, x in enumerate(_list(_get(v, "num", c), c.at("num"))))
    den = tuple(_rational(x, c.at("den").at(i)) for i, x in enumerate(_list(_get(v, "den", c), c.at("den"))))
    z = _quadext(_get(v, "z", c), c.at("z"))
    exp = _rational(v.get("exp", 1), c.at("exp"))
    return num, den, z, exp


def _gauss_factor(v, c: _Ctx):
    a, b, cc = (_rational(_get(v, k, c), c.at(k)) for k in ("a", "b", "c"))
    return a, b, cc, _rational(v.get("exp", 1), c.at("exp"))


_MONOMIAL_KEYS = {"coeff", "powers", "omegas", "big_omegas", "pi", "gammas", "sinpi", "surds", "hyp", "gauss"}


def _monomial(v, c: _Ctx) -> Monomial:
    if not isinstance(v, dict):
        c.fail("expected a monomial object")
    unknown = set(v) - _MONOMIAL_KEYS
    if unknown:
        c.fail(f"unknown monomial keys {sorted(unknown)}")
    get = lambda k, default: v.get(k, default)  # noqa: E731
    return Monomial(
        coeff=_quadext(get("coeff", 1), c.at("coeff")),
        powers=_pairs(get("powers", []), c.at("powers"), _rational, _rational),
        omegas=_pairs(get("omegas", []), c.at("omegas"), _discriminant, _rational),
        big_omegas=_pairs(get("big_omegas", []), c.at("big_omegas"), _discriminant, _rational),
        pi=_rational(get("pi", 0), c.at("pi")),
        gammas=_pairs(get("gammas", []), c.at("gammas"), _rational, _rational),
        sinpi=_pairs(get("sinpi", []), c.at("sinpi"), _rational, _rational),
        surds=_pairs(get("surds", []), c.at("surds"), _quadext, _integer),
        hyps=tuple(_hyp_factor(h, c.at("hyp").at(i)) for i, h in enumerate(_list(get("hyp", []), c.at("hyp")))),
        gauss=tuple(_gauss_factor(g, c.at("gauss").at(i)) for i, g in enumerate(_list(get("gauss", []), c.at("gauss")))),
    )


def _expression(v, c: _Ctx) -> Expression:
    terms = _list(_get(v, "terms", c), c.at("terms"))
    if not terms:
        c.at("terms").fail("empty sum")
    pre = _monomial(v["prefactor"], c.at("prefactor")) if "prefactor" in v else Monomial()
    return Expression(tuple(_monomial(t, c.at("terms").at(i)) for i, t in enumerate(terms)), pre)


def _identities(v, c: _Ctx, key="id"):
    out = []
    for i, item in enumerate(_list(v, c)):
        ci = c.at(i)
        case_id = _get(item, key, ci)
        if not isinstance(case_id, str):
            ci.at(key).fail("expected a string")
        out.append(Identity(case_id, _expression(_get(item, "lhs", ci), ci.at("lhs")),
                            _expression(_get(item, "rhs", ci), ci.at("rhs"))))
    ids = [x.case_id for x in out]
    if len(set(ids)) != len(ids):
        c.fail("duplicate identity ids")
    return out


# -------------------------------------------------------------- tables


@dataclass(frozen=True)
class Theorem2Row:
    d: int
    family: str
    m_num: Fraction
    n_den: Fraction
    embedding: tuple
    scale: Fraction
    hyp1_pow: QuadExt
    hyp2_sq: QuadExt

    @property
    def argument(self) -> Fraction:
        return self.m_num / self.n_den

    @property
    def case_id(self) -> str:
        return f"d{self.d}"


@dataclass(frozen=True)
class SpecialPoint:
    d: int
    family: str
    embedding: tuple
    scale: Fraction
    value: Fraction


def _family(v, c):
    if v not in ("S", "T"):
        c.fail(f"family must be 'S' or 'T', got {v!r}")
    return v


def _embedding(obj, c):
    return tuple(_integer(_get(obj, k, c), c.at(k)) for k in ("a1", "a2", "a3"))


def load_theorem2(root=None) -> dict:
    data, path = _read("theorem2.json", root)
    c = _Ctx(path)
    rows = []
    for i, r in enumerate(_list(_get(data, "rows", c), c.at("rows"))):
        ci = c.at("rows").at(i)
        row = Theorem2Row(
            d=_discriminant(_get(r, "d", ci), ci.at("d")),
            family=_family(_get(r, "family", ci), ci.at("family")),
            m_num=_rational(_get(r, "M", ci), ci.at("M")),
            n_den=_rational(_get(r, "N", ci), ci.at("N")),
            embedding=_embedding(r, ci),
            scale=_rational(_get(r, "scale", ci), ci.at("scale")),
            hyp1_pow=_quadext(_get(r, "hyp1_pow", ci), ci.at("hyp1_pow")),
            hyp2_sq=_quadext(_get(r, "hyp2_sq", ci), ci.at("hyp2_sq")),
        )
        if row.n_den <= 0:
            ci.at("N").fail("N must be positive")
        if abs(row.argument) >= 1:
            ci.at("M").fail("|M/N| must be < 1")
        if row.scale <= 0:
            ci.at("scale").fail("scale must be positive")
        for key in ("hyp1_pow", "hyp2_sq"):
            if getattr(row, key).sign() <= 0:
                ci.at(key).fail("must be a positive real number")
        rows.append(row)
    if len({r.d for r in rows}) != len(rows):
        c.at("rows").fail("duplicate discriminants")
    special = []
    for i, r in enumerate(_list(data.get("special_points", []), c.at("special_points"))):
        ci = c.at("special_points").at(i)
        special.append(SpecialPoint(
            d=_discriminant(_get(r, "d", ci), ci.at("d")),
            family=_family(_get(r, "family", ci), ci.at("family")),
            embedding=_embedding(r, ci),
            scale=_rational(_get(r, "scale", ci), ci.at("scale")),
            value=_rational(_get(r, "value", ci), ci.at("value")),
        ))
    return {"rows": rows, "special_points": special}


@dataclass(frozen=True)
class PadicTableRow:
    d: int
    m_num: Fraction
    n_den: Fraction
    a2: object  # A2Target or None when the row is expected to diverge


def load_remark4(root=None) -> dict:
    from .padic import A2Target

    data, path = _read("remark4.json", root)
    c = _Ctx(path)
    p = _integer(_get(data, "p", c), c.at("p"))
    rows = []
    for i, r in enumerate(_list(_get(data, "rows", c), c.at("rows"))):
        ci = c.at("rows").at(i)
        a2 = _get(r, "A2", ci)
        target = None
        if a2 is not None:
            ca = ci.at("A2")
            num = _integer(_get(a2, "num", ca), ca.at("num"))
            den = _integer(_get(a2, "den", ca), ca.at("den"))
            if den == 0:
                ca.at("den").fail("zero denominator")
            target = A2Target(
                Fraction(num, den),
                _integer(a2.get("radicand", 1), ca.at("radicand")),
                _integer(a2.get("radical_power", 0), ca.at("radical_power")),
            )
        rows.append(PadicTableRow(
            _discriminant(_get(r, "d", ci), ci.at("d")),
            _rational(_get(r, "M", ci), ci.at("M")),
            _rational(_get(r, "N", ci), ci.at("N")),
            target,
        ))
    return {"p": p, "rows": rows}


def load_remark1(root=None) -> list:
    data, path = _read("remark1.json", root)
    c = _Ctx(path)
    return _identities(_get(data, "identities", c), c.at("identities"))


def load_constants(root=None) -> dict:
    data, path = _read("constants.json", root)
    c = _Ctx(path)
    ratio = _get(data, "cm_ratio", c)
    cr = c.at("cm_ratio")
    dims = _get(data, "dim_cusp_forms", c)
    cd = c.at("dim_cusp_forms")
    if not isinstance(dims, dict):
        cd.fail("expected an object")
    dim_cusp = {}
    for k, v in dims.items():
        try:
            weight = int(k)
        except ValueError:
            cd.fail(f"weight key {k!r} is not an integer")
        dim_cusp[weight] = _rational(v, cd.at(k))
    cor = _get(data, "period_constants", c)
    cc = c.at("period_constants")
    return {
        "identities": _identities(_get(data, "identities", c), c.at("identities")),
        "cm_ratio": {
            "d_num": _discriminant(_get(ratio, "d_num", cr), cr.at("d_num")),
            "d_den": _discriminant(_get(ratio, "d_den", cr), cr.at("d_den")),
            "re": _quadext(_get(ratio, "re", cr), cr.at("re")),
            "im": _quadext(_get(ratio, "im", cr), cr.at("im")),
        },
        "dim_cusp_forms": dim_cusp,
        "C1": _expression(_get(cor, "C1", cc), cc.at("C1")),
        "C2": _expression(_get(cor, "C2", cc), cc.at("C2")),
    }


def _quat(v, c):
    v = _list(v, c, 4)
    return QuatElement(*(_rational(x, c.at(i)) for i, x in enumerate(v)))


def _int_triple(v, c):
    return tuple(_integer(x, c.at(i)) for i, x in enumerate(_list(v, c, 3)))


def load_section6(root=None) -> dict:
    data, path = _read("section6.json", root)
    c = _Ctx(path)
    templates = []
    for i, t in enumerate(_list(_get(data, "sextic", c), c.at("sextic"), 7)):
        ct = c.at("sextic").at(i)
        templates.append(CoefficientTemplate(
            _rational(_get(t, "scale", ct), ct.at("scale")),
            _rational(_get(t, "p", ct), ct.at("p")),
            _rational(_get(t, "q", ct), ct.at("q")),
            _integer(_get(t, "power", ct), ct.at("power")),
        ))
    cq = c.at("quadratic_factor")
    quad = [_quadext(x, cq.at(i)) for i, x in enumerate(_list(_get(data, "quadratic_factor", c), cq, 3))]
    try:
        quadratic = QuadPoly(quad)
    except CMPeriodsError as exc:
        cq.fail(str(exc))
    return {
        "d": _discriminant(_get(data, "d", c), c.at("d")),
        "s1": _quadext(_get(data, "s1", c), c.at("s1")),
        "s2": _quadext(_get(data, "s2", c), c.at("s2")),
        "lambda1": _int_triple(_get(data, "lambda1", c), c.at("lambda1")),
        "lambda2": _int_triple(_get(data, "lambda2", c), c.at("lambda2")),
        "alpha": _quat(_get(data, "alpha", c), c.at("alpha")),
        "alpha_prime": _quat(_get(data, "alpha_prime", c), c.at("alpha_prime")),
        "alpha_norm": _rational(_get(data, "alpha_norm", c), c.at("alpha_norm")),
        "sextic": templates,
        "quadratic_factor": quadratic,
        "ratio_root": _quadext(_get(data, "ratio_root", c), c.at("ratio_root")),
        "schofer_constant": _rational(_get(data, "schofer_constant", c), c.at("schofer_constant")),
        "borcherds_factor": _quadext(_get(data, "borcherds_factor", c), c.at("borcherds_factor")),
        "finals": _identities(_get(data, "finals", c), c.at("finals")),
    }


@dataclass(frozen=True)
class QuotientSpec:
    scalar: Fraction
    exponents: dict = field(default_factory=dict)


def _exponent_map(v, c):
    if not isinstance(v, dict):
        c.fail("expected an object")
    out = {}
    for k, e in v.items():
        try:
            delta = int(k)
        except ValueError:
            c.fail(f"key {k!r} is not an integer")
        out[delta] = _integer(e, c.at(k))
    return out


def _prefix(v, c):
    if not isinstance(v, dict):
        c.fail("expected an object")
    out = {}
    for k, e in v.items():
        try:
            out[int(k)] = _rational(e, c.at(k))
        except ValueError:
            c.fail(f"key {k!r} is not an integer")
    return out


def load_qseries(root=None) -> dict:
    data, path = _read("qseries.json", root)
    c = _Ctx(path)
    level = _integer(_get(data, "level", c), c.at("level"))
    out = {"level": level, "dual_order": _integer(_get(data, "dual_order", c), c.at("dual_order"))}
    for name in ("f", "g"):
        cn = c.at(name)
        block = _get(data, name, c)
        quotients = []
        for i, q in enumerate(_list(_get(block, "quotients", cn), cn.at("quotients"))):
            cq = cn.at("quotients").at(i)
            exps = _exponent_map(_get(q, "exponents", cq), cq.at("exponents"))
            for delta in exps:
                if delta <= 0 or level % delta:
                    cq.at("exponents").fail(f"{delta} does not divide the level {level}")
            quotients.append(QuotientSpec(_rational(_get(q, "scalar", cq), cq.at("scalar")), exps))
        out[name] = {
            "quotients": quotients,
            "expected_prefix": _prefix(_get(block, "expected_prefix", cn), cn.at("expected_prefix")),
        }
    ct = c.at("cusp_table")
    table = _get(data, "cusp_table", c)
    columns = [_integer(x, ct.at("columns").at(i)) for i, x in enumerate(_list(_get(table, "columns", ct), ct.at("columns")))]
    rows_raw = _get(table, "rows", ct)
    if not isinstance(rows_raw, dict):
        ct.at("rows").fail("expected an object")
    rows = {}
    for k, vals in rows_raw.items():
        cr = ct.at("rows").at(k)
        try:
            delta = int(k)
        except ValueError:
            cr.fail("key is not an integer")
        rows[delta] = [_rational(x, cr.at(i)) for i, x in enumerate(_list(vals, cr, len(columns)))]
    out["cusp_table"] = {"columns": columns, "rows": rows}
    ce = c.at("e0_components")
    e0 = _get(data, "e0_components", c)
    out["e0_components"] = {name: _prefix(_get(e0, name, ce), ce.at(name)) for name in ("f", "g")}
    for key in ("eta_prefix", "delta_prefix"):
        out[key] = [_rational(x, c.at(key).at(i)) for i, x in enumerate(_list(_get(data, key, c), c.at(key)))]
    return out


def load_chowla_selberg(root=None) -> dict:
    data, path = _read("chowla_selberg.json", root)
    c = _Ctx(path)
    cd = c.at("discriminants")
    ds = [_discriminant(x, cd.at(i)) for i, x in enumerate(_list(_get(data, "discriminants", c), cd))]
    if len(set(ds)) != len(ds):
        cd.fail("duplicate discriminants")
    return {"discriminants": ds, "delta_at_i": _expression(_get(data, "delta_at_i", c), c.at("delta_at_i"))}
