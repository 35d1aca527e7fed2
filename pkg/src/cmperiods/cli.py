"""Command-line driver: ``cmperiods verify|eval|omega|padic-gamma|expand-eta``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import CMPeriodsError, ConfigError
from .numerics import HypParams, PrecisionContext, hyp_pfq

SUITE_CHOICES = (
    "theorem2", "prop27", "constants", "remark1", "section6",
    "padic", "chowla_selberg", "qseries", "quaternion", "all",
)


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    digits: int = 40
    padic_precision: int = 6
    fixtures_path: Optional[str] = None
    json_out: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        if self.suite not in SUITE_CHOICES:
            raise ConfigError("suite", f"unknown suite {self.suite!r}")
        if self.digits < 20:
            raise ConfigError("digits", f"must be >= 20, got {self.digits}")
        if not 3 <= self.padic_precision <= 8:
            raise ConfigError("padic_precision", f"must lie in [3, 8], got {self.padic_precision}")
        if self.jobs < 1:
            raise ConfigError("jobs", f"must be >= 1, got {self.jobs}")


def report_document(config: SuiteConfig, reports, runtime_ms: int) -> dict:
    return {
        "suite": config.suite,
        "digits": config.digits,
        "cases": [r.to_dict() for r in reports],
        "meta": {"runtime_ms": runtime_ms, "version": __version__},
    }


def run(config: SuiteConfig, out=None) -> int:
    """Run a suite, print one line per case, optionally write JSON; return the exit code."""
    from .verify import run_suite

    out = out or sys.stdout
    start = time.perf_counter()
    reports = run_suite(config.suite, config.digits, config.padic_precision, config.fixtures_path, config.jobs)
    runtime_ms = int((time.perf_counter() - start) * 1000)
    for r in reports:
        print(f"{r.status:<8}{r.case_id:<44}{r.residual_decimal():>14}  {r.details}", file=out)
    counts = {s: sum(1 for r in reports if r.status == s) for s in ("PASS", "FAIL", "SKIPPED")}
    print(f"{config.suite}: {counts['PASS']} passed, {counts['FAIL']} failed, "
          f"{counts['SKIPPED']} skipped in {runtime_ms} ms", file=out)
    if config.json_out:
        with open(config.json_out, "w", encoding="utf-8") as fh:
            json.dump(report_document(config, reports, runtime_ms), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    return 0 if counts["FAIL"] == 0 else 1


# ---------------------------------------------------------------- parsing


def _fraction(text: str, field: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(field, f"not a rational number: {text!r}") from None


def _fraction_list(text: str, field: str):
    if not text:
        return ()
    return tuple(_fraction(t, field) for t in text.split(","))


def _context(digits: int) -> PrecisionContext:
    if digits < 20:
        raise ConfigError("digits", f"must be >= 20, got {digits}")
    return PrecisionContext(digits)


def cmd_verify(args) -> int:
    if args.p is not None:
        from .fixtures import load_remark4

        tabulated = load_remark4(args.fixtures)["p"]
        if args.p != tabulated:
            raise ConfigError("p", f"the p-adic table is tabulated for p = {tabulated}")
    config = SuiteConfig(args.suite, args.digits, args.prec, args.fixtures, args.json, args.jobs)
    return run(config)


def cmd_eval(args) -> int:
    ctx = _context(args.digits)
    if args.kind == "pfq":
        num, den = _fraction_list(args.num, "num"), _fraction_list(args.den, "den")
    else:
        params = _fraction_list(args.params, "params")
        p = 2 if args.kind == "2f1" else 3
        if len(params) != 2 * p - 1:
            raise ConfigError("params", f"{args.kind} needs {2 * p - 1} parameters, got {len(params)}")
        num, den = params[:p], params[p:]
    z = _fraction(args.at, "at")
    result = hyp_pfq(HypParams(num, den, z), ctx)
    print(f"value  {ctx.mp.nstr(result.value, args.digits)}")
    print(f"terms  {result.terms}")
    print(f"tail   {ctx.mp.nstr(result.tail_bound, 3)}")
    return 0


def cmd_omega(args) -> int:
    from .quadfield import big_omega, field_data, omega

    ctx = _context(args.digits)
    data = field_data(args.d)
    print(f"d      {args.d}")
    print(f"h      {data.h}")
    print(f"mu     {data.mu}")
    print(f"omega  {ctx.mp.nstr(omega(args.d, ctx), args.digits)}")
    print(f"Omega  {ctx.mp.nstr(big_omega(args.d, ctx), args.digits)}")
    return 0


def cmd_padic_gamma(args) -> int:
    from .padic import gamma_p

    if not 1 <= args.prec <= 8:
        raise ConfigError("prec", f"must lie in [1, 8], got {args.prec}")
    value = gamma_p(_fraction(args.x, "x"), args.p, args.prec)
    print(f"Gamma_{args.p}({args.x}) = {value.unit} mod {args.p}^{args.prec}")
    n, digits = value.digits(), []
    for _ in range(args.prec):
        n, r = divmod(n, args.p)
        digits.append(str(r))
    print(f"base-{args.p} digits (low first): {' '.join(digits)}")
    return 0


def cmd_expand_eta(args) -> int:
    from .qseries import EtaQuotient, eta_quotient_expansion

    exps = {}
    for item in args.exponents.split(","):
        try:
            k, v = item.split(":")
            exps[int(k)] = int(v)
        except ValueError:
            raise ConfigError("exponents", f"expected delta:r pairs, got {item!r}") from None
    if args.upto < 1:
        raise ConfigError("upto", "must be >= 1")
    series = eta_quotient_expansion(EtaQuotient(exps, args.level), args.upto)
    scalar = _fraction(args.scalar, "scalar")
    print(series.scale(scalar))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmperiods", description="High-precision checks of CM hypergeometric evaluations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all", choices=SUITE_CHOICES)
    v.add_argument("--digits", type=int, default=40)
    v.add_argument("--prec", "--padic-precision", dest="prec", type=int, default=6, help="p-adic precision K")
    v.add_argument("--p", type=int, default=None, help="prime for the p-adic suite (must match the fixture table)")
    v.add_argument("--fixtures", default=None, help="fixture directory (overrides CMP_FIXTURES)")
    v.add_argument("--json", default=None, help="write the JSON report here")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a hypergeometric series")
    e.add_argument("kind", choices=("2f1", "3f2", "pfq"))
    e.add_argument("--params", default="", help="a,b,c for 2f1 or a1,a2,a3,b1,b2 for 3f2")
    e.add_argument("--num", default="", help="numerator parameters for pfq")
    e.add_argument("--den", default="", help="denominator parameters for pfq")
    e.add_argument("--at", required=True, help="rational argument z")
    e.add_argument("--digits", type=int, default=40)
    e.set_defaults(func=cmd_eval)

    o = sub.add_parser("omega", help="Chowla-Selberg constants of Q(sqrt d)")
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--digits", type=int, default=40)
    o.set_defaults(func=cmd_omega)

    g = sub.add_parser("padic-gamma", help="Morita's p-adic Gamma function")
    g.add_argument("--x", required=True)
    g.add_argument("--p", type=int, default=7)
    g.add_argument("--prec", type=int, default=6)
    g.set_defaults(func=cmd_padic_gamma)

    x = sub.add_parser("expand-eta", help="q-expansion of an eta quotient")
    x.add_argument("--exponents", required=True, help="delta:r pairs, e.g. 2:1,3:2,12:-10")
    x.add_argument("--level", type=int, default=12)
    x.add_argument("--upto", type=int, default=10)
    x.add_argument("--scalar", default="1")
    x.set_defaults(func=cmd_expand_eta)
    return parser


_VALUE_FLAGS = ("--at", "--x", "--d", "--scalar")


def _glue_negative_values(argv):
    # argparse reads "-2401/3375" as an option; attach such values to their flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _VALUE_FLAGS and nxt[:1] == "-" and nxt[1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CMPeriodsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
