"""Fault injection over the packaged fixture files.

A leaf is one fixture value: a nonzero number (int, float or "p/q" string),
a whole a + b sqrt(m) record, or a whole {num, den} pair.  Perturbing a leaf
multiplies it by 1 + 10^-10.  Integer-only fields (discriminants, embedding
coordinates, levels, exponents) then fail to load, which run_suite reports
as a FAIL case.
"""
import copy
import json
import shutil
from fractions import Fraction
from pathlib import Path

from cmperiods.fixtures import PACKAGE_DIR

FACTOR = Fraction(10**10 + 1, 10**10)
QUAD_KEYS = {"a_num", "a_den", "b_num", "b_den", "m"}
PAIR_KEYS = {"num", "den"}
FILES = ("theorem2", "prop27", "constants", "remark1", "section6", "padic", "chowla_selberg", "qseries", "quaternion")


def load(name):
    with open(PACKAGE_DIR / f"{name}.json", encoding="utf-8") as fh:
        return json.load(fh)


def _number(v):
    if isinstance(v, bool):
        return None
    if isinstance(v, (int, float)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            return None
    return None


def _is_pair(doc):
    return PAIR_KEYS <= doc.keys() and all(isinstance(doc[k], int) for k in PAIR_KEYS)


def leaves(doc, path=()):
    """Paths of every nonzero leaf, in document order."""
    if isinstance(doc, dict):
        if QUAD_KEYS <= doc.keys() or _is_pair(doc):
            yield path
            return
        for k, v in doc.items():
            yield from leaves(v, path + (k,))
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from leaves(v, path + (i,))
    else:
        x = _number(doc)
        if x:
            yield path


def _bumped(v):
    if isinstance(v, dict) and QUAD_KEYS <= v.keys():
        a = Fraction(v["a_num"], v["a_den"]) * FACTOR
        b = Fraction(v["b_num"], v["b_den"]) * FACTOR
        return dict(v, a_num=a.numerator, a_den=a.denominator, b_num=b.numerator, b_den=b.denominator)
    if isinstance(v, dict):
        return dict(v, num=v["num"] * FACTOR.numerator, den=v["den"] * FACTOR.denominator)
    x = _number(v) * FACTOR
    return f"{x.numerator}/{x.denominator}"


def perturb(doc, path):
    out = copy.deepcopy(doc)
    node = out
    for key in path[:-1]:
        node = node[key]
    if path:
        node[path[-1]] = _bumped(node[path[-1]])
        return out
    return _bumped(out)


def write_tree(target: Path, name: str, doc):
    """Copy the packaged fixtures into target and replace one file."""
    target.mkdir(parents=True, exist_ok=True)
    for src in PACKAGE_DIR.glob("*.json"):
        shutil.copy(src, target / src.name)
    with open(target / f"{name}.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    return target


def consumed(suite):
    """(file, path) pairs a suite reads, so a perturbation there must turn it FAIL."""
    out = []
    if suite in ("theorem2", "prop27", "quaternion", "constants", "padic"):
        doc = load("theorem2")
        padic_ds = {row["d"] for row in load("remark4")["rows"]}
        for path in leaves(doc):
            row = doc[path[0]][path[1]]
            field = path[2]
            identity = field in ("d", "a1", "a2", "a3")
            if suite == "prop27":
                use = True
            elif suite == "theorem2":
                use = field not in ("scale", "value") and path[0] == "rows" or identity
            elif suite == "quaternion":
                use = identity
            elif suite == "constants":
                use = identity or (path[0] == "special_points" and field == "scale" and row["d"] in (-4, -3))
            else:
                use = identity or (field in ("M", "N") and row["d"] in padic_ds)
            if use:
                out.append(("theorem2", path))
    own = {"constants": "constants", "remark1": "remark1", "section6": "section6", "padic": "remark4",
           "chowla_selberg": "chowla_selberg", "qseries": "qseries"}
    if suite in own:
        doc = load(own[suite])
        out += [(own[suite], p) for p in leaves(doc)]
    return out
