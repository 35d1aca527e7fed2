import json

import pytest

from cmperiods.errors import FixtureError
from cmperiods.fixtures import (
    ENV_VAR,
    load_chowla_selberg,
    load_constants,
    load_qseries,
    load_remark1,
    load_remark4,
    load_section6,
    load_theorem2,
)
from cmperiods.verify import run_suite
from injection import load, write_tree


def broken(tmp_path, name, edit):
    doc = load(name)
    edit(doc)
    return write_tree(tmp_path, name, doc)


def test_packaged_fixtures_load():
    t2 = load_theorem2()
    assert len(t2["rows"]) == 21 and len(t2["special_points"]) == 3
    assert sum(r.family == "S" for r in t2["rows"]) == 10
    assert len(load_remark4()["rows"]) == 10
    assert len(load_remark1()) == 4
    assert len(load_section6()["sextic"]) == 7
    assert len(load_chowla_selberg()["discriminants"]) == 25
    assert load_qseries()["level"] == 12
    assert set(load_constants()) >= {"identities", "cm_ratio", "dim_cusp_forms"}


@pytest.mark.parametrize("field, value, message", [
    ("d", 120, "negative"),
    ("d", True, "integer"),
    ("a1", "12", "integer"),
    ("family", "U", "family"),
    ("N", -3375, "positive"),
    ("M", 5000, "< 1"),
    ("M", 0.5, "p/q"),
    ("scale", 0, "positive"),
])
def test_theorem2_schema(tmp_path, field, value, message):
    root = broken(tmp_path, "theorem2", lambda doc: doc["rows"][0].__setitem__(field, value))
    with pytest.raises(FixtureError) as err:
        load_theorem2(root)
    assert "rows[0]" in str(err.value) and message in str(err.value)
    assert str(root / "theorem2.json") in str(err.value)


def test_theorem2_missing_and_duplicate(tmp_path):
    root = broken(tmp_path, "theorem2", lambda doc: doc["rows"][3].pop("hyp2_sq"))
    with pytest.raises(FixtureError, match="hyp2_sq: missing field"):
        load_theorem2(root)
    root = broken(tmp_path, "theorem2", lambda doc: doc["rows"].append(doc["rows"][0]))
    with pytest.raises(FixtureError, match="duplicate"):
        load_theorem2(root)


def test_quadext_schema(tmp_path):
    def edit(doc):
        doc["rows"][0]["hyp2_sq"]["m"] = 4
    with pytest.raises(FixtureError, match="hyp2_sq.m"):
        load_theorem2(broken(tmp_path, "theorem2", edit))

    def negative(doc):
        doc["rows"][0]["hyp2_sq"]["a_num"] = -2025
    with pytest.raises(FixtureError, match="positive real"):
        load_theorem2(broken(tmp_path, "theorem2", negative))


def test_other_schemas(tmp_path):
    with pytest.raises(FixtureError):
        load_section6(broken(tmp_path / "a", "section6", lambda doc: doc["sextic"].pop()))
    with pytest.raises(FixtureError):
        load_qseries(broken(tmp_path / "b", "qseries",
                            lambda doc: doc["f"]["quotients"][0]["exponents"].__setitem__("5", 1)))
    with pytest.raises(FixtureError):
        load_remark4(broken(tmp_path / "c", "remark4", lambda doc: doc["rows"][0].__setitem__("d", "x")))
    with pytest.raises(FixtureError):
        load_remark1(broken(tmp_path / "d", "remark1",
                            lambda doc: doc["identities"][0]["lhs"]["terms"][0].__setitem__("bogus", 1)))


def test_missing_and_invalid_files(tmp_path):
    with pytest.raises(FixtureError, match="file not found"):
        load_theorem2(tmp_path)
    (tmp_path / "theorem2.json").write_text("{not json")
    with pytest.raises(FixtureError, match="invalid JSON"):
        load_theorem2(tmp_path)


def test_env_var(tmp_path, monkeypatch):
    doc = load("theorem2")
    doc["rows"] = doc["rows"][:2]
    write_tree(tmp_path, "theorem2", doc)
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert len(load_theorem2()["rows"]) == 2
    assert len(load_theorem2(tmp_path)["rows"]) == 2


def test_fixture_error_becomes_fail_case(tmp_path):
    root = broken(tmp_path, "theorem2", lambda doc: doc["rows"][0].__setitem__("d", 0))
    reports = run_suite("theorem2", fixtures_path=str(root))
    assert [r.case_id for r in reports] == ["theorem2/fixtures"]
    assert reports[0].status == "FAIL"
    assert json.dumps(reports[0].to_dict())
