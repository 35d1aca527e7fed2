import pytest

from cmperiods.numerics import PrecisionContext

# criterion number -> (ok, summary); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(40)


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(30)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 13):
        ok, text = ACCEPTANCE.get(number, (False, "did not complete"))
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}")
