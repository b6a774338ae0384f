import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent / "oracles"))

from cases import CASES  # noqa: E402

from jetstress.scalars import PolyField  # noqa: E402


def case_poly(n, terms):
    return PolyField(n, {tuple(e): float(Fraction(c)) for e, c in terms.items()})


def case_array(n, raw):
    if isinstance(raw, dict):
        return case_poly(n, raw)
    return [case_array(n, s) for s in raw]


def case_bounds(case):
    return [[float(Fraction(lo)), float(Fraction(hi))] for lo, hi in case["bounds"]]


@pytest.fixture
def cases():
    return CASES


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
