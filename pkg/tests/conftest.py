import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

CANONICAL = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]

_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    prev_ok = _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, prev_ok and not rep.failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title}")


@st.composite
def atom_weights(draw, k, positive=True, bound=20):
    """k positive rational weights summing to 1."""
    lo = 1 if positive else 0
    raw = draw(st.lists(st.integers(lo, bound), min_size=k, max_size=k).filter(lambda xs: sum(xs) > 0))
    total = sum(raw)
    return [Fraction(x, total) for x in raw]
