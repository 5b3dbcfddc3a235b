from fractions import Fraction
from pathlib import Path

import pytest

from stieltjes import MonotoneFn, PiecewiseFn

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fix1_M():
    return MonotoneFn.continuous([0, 1, 2, 3], [0, 1, 1, 2])


def fix1_N(at_one=1.5):
    """N(y) = y below 1, y + 1 above 1, N(1) = ``at_one``."""
    return MonotoneFn([(0, 0, 0, 0), (1, 1, at_one, 2), (2, 3, 3, 3)])


def fix2_M():
    return MonotoneFn([(0, 0, 0, 0), (1, 1, 1.25, 1.5), (2, 2.5, 2.5, 2.5)])


@pytest.fixture
def fix1():
    return fix1_M(), fix1_N(), PiecewiseFn.identity(0, 3)


@pytest.fixture
def fix1r():
    return fix1_M(), fix1_N(2), PiecewiseFn.identity(0, 3)


@pytest.fixture
def fix1l():
    return fix1_M(), fix1_N(1), PiecewiseFn.identity(0, 3)


@pytest.fixture
def fix2():
    return fix2_M(), MonotoneFn.identity(0, 2.5), PiecewiseFn.identity(0, 2)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def F(v):
    return Fraction(v)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Call ``criterion(n, text)`` before the assertions; the outcome is filled
    in from the test result and printed in the terminal summary.
    """
    entry = {}

    def note(number, text):
        entry.update(number=number, text=text)
        print(f"[criterion {number}] {text}")

    yield note
    if entry:
        rep = getattr(request.node, "_call_report", None)
        ok = rep is not None and rep.passed
        _ACCEPTANCE_LINES.append(
            f"criterion {entry['number']}: {'PASS' if ok else 'FAIL'}  {entry['text']}"
        )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item._call_report = rep


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
