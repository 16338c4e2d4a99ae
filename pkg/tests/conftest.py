from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from latops.lattice import q_lattice, quadratic_lattice  # noqa: E402

LATTICES = {
    "x=s": quadratic_lattice(0, 1, 0),
    "x=s^2": quadratic_lattice(1, 0, 0),
    "q p=2": q_lattice(2, 0, 1, 0),
    "q p=3/2": q_lattice(Fraction(3, 2), Fraction(1, 2), Fraction(1, 2), 0),
}

ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture(params=list(LATTICES), ids=list(LATTICES))
def lattice(request):
    return LATTICES[request.param]


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    num = props.get("criterion")
    if num is None:
        return
    title = props.get("title", "")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "pass" if report.outcome == "passed" else "FAIL"
        if ACCEPTANCE.get(num, ("pass",))[0] == "pass":
            ACCEPTANCE[num] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title}")
