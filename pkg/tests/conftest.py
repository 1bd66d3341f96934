from fractions import Fraction

import pytest

from waldperiods.characters import enumerate_characters
from waldperiods.induction import classify
from waldperiods.padic import FieldDescriptor, QuadExtDescriptor


@pytest.fixture(scope="session")
def F3():
    return FieldDescriptor(3, 14)


@pytest.fixture(scope="session")
def L3(F3):
    return QuadExtDescriptor(F3, Fraction(3))


@pytest.fixture(scope="session")
def Lm3(F3):
    return QuadExtDescriptor(F3, Fraction(-3))


@pytest.fixture(scope="session")
def L5():
    return QuadExtDescriptor(FieldDescriptor(5, 14), Fraction(10))


@pytest.fixture(scope="session")
def thetas3(L3):
    """Characters of conductor 4 of Q_3(sqrt 3)^x trivial on Q_3^x."""
    return [t for t in enumerate_characters(L3, 4, trivial_on_F=True) if t.conductor == 4]


@pytest.fixture(scope="session")
def data3(thetas3):
    return classify(thetas3[0])


ACCEPTANCE_LINES = {}


def record_acceptance(number: int, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
