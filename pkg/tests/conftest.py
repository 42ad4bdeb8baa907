import pytest

from sfvoa.fusion import fusion_table
from sfvoa.vertex import VertexEngine
from sfvoa.zhu import Zhu


@pytest.fixture(scope="session")
def engine():
    return VertexEngine(1)


@pytest.fixture(scope="session")
def engine2():
    return VertexEngine(2)


@pytest.fixture(scope="session")
def zhu():
    """Shared d = 1 Zhu context without a disk cache."""
    return Zhu(VertexEngine(1))


@pytest.fixture(scope="session")
def table1(zhu):
    return fusion_table(1, 6, zhu)


@pytest.fixture(scope="session")
def table2(zhu):
    return fusion_table(2, 6, zhu)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
