import pytest
from hypothesis import strategies as st

from residua.presets import conj9, inseparable_a1, nies_a2, spectra7, uniform
from residua.words import F, Fi, S, Si

LETTERS = st.sampled_from((F, Fi, S, Si))


def words(max_len=8):
    return st.lists(LETTERS, max_size=max_len).map(tuple)


@pytest.fixture(scope="session")
def uni():
    return uniform()


@pytest.fixture(scope="session")
def sp7():
    return spectra7()


@pytest.fixture(scope="session")
def c9():
    return conj9()


@pytest.fixture(scope="session")
def ins():
    return inseparable_a1()


@pytest.fixture(scope="session")
def nies():
    return nies_a2()


# one PASS/FAIL line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
