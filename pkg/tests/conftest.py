import pytest

from ffincidence import mk_field


@pytest.fixture(scope="session")
def gf3():
    return mk_field(3)


@pytest.fixture(scope="session")
def gf7():
    return mk_field(7)


@pytest.fixture(scope="session")
def gf9():
    return mk_field(3, 2)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
