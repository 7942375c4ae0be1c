import pytest

from affine_brylinski.cartan import build_root_system


@pytest.fixture(scope="session")
def A1():
    return build_root_system("A", 1)


@pytest.fixture(scope="session")
def A2():
    return build_root_system("A", 2)


@pytest.fixture(scope="session")
def A3():
    return build_root_system("A", 3)


@pytest.fixture(scope="session")
def D4():
    return build_root_system("D", 4)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
