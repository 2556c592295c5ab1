import pytest

from hallcpx import ModuleCategory, a_n_quiver


@pytest.fixture(scope="session")
def a2_p2():
    return ModuleCategory(a_n_quiver(2), 2)


@pytest.fixture(scope="session")
def a2_p3():
    return ModuleCategory(a_n_quiver(2), 3)


@pytest.fixture(scope="session")
def a3_p2():
    return ModuleCategory(a_n_quiver(3), 2)
