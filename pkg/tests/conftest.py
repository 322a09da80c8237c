import pytest

from ellsplit.corpus import load_entry
from ellsplit.curves import curve_37a1, curve_j0


@pytest.fixture(scope="session")
def e37():
    return curve_37a1()


@pytest.fixture(scope="session")
def gen_p(e37):
    return e37.point(0, 0)


@pytest.fixture(scope="session")
def ej0():
    return curve_j0()


@pytest.fixture(scope="session")
def envelope():
    return load_entry("envelope").variety


@pytest.fixture(scope="session")
def cxe_fibration():
    return load_entry("CxE").fibration
