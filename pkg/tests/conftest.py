import pytest

from gkmchow import catalog
from gkmchow.polyalg import Polynomial


def poly(nvars, terms):
    """Shorthand: poly(2, {(1, 0): 1, (0, 1): -1}) is x1 - x2."""
    return Polynomial(nvars, terms)


def t(k=1, c=1):
    """c * x1^k in one variable."""
    return Polynomial(1, {(k,): c})


@pytest.fixture(scope="session")
def p1():
    return catalog.projective_space(1).graph


@pytest.fixture(scope="session")
def p2():
    return catalog.projective_space(2).graph


@pytest.fixture(scope="session")
def hirz():
    return catalog.hirzebruch(1).graph


@pytest.fixture(scope="session")
def wplane():
    return catalog.weighted_plane(2).graph


@pytest.fixture(scope="session")
def entries():
    return catalog.standard_entries()
