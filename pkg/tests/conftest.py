import pytest

from isoeq.gf import field_make
from isoeq.linalg import AmbientSpace, span


def amb(p, d, e=1):
    return AmbientSpace(field_make(p, e), d)


def sp(a, *gens):
    return span(a, gens)


def e(a, i):
    """1-based standard basis vector, matching e1, e2, ... in the docs."""
    return a.unit(i - 1)


@pytest.fixture
def gf2():
    return field_make(2)


@pytest.fixture
def gf3():
    return field_make(3)


@pytest.fixture
def gf4():
    return field_make(2, 2)


@pytest.fixture
def gf5():
    return field_make(5)
