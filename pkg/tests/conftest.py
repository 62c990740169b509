import pytest

from mcgseq import build_manifold
from mcgseq.sequence import SpottedMarking
from mcgseq.textio import parse_spotted_marking

MSTAR_TEXT = """
type A pi1=Z/2 mcg=table[1,tau;1,tau|tau,1] act=tau:g1
summand 1 A
summand 2 A
handles 2
"""

K2L1_TEXT = """
type A pi1=Z/2 mcg=table[1,tau;1,tau|tau,1] act=tau:g1
summand 1 A
summand 2 A
handles 1
"""

TWO_TYPES_TEXT = """
type A pi1=Z/2 mcg=table[1,tau;1,tau|tau,1] act=tau:g1
type B pi1=Z/3 mcg=Z/1
summand 1 A
summand 2 A
summand 3 B
handles 1
"""

SPOTTED_TEXT = """
type V0 pi1=Z/2 mcg=table[1,tau;1,tau|tau,1] act=tau:g1
cap V0
spots 3
"""


@pytest.fixture(scope="session")
def mstar():
    """Reference manifold A # A # (S^2 x S^1)^2."""
    return build_manifold(MSTAR_TEXT)


@pytest.fixture(scope="session")
def k2l1():
    """A # A # S^2 x S^1: the small manifold of the worked examples."""
    return build_manifold(K2L1_TEXT)


@pytest.fixture(scope="session")
def mixed_types():
    """Two A-summands plus one B-summand and a handle."""
    return build_manifold(TWO_TYPES_TEXT)


@pytest.fixture(scope="session")
def spotted() -> SpottedMarking:
    return parse_spotted_marking(SPOTTED_TEXT)
