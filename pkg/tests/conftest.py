import pytest

from semlab.languages import INFINITY, make_arith, make_leq, make_leq_in
from semlab.oracle import EQUALITY, AssertionOracle


@pytest.fixture
def arith():
    """The transparent sum language."""
    return make_arith()


@pytest.fixture
def leq_language():
    """Fixture that builds L_m languages.

    Usage:
        def test_something(leq_language):
            lang = leq_language(5)        # L_5
            unbounded = leq_language()    # L_inf
    """

    def _make(m=INFINITY):
        return make_leq(m)

    return _make


@pytest.fixture
def leq_in_language():
    """Fixture that builds ``n in S`` languages from an iterable of naturals."""

    def _make(members=(2, 3)):
        return make_leq_in(members)

    return _make


@pytest.fixture
def oracle_for():
    """Fixture returning a factory ``oracle_for(language, relation=EQUALITY, budget=None)``."""

    def _make(language, relation=EQUALITY, budget=None):
        return AssertionOracle(language, relation, budget=budget)

    return _make
