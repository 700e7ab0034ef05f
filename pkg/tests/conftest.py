import pytest

from formsieve.forms import BinaryForm
from formsieve.sieve_core import WeightFunction


@pytest.fixture(scope="session")
def cubic():
    """x^3 + 2y^3, the canonical admissible cubic."""
    return BinaryForm([1, 0, 0, 2])


@pytest.fixture(scope="session")
def square():
    """x^2 + y^2."""
    return BinaryForm([1, 0, 1])


@pytest.fixture(scope="session")
def W():
    return WeightFunction()
