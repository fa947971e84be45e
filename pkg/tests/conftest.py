import numpy as np
import pytest

from morphsample.elements import builtin
from morphsample.grid import BinaryImage, GreyImage, Sieve
from morphsample.sampling import FilterSpec


@pytest.fixture
def sieve2():
    return Sieve(spacing=(2, 2))


@pytest.fixture
def box3():
    return BinaryImage.centered_box(1)


@pytest.fixture
def flat3():
    return builtin("flat3")


@pytest.fixture
def k2():
    return builtin("k2")


@pytest.fixture
def b2():
    return builtin("b2")


@pytest.fixture
def flat_spec(flat3, sieve2):
    return FilterSpec.build(flat3, sieve2)


@pytest.fixture
def k2_spec(k2, sieve2):
    return FilterSpec.build(k2, sieve2)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def full_image(rng):
    """A 10x10 full-domain image whose values keep k2/b2 compositions clamp-free."""

    def make(low=40, high=100, shape=(10, 10), ceiling=255):
        return GreyImage(rng.integers(low, high + 1, size=shape), ceiling=ceiling)

    return make
