import numpy as np
import pytest

from ellgenus import JacobiSine, Lattice


@pytest.fixture(scope="session")
def square_lattice():
    return Lattice(1.0, 1j)


@pytest.fixture(scope="session")
def generic_lattice():
    return Lattice(1.0, 0.3 + 1.1j)


@pytest.fixture(scope="session")
def square_sine(square_lattice):
    return JacobiSine(square_lattice)


@pytest.fixture(scope="session")
def generic_sine(generic_lattice):
    return JacobiSine(generic_lattice)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
