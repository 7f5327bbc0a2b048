"""Shared test fixtures for specred tests."""
import numpy as np
import pytest

from specred.algebra.fields import ExactField, FloatField
from specred.config import SolverConfig
from specred.spectral.graphs import cycle, hypercube, path
from specred.spectral.labeled import LabeledMatrix


@pytest.fixture
def exact_config():
    return SolverConfig(backend="exact")


@pytest.fixture
def float_config():
    return SolverConfig(backend="float")


@pytest.fixture
def exact_field():
    return ExactField()


@pytest.fixture
def float_field():
    return FloatField()


@pytest.fixture
def k2():
    return path(2)


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def p4():
    return path(4)


@pytest.fixture
def c4():
    return cycle(4)


@pytest.fixture
def q4():
    return hypercube(4)


@pytest.fixture
def kite():
    """Four vertices; {1} | {2, 3} | {4} is equitable with divisor [[0,2,0],[1,1,1],[0,2,0]]."""
    return LabeledMatrix.of(
        np.array(
            [
                [0, 1, 1, 0],
                [1, 0, 1, 1],
                [1, 1, 0, 1],
                [0, 1, 1, 0],
            ]
        )
    )


@pytest.fixture
def rng():
    return np.random.default_rng(7)
