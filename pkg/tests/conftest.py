from fractions import Fraction

import pytest

from quasimeasure import (
    Coat,
    GroundSet,
    TrueMeasure,
    canonical_negative_instance,
    induce,
    power_set_coat,
)


@pytest.fixture
def ground4() -> GroundSet:
    return GroundSet(("1", "2", "3", "4"))


@pytest.fixture
def ground3() -> GroundSet:
    return GroundSet(("1", "2", "3"))


@pytest.fixture
def negative_instance():
    """Uniform weights on {1,2,3,4}, coat {empty, omega, {1,2}, {2,3}}."""
    return canonical_negative_instance()


@pytest.fixture
def power_set_instance(ground3):
    """All 8 subsets of {1,2,3} with atom weights 1/2, 1/4, 1/4."""
    tm = TrueMeasure.from_weights(ground3, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    coat = power_set_coat(ground3)
    return tm, coat, induce(tm, coat)


@pytest.fixture
def trivial_instance(ground4):
    tm = TrueMeasure.uniform(ground4)
    coat = Coat(ground4, (ground4.empty(), ground4.full()))
    return tm, coat, induce(tm, coat)
