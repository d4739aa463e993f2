import pytest

from crweier.models import model
from crweier.sampling import SampleSet


@pytest.fixture(scope="session")
def heisenberg():
    return model("heisenberg")


@pytest.fixture(scope="session")
def sphere():
    return model("sphere")


@pytest.fixture(scope="session")
def cylinder():
    return model("cylinder")


@pytest.fixture(scope="session")
def sphere_samples(sphere):
    return SampleSet(sphere.chart, 12, seed=1, order=5)


@pytest.fixture(scope="session")
def cylinder_samples(cylinder):
    return SampleSet(cylinder.chart, 12, seed=1, order=5)


@pytest.fixture(scope="session")
def heisenberg_samples(heisenberg):
    return SampleSet(heisenberg.chart, 12, seed=1, order=5)
