import numpy as np
import pytest

from multistable.mollifier import build_mollifier
from multistable.quadrature import QuadratureConfig


@pytest.fixture(scope="session")
def moll125():
    return build_mollifier(1.25)


@pytest.fixture(scope="session")
def moll15():
    return build_mollifier(1.5)


@pytest.fixture(scope="session")
def moll2():
    return build_mollifier(2.0)


@pytest.fixture(scope="session")
def cfg10():
    return QuadratureConfig(abs_tol=1e-10)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20260811))
