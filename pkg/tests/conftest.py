import numpy as np
import pytest
from freeboundary.core import FluidParams, PRESETS


@pytest.fixture
def rt():
    # rho1 = 1, rho2 = 2, tau* = 1
    return PRESETS["rt"]


@pytest.fixture
def stable():
    return PRESETS["stable"]


@pytest.fixture
def unit():
    return FluidParams(rho1=1.0, rho2=1.0, mu1=1.0, mu2=1.0, sigma=1.0, gamma_a=1.0)


@pytest.fixture
def half_viscosity():
    return FluidParams(rho1=1.0, rho2=1.0, mu1=0.5, mu2=0.5, sigma=1.0, gamma_a=0.0)


@pytest.fixture
def gen():
    return np.random.default_rng(20261017)
