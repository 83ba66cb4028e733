import numpy as np
import pytest

from fkpath import MixingKernel, RandomSource
from fkpath.models import (
    GarchSpec,
    LogisticARSpec,
    garch_model,
    logistic_model,
    simulate_garch,
    simulate_logistic,
)

TRANSITION_2 = np.array([[0.7, 0.3], [0.4, 0.6]])


@pytest.fixture(scope="session")
def garch2():
    """2-state beta=0 GARCH with the stable mixture ratio, simulated data."""
    alpha = np.array([1.0, 1.05])
    gamma = np.array([0.05, 0.1])
    beta = np.zeros(2)
    kernel = MixingKernel(TRANSITION_2, 2)
    _, y, _ = simulate_garch(alpha, beta, gamma, kernel, 10, RandomSource(42, 0))
    spec = GarchSpec(alpha, beta, gamma, y)
    return spec, kernel, garch_model(spec, kernel)


@pytest.fixture(scope="session")
def logistic3():
    """3-atom logistic AR model with simulated observations."""
    rho, l = 0.5, 0.8
    support = [-l, 0.0, l]
    _, _, y = simulate_logistic(rho, l, support, None, 10, RandomSource(5, 0))
    spec = LogisticARSpec(rho, l, y)
    return spec, logistic_model(spec)
