"""Concrete model families: GARCH mixture, mixture Kalman, logistic AR(1)."""
from .garch import (
    GarchConstantsReport,
    GarchSpec,
    garch_constants,
    garch_model,
    garch_potential,
    garch_truncated,
    garch_variance,
    simulate_garch,
)
from .kalman import (
    KalmanConstantsReport,
    KalmanSpec,
    kalman_constants,
    kalman_model,
    kalman_recursion,
    simulate_kalman,
)
from .logistic import (
    LogisticARSpec,
    XErrorDecomposition,
    lipschitz_tail,
    logistic_constants,
    logistic_model,
    simulate_logistic,
    x_filter_error_decomposition,
)

__all__ = [
    "GarchConstantsReport",
    "GarchSpec",
    "garch_constants",
    "garch_model",
    "garch_potential",
    "garch_truncated",
    "garch_variance",
    "simulate_garch",
    "KalmanConstantsReport",
    "KalmanSpec",
    "kalman_constants",
    "kalman_model",
    "kalman_recursion",
    "simulate_kalman",
    "LogisticARSpec",
    "XErrorDecomposition",
    "lipschitz_tail",
    "logistic_constants",
    "logistic_model",
    "simulate_logistic",
    "x_filter_error_decomposition",
]
