"""Shared numeric helpers for the model families."""
from __future__ import annotations

import math

import numpy as np

SQRT_2PI = math.sqrt(2.0 * math.pi)


def norm_pdf(y, mean, var):
    """Gaussian density, scalar or vectorized over ``mean``/``var``."""
    return np.exp(-((y - mean) ** 2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)


def clamp_ge1(x: float) -> tuple[float, bool]:
    """Clamp an envelope constant to the unit floor; report whether it bit."""
    return (1.0, True) if x < 1.0 else (float(x), False)


def safe_exp(x: float) -> float:
    """exp saturating at +inf instead of raising (huge envelopes are legal)."""
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf
