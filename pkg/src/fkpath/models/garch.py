"""
Regime-switching GARCH observation model with path-dependent potentials.

Conditional on the regime path, observations follow
``Y_n = sigma_n * Z_n`` with the recursive variance
``sigma_n^2 = alpha(l_n) + beta(l_n) Y_n^2 + gamma(l_n) sigma_{n-1}^2`` and
``sigma_0^2 = alpha(l_0) / (1 - gamma(l_0))``.  The potential is the Gaussian
density of ``y_n`` at that variance; the truncated potential replaces the
path prefix with a fixed padding regime ``z``.

Observations are stored 1-based: ``y[0]`` is an unused placeholder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..bounds import HypothesisConstants
from ..fk_core import FKModel, MixingKernel, PathPotential
from ..measures import RandomSource
from .common import clamp_ge1, norm_pdf


@dataclass(frozen=True)
class GarchSpec:
    """Regime coefficient tables and the observation record.

    ``alpha``, ``beta``, ``gamma`` are per-regime arrays; ``y`` holds the
    observations with ``y[0]`` unused.  ``z`` is the padding regime used by
    the truncated potential (default: the regime whose stationary variance
    ``alpha/(1-gamma)`` is closest to the midpoint of the variance box, so
    runs are reproducible without an explicit choice).
    """

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    y: np.ndarray
    z: int | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "y"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.alpha.shape == self.beta.shape == self.gamma.shape):
            raise ValueError("alpha, beta, gamma must have equal shapes")
        if np.any(self.alpha <= 0.0):
            raise ValueError("alpha must be strictly positive")
        if np.any(self.beta < 0.0) or np.any(self.beta >= 1.0):
            raise ValueError("beta must lie in [0, 1)")
        if np.any(self.gamma < 0.0) or np.any(self.gamma >= 1.0):
            raise ValueError("gamma must lie in [0, 1)")
        if self.z is None:
            mid = 0.5 * (self.sigma_min2 + self.sigma_max2)
            stationary = self.alpha / (1.0 - self.gamma)
            object.__setattr__(self, "z", int(np.argmin(np.abs(stationary - mid))))

    @property
    def n_states(self) -> int:
        return self.alpha.shape[0]

    @property
    def horizon(self) -> int:
        return self.y.shape[0] - 1

    @property
    def sigma_min2(self) -> float:
        return float(np.min(self.alpha) / (1.0 - np.min(self.gamma)))

    @property
    def sigma_max2(self) -> float:
        return float(np.max(self.alpha) / (1.0 - np.max(self.gamma)))


def garch_variance(spec: GarchSpec, path) -> float:
    """Exact recursion value sigma_n^2 along a regime path (1-based y)."""
    if len(path) == 0:
        raise ValueError("path must be nonempty")
    s = path[0]
    var = spec.alpha[s] / (1.0 - spec.gamma[s])
    for n in range(1, len(path)):
        s = path[n]
        var = spec.alpha[s] + spec.beta[s] * spec.y[n] ** 2 + spec.gamma[s] * var
    return float(var)


def garch_potential(spec: GarchSpec, n: int, path) -> float:
    """Gaussian density of y_n under the recursion variance of the path."""
    return float(norm_pdf(spec.y[n], 0.0, garch_variance(spec, path)))


def garch_truncated(spec: GarchSpec, n: int, p: int, segment) -> float:
    """Truncated potential: the path prefix is replaced by padding regime z."""
    if p > n:
        return garch_potential(spec, n, segment)
    padded = (spec.z,) * (n + 1 - p) + tuple(segment)
    return garch_potential(spec, n, padded)


class GarchPotential(PathPotential):
    """Vectorized potential; particle sufficient statistic is sigma^2."""

    def __init__(self, spec: GarchSpec):
        self.spec = spec
        # Variance after m steps spent entirely in the padding regime;
        # shared by every truncated evaluation with the same prefix length.
        self._prefix = [float(spec.alpha[spec.z] / (1.0 - spec.gamma[spec.z]))]

    def _prefix_var(self, m: int) -> float:
        spec = self.spec
        z = spec.z
        while len(self._prefix) <= m:
            k = len(self._prefix)
            var = spec.alpha[z] + spec.beta[z] * spec.y[k] ** 2 + spec.gamma[z] * self._prefix[-1]
            self._prefix.append(float(var))
        return self._prefix[m]

    def eval(self, n: int, path: tuple) -> float:
        return garch_potential(self.spec, n, path)

    def truncated_eval_segment(self, n: int, p: int, segment: tuple) -> float:
        spec = self.spec
        var = self._prefix_var(n - p)
        for j, s in enumerate(segment):
            t = n - p + 1 + j
            var = spec.alpha[s] + spec.beta[s] * spec.y[t] ** 2 + spec.gamma[s] * var
        return float(norm_pdf(spec.y[n], 0.0, var))

    def stats_init(self, states: np.ndarray) -> np.ndarray:
        spec = self.spec
        return spec.alpha[states] / (1.0 - spec.gamma[states])

    def step_full(self, n: int, stats: np.ndarray, new_states: np.ndarray):
        spec = self.spec
        var = (
            spec.alpha[new_states]
            + spec.beta[new_states] * spec.y[n] ** 2
            + spec.gamma[new_states] * stats
        )
        return var, norm_pdf(spec.y[n], 0.0, var)

    def truncated_weights(self, n: int, p: int, segments: np.ndarray) -> np.ndarray:
        spec = self.spec
        L = segments.shape[1]
        if L == n + 1:
            first = segments[:, 0]
            var = spec.alpha[first] / (1.0 - spec.gamma[first])
            start = 1
        else:
            var = np.full(segments.shape[0], self._prefix_var(n - L))
            start = 0
        for j in range(start, L):
            t = n - L + 1 + j
            s = segments[:, j]
            var = spec.alpha[s] + spec.beta[s] * spec.y[t] ** 2 + spec.gamma[s] * var
        return norm_pdf(spec.y[n], 0.0, var)


def garch_model(spec: GarchSpec, kernel: MixingKernel, zeta=None, min_p: int = 1) -> FKModel:
    """Assemble the Feynman-Kac model for a GARCH spec and regime kernel."""
    if zeta is None:
        zeta = np.full(spec.n_states, 1.0 / spec.n_states)
    return FKModel(zeta=zeta, kernel=kernel, potential=GarchPotential(spec), min_p=min_p)


@dataclass(frozen=True)
class GarchConstantsReport:
    """Stability constants and feasibility flags for a GARCH spec."""

    mode: str
    mixture_ratio: float  # iota (beta = 0) or vartheta (general)
    c: float
    tau: float
    phi_bar: float  # expectation-based global phi (nan when undefined)
    sigma_min2: float
    sigma_max2: float
    q: int
    feasible_mixture: bool  # iota < 2 (resp. vartheta < 2)
    feasible_tau_c3: bool
    clamped: bool  # some a_n or b_n hit the unit floor


def _general_sigma_bounds(spec: GarchSpec):
    gamma = float(spec.gamma[0])
    amin, amax = float(np.min(spec.alpha)), float(np.max(spec.alpha))
    bmin, bmax = float(np.min(spec.beta)), float(np.max(spec.beta))
    horizon = spec.horizon
    smin = np.empty(horizon + 1)
    smax = np.empty(horizon + 1)
    smin[0] = amin / (1.0 - gamma)
    smax[0] = amax / (1.0 - gamma)
    for n in range(1, horizon + 1):
        ks = np.arange(n)
        y2 = spec.y[n - ks] ** 2
        smin[n] = gamma**n / (1.0 - gamma) * amin + np.sum((amin + bmin * y2) * gamma**ks)
        smax[n] = gamma**n / (1.0 - gamma) * amax + np.sum((amax + bmax * y2) * gamma**ks)
    return smin, smax


def garch_constants(
    spec: GarchSpec, mode: str = "beta_zero", q: int = 1, eps: float = 1.0
):
    """Per-step envelope constants plus the stability report.

    ``q`` is the free depth parameter in the phi formula (any q at most the
    truncation depth is valid; q equal to the depth gives the tightest
    bound).  ``eps`` is the regime kernel's mixing coefficient, carried into
    the returned :class:`HypothesisConstants`.
    """
    horizon = spec.horizon
    tau_list = {"beta_zero": float(np.max(spec.gamma))}
    if mode == "beta_zero":
        if np.any(spec.beta != 0.0):
            raise ValueError("beta_zero mode requires beta identically zero")
        smin = np.full(horizon + 1, spec.sigma_min2)
        smax = np.full(horizon + 1, spec.sigma_max2)
        ratio = spec.sigma_max2 / spec.sigma_min2  # iota
        tau = tau_list["beta_zero"]
    elif mode == "general":
        if not np.allclose(spec.gamma, spec.gamma[0]):
            raise ValueError("general mode requires a constant gamma")
        smin, smax = _general_sigma_bounds(spec)
        bmin, bmax = float(np.min(spec.beta)), float(np.max(spec.beta))
        beta_ratio = 0.0 if bmax == 0.0 else (bmax / bmin if bmin > 0.0 else math.inf)
        ratio = max(float(np.max(spec.alpha) / np.min(spec.alpha)), beta_ratio)  # vartheta
        tau = float(spec.gamma[0])
    else:
        raise ValueError(f"unknown mode {mode!r}")

    smin_glob = float(np.min(smin))
    smax_glob = float(np.max(smax))
    a = np.ones(horizon + 1)
    b = np.ones(horizon + 1)
    phi = np.ones(horizon + 1)
    clamped = False
    tq = tau**q
    for n in range(1, horizon + 1):
        y2 = spec.y[n] ** 2
        a[n], ca = clamp_ge1(math.sqrt(2.0 * math.pi * smax[n]) * math.exp(y2 / (2.0 * smin[n])))
        b[n], cb = clamp_ge1(math.exp(-y2 / (2.0 * smax[n])) / math.sqrt(2.0 * math.pi * smin[n]))
        clamped = clamped or ca or cb
        phi[n] = (math.exp(tq * smax_glob * (smin_glob + y2) / smin_glob**2) - 1.0) / tq

    c = (2.0 / ratio - 1.0) ** -0.5 if ratio < 2.0 else math.nan
    # Expected phi over the observation law, defined while 2 tau^q ratio^2 < 1.
    if 2.0 * tq * ratio**2 < 1.0:
        phi_bar = (math.exp(tq * ratio) / math.sqrt(1.0 - 2.0 * tq * ratio**2) - 1.0) / tq
    else:
        phi_bar = math.nan
    consts = HypothesisConstants(a, b, phi, np.full(horizon + 1, eps), tau)
    report = GarchConstantsReport(
        mode=mode,
        mixture_ratio=ratio,
        c=c,
        tau=tau,
        phi_bar=phi_bar,
        sigma_min2=smin_glob,
        sigma_max2=smax_glob,
        q=q,
        feasible_mixture=ratio < 2.0,
        feasible_tau_c3=(not math.isnan(c)) and tau * c**3 < 1.0,
        clamped=clamped,
    )
    return consts, report


def simulate_garch(
    spec_alpha,
    spec_beta,
    spec_gamma,
    kernel: MixingKernel,
    horizon: int,
    rng: RandomSource,
    zeta=None,
):
    """Draw a regime path and observations; returns (states, y, rejections).

    For beta > 0 the displayed recursion makes ``y_n`` and ``sigma_n^2``
    simultaneous; solving ``y^2 (1 - beta z^2) = (alpha + gamma s^2) z^2``
    requires ``beta z^2 < 1``, so innovations violating that are redrawn and
    counted.
    """
    alpha = np.asarray(spec_alpha, dtype=float)
    beta = np.asarray(spec_beta, dtype=float)
    gamma = np.asarray(spec_gamma, dtype=float)
    n_states = alpha.shape[0]
    if zeta is None:
        zeta = np.full(n_states, 1.0 / n_states)
    gen = rng.generator
    states = np.empty(horizon + 1, dtype=np.int64)
    states[0] = gen.choice(n_states, p=np.asarray(zeta) / np.sum(zeta))
    for n in range(1, horizon + 1):
        row = kernel.matrix(n)[states[n - 1]]
        states[n] = gen.choice(n_states, p=row / np.sum(row))
    y = np.full(horizon + 1, np.nan)
    s = int(states[0])
    var = alpha[s] / (1.0 - gamma[s])
    rejections = 0
    for n in range(1, horizon + 1):
        s = int(states[n])
        while True:
            z = gen.standard_normal()
            if beta[s] * z**2 < 1.0:
                break
            rejections += 1
        y2 = (alpha[s] + gamma[s] * var) * z**2 / (1.0 - beta[s] * z**2)
        y[n] = math.copysign(math.sqrt(y2), z)
        var = alpha[s] + beta[s] * y2 + gamma[s] * var
    return states, y, rejections
