"""
Mixture Kalman model: univariate linear-Gaussian state conditioned on a
latent regime chain, with the Gaussian state integrated out exactly.

Conditional on regimes, ``X_n = h(l_n) X_{n-1} + sqrt(w(l_n)) W_n`` and
``Y_n = X_n + sqrt(v(l_n)) V_n`` with ``X_0 = 0``.  The potential is the
one-step predictive density of ``y_n`` computed by the scalar Kalman
recursion, which makes it depend on the whole regime path through the
running filter pair ``(m_n, c_n)``.

The truncated potential replaces the regime prefix with a fixed padding
regime ``z`` and restarts the recursion at ``m = c = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bounds import HypothesisConstants
from ..fk_core import FKModel, MixingKernel, PathPotential
from ..measures import RandomSource
from .common import clamp_ge1, norm_pdf, safe_exp


@dataclass(frozen=True)
class KalmanSpec:
    """Per-regime coefficients, observations, and the observation cap.

    ``y[0]`` is an unused placeholder.  ``c_y`` is the bound assumed on
    ``|y_n|`` by the stability constants; simulation enforces it by
    rejection.  ``z`` is the padding regime for the truncated potential.
    """

    h: np.ndarray
    v: np.ndarray
    w: np.ndarray
    y: np.ndarray
    c_y: float = 10.0
    z: int = 0

    def __post_init__(self):
        for name in ("h", "v", "w", "y"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.h.shape == self.v.shape == self.w.shape):
            raise ValueError("h, v, w must have equal shapes")
        if np.any(np.abs(self.h) >= 1.0):
            raise ValueError("|h| must be < 1")
        if np.any(self.v <= 0.0) or np.any(self.w <= 0.0):
            raise ValueError("v and w must be strictly positive")

    @property
    def n_states(self) -> int:
        return self.h.shape[0]

    @property
    def horizon(self) -> int:
        return self.y.shape[0] - 1

    @property
    def h_bar(self) -> float:
        return float(np.max(np.abs(self.h)))

    @property
    def bounds(self):
        return (
            float(np.min(self.v)),
            float(np.max(self.v)),
            float(np.min(self.w)),
            float(np.max(self.w)),
        )


def kalman_recursion(spec: KalmanSpec, path):
    """Run the scalar Kalman recursion along a regime path.

    Returns one ``(mu_n, sigma2_n, a_n, m_n, c_n)`` tuple per step
    n = 1..len(path)-1, starting from ``m_0 = c_0 = 0``.
    """
    m, c = 0.0, 0.0
    out = []
    for n in range(1, len(path)):
        s = path[n]
        h, v, w = spec.h[s], spec.v[s], spec.w[s]
        mu = h * m
        sig2 = h**2 * c + v + w
        a = (h**2 * c + w) / sig2
        m = h * m + a * (spec.y[n] - mu)
        c = h**2 * c + w - a**2 * sig2
        out.append((float(mu), float(sig2), float(a), float(m), float(c)))
    return out


class KalmanPotential(PathPotential):
    """Predictive-density potential; particle statistics are (m, c)."""

    def __init__(self, spec: KalmanSpec):
        self.spec = spec
        self._prefix = [(0.0, 0.0)]  # (m, c) after k steps in the padding regime

    def _prefix_mc(self, k: int):
        spec = self.spec
        z = spec.z
        h, v, w = spec.h[z], spec.v[z], spec.w[z]
        while len(self._prefix) <= k:
            n = len(self._prefix)
            m, c = self._prefix[-1]
            sig2 = h**2 * c + v + w
            a = (h**2 * c + w) / sig2
            m_new = h * m + a * (spec.y[n] - h * m)
            c_new = h**2 * c + w - a**2 * sig2
            self._prefix.append((float(m_new), float(c_new)))
        return self._prefix[k]

    def eval(self, n: int, path: tuple) -> float:
        mu, sig2, _, _, _ = kalman_recursion(self.spec, path)[-1]
        return float(norm_pdf(self.spec.y[n], mu, sig2))

    def truncated_eval_segment(self, n: int, p: int, segment: tuple) -> float:
        spec = self.spec
        m, c = self._prefix_mc(n - p)
        for j, s in enumerate(segment):
            t = n - p + 1 + j
            h, v, w = spec.h[s], spec.v[s], spec.w[s]
            mu = h * m
            sig2 = h**2 * c + v + w
            a = (h**2 * c + w) / sig2
            m = h * m + a * (spec.y[t] - mu)
            c = h**2 * c + w - a**2 * sig2
        return float(norm_pdf(spec.y[n], mu, sig2))

    def stats_init(self, states: np.ndarray) -> np.ndarray:
        return np.zeros((states.shape[0], 2))

    def step_full(self, n: int, stats: np.ndarray, new_states: np.ndarray):
        spec = self.spec
        h = spec.h[new_states]
        v = spec.v[new_states]
        w = spec.w[new_states]
        m, c = stats[:, 0], stats[:, 1]
        mu = h * m
        sig2 = h**2 * c + v + w
        a = (h**2 * c + w) / sig2
        new = np.empty_like(stats)
        new[:, 0] = h * m + a * (spec.y[n] - mu)
        new[:, 1] = h**2 * c + w - a**2 * sig2
        return new, norm_pdf(spec.y[n], mu, sig2)

    def truncated_weights(self, n: int, p: int, segments: np.ndarray) -> np.ndarray:
        spec = self.spec
        L = segments.shape[1]
        if L == n + 1:
            m = np.zeros(segments.shape[0])
            c = np.zeros(segments.shape[0])
            start = 1
        else:
            m0, c0 = self._prefix_mc(n - L)
            m = np.full(segments.shape[0], m0)
            c = np.full(segments.shape[0], c0)
            start = 0
        mu = np.zeros(segments.shape[0])
        sig2 = np.full(segments.shape[0], spec.v[segments[:, 0]] + spec.w[segments[:, 0]])
        for j in range(start, L):
            t = n - L + 1 + j
            s = segments[:, j]
            h, v, w = spec.h[s], spec.v[s], spec.w[s]
            mu = h * m
            sig2 = h**2 * c + v + w
            a = (h**2 * c + w) / sig2
            m = h * m + a * (spec.y[t] - mu)
            c = h**2 * c + w - a**2 * sig2
        return norm_pdf(spec.y[n], mu, sig2)


def kalman_model(spec: KalmanSpec, kernel: MixingKernel, zeta=None, min_p: int = 1) -> FKModel:
    if zeta is None:
        zeta = np.full(spec.n_states, 1.0 / spec.n_states)
    return FKModel(zeta=zeta, kernel=kernel, potential=KalmanPotential(spec), min_p=min_p)


@dataclass(frozen=True)
class KalmanConstantsReport:
    """Contraction and envelope constants for the mixture Kalman model."""

    tau_sigma: float
    c_sigma: float
    c_mu: float
    a_bar: float
    a_tilde: float
    tau: float
    c: float
    phi: float
    sigma_lo2: float
    sigma_hi2: float
    feasible_tau_c3: bool
    clamped: bool


def _c_mu_majorant(spec: KalmanSpec, tau_sigma: float, c_sigma: float, sigma_lo2: float) -> float:
    """Smallest computable prefactor with |mu_n - mu_n'| <= C_mu M_{n-1} tau^p.

    Evaluates the proof's p-dependent majorant directly and takes its
    supremum over depths (the closed-form geometric-sum shortcut diverges
    when h_bar >= tau_sigma, so the supremum is taken numerically).
    """
    hb = spec.h_bar
    if hb == 0.0:
        return 0.0
    _, v_hi, _, _ = spec.bounds
    tau = max(hb, tau_sigma)
    best = 0.0
    inv = 1.0 / tau_sigma
    for p in range(1, 512):
        # tau_sigma^{p-1} sum_i hb^i (tau_sigma^{-i} - 1) / (inv - 1), with
        # the prefactor folded into the sum to keep every term in range
        series = sum(
            hb**i * (tau_sigma ** (p - 1 - i) - tau_sigma ** (p - 1)) / (inv - 1.0)
            for i in range(1, p + 1)
        )
        bracket = v_hi * c_sigma / sigma_lo2**2 * series + 2.0 * hb ** (p + 1)
        best = max(best, bracket / tau**p)
    return best


def kalman_constants(spec: KalmanSpec, eps: float = 1.0):
    """Envelope constants and contraction rates from the coefficient bounds.

    Assumes ``|y_n| <= c_y``; the returned phi and c are the deterministic
    time-uniform constants.  ``eps`` is the regime kernel's mixing
    coefficient, carried into the HypothesisConstants.
    """
    v_lo, v_hi, w_lo, w_hi = spec.bounds
    hb = spec.h_bar
    tau_sigma = 1.0 / (1.0 + w_lo / v_hi + 2.0 * math.sqrt(w_lo / v_hi + (w_lo / v_hi) ** 2))
    c_sigma = hb**2 * v_hi / tau_sigma
    sigma_lo2 = v_lo + w_lo
    sigma_hi2 = (hb**2 + 1.0) * v_hi + w_hi
    a_bar = 1.0 - v_lo / (hb**2 * v_hi + w_hi + v_lo)
    a_tilde = v_hi / (v_hi + w_lo)
    tau = max(hb, tau_sigma)
    c_mu = _c_mu_majorant(spec, tau_sigma, c_sigma, sigma_lo2)
    mu_gain = a_bar * hb / (1.0 - a_tilde * hb)
    cy2 = spec.c_y**2
    c = math.sqrt(sigma_hi2 / sigma_lo2) * safe_exp(cy2 / sigma_lo2 * (1.0 + mu_gain**2))
    phi = (
        safe_exp(
            c_sigma / (2.0 * sigma_lo2)
            + c_mu * cy2 / sigma_lo2 * (1.0 + mu_gain)
            + cy2 * c_sigma / sigma_lo2**2 * (1.0 + mu_gain**2)
        )
        - 1.0
    )
    # h identically 0 gives an exactly truncation-free potential; keep phi
    # strictly positive so the constants stay inside the hypothesis ranges.
    phi = max(phi, 1e-300)
    a_raw = math.sqrt(2.0 * math.pi * sigma_hi2) * safe_exp(cy2 / sigma_lo2 * (1.0 + mu_gain**2))
    b_raw = 1.0 / math.sqrt(2.0 * math.pi * sigma_lo2)
    a_val, ca = clamp_ge1(a_raw)
    b_val, cb = clamp_ge1(b_raw)
    horizon = max(spec.horizon, 1)
    consts = HypothesisConstants(
        np.full(horizon + 1, a_val),
        np.full(horizon + 1, b_val),
        np.full(horizon + 1, phi),
        np.full(horizon + 1, eps),
        tau,
    )
    report = KalmanConstantsReport(
        tau_sigma=tau_sigma,
        c_sigma=c_sigma,
        c_mu=c_mu,
        a_bar=a_bar,
        a_tilde=a_tilde,
        tau=tau,
        c=c,
        phi=phi,
        sigma_lo2=sigma_lo2,
        sigma_hi2=sigma_hi2,
        feasible_tau_c3=3.0 * math.log(c) < -math.log(tau),
        clamped=ca or cb,
    )
    return consts, report


def upsilon(spec: KalmanSpec, c: float, state: int) -> float:
    """Log-variance update map whose contraction rate is tau_sigma."""
    h, v, w = spec.h[state], spec.v[state], spec.w[state]
    return -math.log(1.0 / v + 1.0 / (h**2 * math.exp(c) + w))


def simulate_kalman(
    spec_h,
    spec_v,
    spec_w,
    kernel: MixingKernel,
    horizon: int,
    rng: RandomSource,
    c_y: float = math.inf,
    zeta=None,
):
    """Draw regimes, the latent AR state, and capped observations.

    Steps whose observation exceeds ``c_y`` in magnitude redraw both noise
    terms; returns (states, x, y, rejections).
    """
    h = np.asarray(spec_h, dtype=float)
    v = np.asarray(spec_v, dtype=float)
    w = np.asarray(spec_w, dtype=float)
    n_states = h.shape[0]
    if zeta is None:
        zeta = np.full(n_states, 1.0 / n_states)
    gen = rng.generator
    states = np.empty(horizon + 1, dtype=np.int64)
    states[0] = gen.choice(n_states, p=np.asarray(zeta) / np.sum(zeta))
    for n in range(1, horizon + 1):
        row = kernel.matrix(n)[states[n - 1]]
        states[n] = gen.choice(n_states, p=row / np.sum(row))
    x = np.zeros(horizon + 1)
    y = np.full(horizon + 1, np.nan)
    rejections = 0
    for n in range(1, horizon + 1):
        s = int(states[n])
        while True:
            x_new = h[s] * x[n - 1] + math.sqrt(w[s]) * gen.standard_normal()
            y_new = x_new + math.sqrt(v[s]) * gen.standard_normal()
            if abs(y_new) <= c_y:
                break
            rejections += 1
        x[n] = x_new
        y[n] = y_new
    return states, x, y, rejections
