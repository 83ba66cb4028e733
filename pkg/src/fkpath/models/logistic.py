"""
Standard state-space model recast with path-dependent potentials: a linear
AR(1) state ``X_n = rho X_{n-1} + L_n`` driven by i.i.d. bounded innovations,
observed through a logistic link ``P(Y_n = 1) = 1 / (1 + exp(X_n))``.

Rewriting in terms of the innovation path gives
``Psi_n(l_{0:n}) = Psi^X(sum_k rho^k l_{n-k})``; the truncated potential
drops lags of order >= p (zero-padding the older innovations).  Because the
innovations are i.i.d., the chain mixes perfectly (eps = 1).

Filtering the AR state itself through Lipschitz test functions picks up a
deterministic geometric tail on top of the segment error; the decomposition
helper below reports both pieces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bounds import HypothesisConstants
from ..fk_core import FKModel, MixingKernel, PathPotential
from ..measures import RandomSource


@dataclass(frozen=True)
class LogisticARSpec:
    """AR coefficient, discretized innovation law, observations, test class.

    ``support``/``weights`` give the finite innovation law on [-l, l]
    (default the 3-atom law on {-l, 0, l}).  ``lipschitz`` is the constant K
    of the test-function class used for state-filtering error reports.
    ``y[0]`` is an unused placeholder; observations take values in {-1, +1}.
    """

    rho: float
    l: float
    y: np.ndarray
    support: np.ndarray | None = None
    weights: np.ndarray | None = None
    lipschitz: float = 1.0

    def __post_init__(self):
        if not abs(self.rho) < 1.0:
            raise ValueError("|rho| must be < 1")
        if self.l < 0.0:
            raise ValueError("l must be >= 0")
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        support = self.support
        weights = self.weights
        if support is None:
            support = np.array([-self.l, 0.0, self.l])
        if weights is None:
            weights = np.full(len(support), 1.0 / len(support))
        support = np.asarray(support, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if np.any(np.abs(support) > self.l + 1e-12):
            raise ValueError("innovation support must lie in [-l, l]")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights / np.sum(weights))

    @property
    def n_states(self) -> int:
        return len(self.support)

    @property
    def horizon(self) -> int:
        return self.y.shape[0] - 1

    @property
    def tau(self) -> float:
        return abs(self.rho)

    @property
    def l_prime(self) -> float:
        return self.l / (1.0 - self.tau)


def logistic_link(x, y):
    """Conditional probability of observing y in {-1, +1} at state x."""
    return 1.0 / (1.0 + np.exp(y * x))


class LogisticPotential(PathPotential):
    """Potential through the logistic link; particle statistic is X_n."""

    def __init__(self, spec: LogisticARSpec):
        self.spec = spec

    def _state_sum(self, states) -> float:
        # x = sum_{k} rho^k * value(state at lag k), evaluated by the same
        # Horner recursion the particle statistics use so that truncated and
        # full evaluations agree bit for bit when the window covers the path.
        vals = self.spec.support[np.asarray(states, dtype=np.int64)]
        x = vals[0]
        for v in vals[1:]:
            x = self.spec.rho * x + v
        return float(x)

    def eval(self, n: int, path: tuple) -> float:
        return float(logistic_link(self._state_sum(path), self.spec.y[n]))

    def truncated_eval_segment(self, n: int, p: int, segment: tuple) -> float:
        return float(logistic_link(self._state_sum(segment), self.spec.y[n]))

    def stats_init(self, states: np.ndarray) -> np.ndarray:
        return self.spec.support[states]

    def step_full(self, n: int, stats: np.ndarray, new_states: np.ndarray):
        x = self.spec.rho * stats + self.spec.support[new_states]
        return x, logistic_link(x, self.spec.y[n])

    def truncated_weights(self, n: int, p: int, segments: np.ndarray) -> np.ndarray:
        vals = self.spec.support[segments]
        x = vals[:, 0]
        for j in range(1, segments.shape[1]):
            x = self.spec.rho * x + vals[:, j]
        return logistic_link(x, self.spec.y[n])


def logistic_model(spec: LogisticARSpec, min_p: int = 1) -> FKModel:
    """Finite-innovation Feynman-Kac model; the kernel is the i.i.d. law."""
    matrix = np.tile(spec.weights, (spec.n_states, 1))
    kernel = MixingKernel(matrix, spec.n_states, reference=spec.weights, epsilon=1.0)
    return FKModel(
        zeta=spec.weights.copy(),
        kernel=kernel,
        potential=LogisticPotential(spec),
        min_p=min_p,
        state_values=spec.support.copy(),
    )


def logistic_constants(spec: LogisticARSpec):
    """Envelope constants: a = 1 + e^{l'}, b = 1 (clamped), phi = e^{2l'} - 1.

    Returns (HypothesisConstants, c) with c = e^{l'}; requires rho != 0 so
    that tau lies in (0, 1).
    """
    lp = spec.l_prime
    tau = spec.tau
    if tau == 0.0:
        raise ValueError("rho = 0 gives tau = 0; the geometric constants are not defined")
    horizon = max(spec.horizon, 1)
    pad = np.ones(horizon + 1)
    consts = HypothesisConstants(
        (1.0 + math.exp(lp)) * pad,
        pad.copy(),  # raw bound 1/(1+e^{-l'}) < 1, clamped to the unit floor
        (math.exp(2.0 * lp) - 1.0) * pad,
        pad.copy(),
        tau,
    )
    return consts, math.exp(lp)


def lipschitz_tail(spec: LogisticARSpec, p: int) -> float:
    """Deterministic tail ``K l tau^p / (1 - tau)`` from dropping lags >= p."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if spec.tau == 0.0:
        return 0.0
    return spec.lipschitz * spec.l * spec.tau**p / (1.0 - spec.tau)


@dataclass(frozen=True)
class XErrorDecomposition:
    """Segment error plus the deterministic Lipschitz tail."""

    segment_error: float
    tail: float

    @property
    def total_bound(self) -> float:
        return self.segment_error + self.tail


def x_filter_error_decomposition(
    spec: LogisticARSpec,
    n: int,
    p: int,
    particle,  # DiscreteMeasure over length-min(p, n+1) segments
    oracle,  # DiscreteMeasure over the same segment space
    test_functions,
) -> XErrorDecomposition:
    """Split the state-filtering error into segment error and geometric tail.

    ``test_functions`` is a finite family of bounded K-Lipschitz functions g;
    the segment error is the worst |<particle - oracle, g(x_segment)>| where
    ``x_segment`` uses only the retained lags.  The tail term is
    deterministic and does not depend on the particle realization.
    """
    pot = LogisticPotential(spec)
    worst = 0.0
    for g in test_functions:
        diff = 0.0
        for measure, sign in ((particle, 1.0), (oracle, -1.0)):
            for seg, wgt in zip(measure.support, measure.weights):
                diff += sign * wgt * g(pot._state_sum(seg))
        worst = max(worst, abs(diff))
    return XErrorDecomposition(segment_error=worst, tail=lipschitz_tail(spec, p))


def simulate_logistic(spec_rho, spec_l, support, weights, horizon: int, rng: RandomSource):
    """Draw i.i.d. innovations, the AR state, and logistic observations.

    Returns (states, x, y) with states as support indices and y in {-1, +1}
    (``y[0]`` is nan).
    """
    support = np.asarray(support, dtype=float)
    if weights is None:
        weights = np.full(len(support), 1.0 / len(support))
    weights = np.asarray(weights, dtype=float)
    weights = weights / np.sum(weights)
    gen = rng.generator
    states = gen.choice(len(support), size=horizon + 1, p=weights)
    x = np.zeros(horizon + 1)
    x[0] = support[states[0]]
    for nn in range(1, horizon + 1):
        x[nn] = spec_rho * x[nn - 1] + support[states[nn]]
    y = np.full(horizon + 1, np.nan)
    for nn in range(1, horizon + 1):
        y[nn] = 1.0 if gen.random() < 1.0 / (1.0 + math.exp(x[nn])) else -1.0
    return states, x, y
