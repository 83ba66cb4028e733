"""
Feynman-Kac model abstraction and exact brute-force oracles on finite spaces.

A model bundles the initial law, a mixing Markov kernel, and a path potential
(with its truncated counterpart).  States are indices ``0 .. n_states-1``;
path atoms are tuples of indices, so the same operators drive both the exact
enumeration oracles below and the particle systems in :mod:`fkpath.smc`.

Time is 1-based for steps: the filter at time n lives on paths of length
n + 1 (coordinates 0..n).  The truncated filter at depth p lives on segments
of length ``min(p, n + 1)``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .measures import DiscreteMeasure

DEFAULT_ORACLE_BUDGET = 10**7


class DimensionError(ValueError):
    """Atom length does not match the requested time index."""


class DegenerateStepError(ValueError):
    """A normalization step produced zero mass (envelope hypothesis broken)."""


class EnumerationBudgetError(ValueError):
    """Requested enumeration exceeds the configured atom budget."""


def enumeration_budget() -> int:
    """Atom cap for the exact oracles; FKPATH_ORACLE_BUDGET overrides."""
    raw = os.environ.get("FKPATH_ORACLE_BUDGET")
    return int(raw) if raw else DEFAULT_ORACLE_BUDGET


class MixingKernel:
    """Markov kernel sandwiched between ``eps * xi`` and ``xi / eps``.

    Parameters
    ----------
    transition : ndarray or callable
        Row-stochastic (S, S) matrix, or a callable ``n -> matrix`` for
        inhomogeneous chains.
    reference : ndarray, optional
        Reference probability vector xi; defaults to uniform.
    epsilon : float or callable, optional
        Mixing coefficient(s); computed exhaustively from the matrix when
        omitted (singletons suffice by additivity).
    """

    def __init__(self, transition, n_states: int, reference=None, epsilon=None):
        self.n_states = n_states
        self._transition = transition
        if reference is None:
            reference = np.full(n_states, 1.0 / n_states)
        self.reference = np.asarray(reference, dtype=float)
        self._epsilon = epsilon

    def matrix(self, n: int) -> np.ndarray:
        m = self._transition(n) if callable(self._transition) else self._transition
        return np.asarray(m, dtype=float)

    def epsilon(self, n: int) -> float:
        if self._epsilon is not None:
            return self._epsilon(n) if callable(self._epsilon) else float(self._epsilon)
        return self.largest_epsilon(self.matrix(n), self.reference)

    @staticmethod
    def largest_epsilon(matrix: np.ndarray, reference: np.ndarray) -> float:
        """Largest eps with ``eps*xi(A) <= Q(s,A) <= xi(A)/eps`` for all s, A."""
        P = np.asarray(matrix, dtype=float)
        xi = np.asarray(reference, dtype=float)
        if np.any(P <= 0.0) or np.any(xi <= 0.0):
            return 0.0
        ratios = P / xi[np.newaxis, :]
        return float(min(1.0, np.min(ratios), np.min(1.0 / ratios)))

    def certify_mixing(self, n: int, eps: float | None = None) -> bool:
        """Exhaustive Hypothesis-1 check over singletons at time n."""
        if eps is None:
            eps = self.epsilon(n)
        P = self.matrix(n)
        xi = self.reference
        lower = eps * xi[np.newaxis, :] <= P * (1.0 + 1e-12)
        upper = P <= xi[np.newaxis, :] / eps * (1.0 + 1e-12)
        return bool(np.all(lower) and np.all(upper))


class PathPotential:
    """Positive potential on paths, with its p-truncated counterpart.

    Subclasses implement :meth:`eval` (full path) and
    :meth:`truncated_eval_segment` (genuine segment, ``p <= n``).  The
    ``p > n`` convention (truncated equals full) is handled here.

    The ``stats_*`` hooks are the vectorized interface the particle systems
    use; the defaults fall back to per-particle calls of :meth:`eval` with
    full paths carried as tuples, which is exact but slow — numeric models
    override them.
    """

    def eval(self, n: int, path: tuple) -> float:
        raise NotImplementedError

    def truncated_eval_segment(self, n: int, p: int, segment: tuple) -> float:
        raise NotImplementedError

    def truncated_eval(self, n: int, p: int, segment: tuple) -> float:
        if p > n:
            if len(segment) != n + 1:
                raise DimensionError(
                    f"expected full path of length {n + 1}, got {len(segment)}"
                )
            return self.eval(n, segment)
        if len(segment) != p:
            raise DimensionError(f"expected segment of length {p}, got {len(segment)}")
        return self.truncated_eval_segment(n, p, segment)

    # Vectorized particle hooks -------------------------------------------

    def stats_init(self, states: np.ndarray):
        return [(int(s),) for s in states]

    def step_full(self, n: int, stats, new_states: np.ndarray):
        paths = [stats[i] + (int(s),) for i, s in enumerate(new_states)]
        psi = np.array([self.eval(n, path) for path in paths])
        return paths, psi

    def truncated_weights(self, n: int, p: int, segments: np.ndarray) -> np.ndarray:
        return np.array(
            [self.truncated_eval(n, p, tuple(int(s) for s in row)) for row in segments]
        )


@dataclass(frozen=True)
class FKModel:
    """Initial law + mixing kernel + path potential (+ truncation validity).

    ``min_p`` is the smallest depth for which the truncation hypothesis is
    declared to hold; each concrete model documents its value.
    ``state_values`` optionally maps state indices to numeric values (used by
    models whose potentials read real-valued states).
    """

    zeta: np.ndarray
    kernel: MixingKernel
    potential: PathPotential
    min_p: int = 1
    state_values: np.ndarray | None = None
    n_states: int = field(init=False)

    def __post_init__(self):
        zeta = np.asarray(self.zeta, dtype=float)
        object.__setattr__(self, "zeta", zeta / np.sum(zeta))
        object.__setattr__(self, "n_states", zeta.shape[0])
        if self.min_p < 1:
            raise ValueError("min_p must be >= 1")

    def initial_measure(self) -> DiscreteMeasure:
        return DiscreteMeasure(
            [(s,) for s in range(self.n_states)], self.zeta
        )


def _check_budget(n_atoms: float):
    budget = enumeration_budget()
    if n_atoms > budget:
        raise EnumerationBudgetError(
            f"enumeration too large: {n_atoms:.3g} atoms exceeds budget {budget}"
        )


def forward_gamma(model: FKModel, n: int, mu: DiscreteMeasure) -> DiscreteMeasure:
    """Unnormalized forward step: extend by the kernel, weight by the potential.

    Input atoms are paths of length n; output atoms have length n + 1 and
    weight ``mu(path) * Q_n(last, new) * Psi_n(path + (new,))``.
    """
    _check_budget(len(mu) * model.n_states)
    Q = model.kernel.matrix(n)
    out = {}
    for path, w in zip(mu.support, mu.weights):
        if len(path) != n:
            raise DimensionError(f"dimension error: expected path length {n}, got {len(path)}")
        if w == 0.0:
            continue
        last = path[-1]
        for e in range(model.n_states):
            q = Q[last, e]
            if q == 0.0:
                continue
            new_path = path + (e,)
            out[new_path] = out.get(new_path, 0.0) + w * q * model.potential.eval(n, new_path)
    return DiscreteMeasure.from_dict(out)


def normalized_step(model: FKModel, n: int, mu: DiscreteMeasure) -> DiscreteMeasure:
    """Forward step divided by its total mass (the normalized operator)."""
    gamma = forward_gamma(model, n, mu)
    if gamma.total_mass() <= 0.0:
        raise DegenerateStepError("degenerate step: zero forward mass")
    return gamma.normalized()


def project_last_p(mu: DiscreteMeasure, p: int) -> DiscreteMeasure:
    """Marginal on the last p coordinates; identity when p exceeds atom length."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if all(len(a) <= p for a in mu.support):
        return mu
    out = {}
    for path, w in zip(mu.support, mu.weights):
        seg = path[-p:]
        out[seg] = out.get(seg, 0.0) + w
    return DiscreteMeasure.from_dict(out)


def truncated_step(model: FKModel, n: int, p: int, mu: DiscreteMeasure) -> DiscreteMeasure:
    """Normalized truncated forward step on segments of length min(p, n).

    Shifts the segment window, extends by the kernel, weights by the
    truncated potential.  Coincides with :func:`normalized_step` while
    ``n < p`` (full paths still fit in the window).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    seg_in = min(p, n)
    seg_out = min(p, n + 1)
    Q = model.kernel.matrix(n)
    out = {}
    for seg, w in zip(mu.support, mu.weights):
        if len(seg) != seg_in:
            raise DimensionError(
                f"dimension error: expected segment length {seg_in}, got {len(seg)}"
            )
        if w == 0.0:
            continue
        last = seg[-1]
        for e in range(model.n_states):
            q = Q[last, e]
            if q == 0.0:
                continue
            new_seg = (seg + (e,))[-seg_out:]
            psi = model.potential.truncated_eval(n, p, new_seg)
            out[new_seg] = out.get(new_seg, 0.0) + w * q * psi
    total = sum(out.values())
    if total <= 0.0:
        raise DegenerateStepError("degenerate step: zero forward mass")
    return DiscreteMeasure.from_dict({k: v / total for k, v in out.items()})


def exact_path_filter(model: FKModel, n: int) -> DiscreteMeasure:
    """Exact filter at time n by full path enumeration (R_{1:n} zeta)."""
    _check_budget(model.n_states ** (n + 1))
    mu = model.initial_measure()
    for k in range(1, n + 1):
        mu = normalized_step(model, k, mu)
    return mu


def exact_truncated_filter(model: FKModel, n: int, p: int) -> DiscreteMeasure:
    """Exact truncated filter at time n by dynamic programming on segments.

    Memory is O(n_states^p) independent of n; coincides with
    :func:`exact_path_filter` whenever p > n.
    """
    _check_budget(model.n_states ** min(p, n + 1))
    mu = model.initial_measure()
    for k in range(1, n + 1):
        mu = truncated_step(model, k, p, mu)
    return mu


def local_truncation_gap(
    model: FKModel, k: int, n: int, p: int, mu: DiscreteMeasure
) -> float:
    """Exact TV gap from swapping one true step for its truncated version.

    Compares ``Rt_{k+1:n} H_k R_k mu`` against ``Rt_{k:n} H_{k-1} mu``
    (projections at depth p), both by enumeration.  Bounded by
    ``2 * phi_k * tau^p``.
    """
    from .measures import tv_distance

    if not (1 <= k < n):
        raise ValueError("require 1 <= k < n")
    left = project_last_p(normalized_step(model, k, mu), p)
    for j in range(k + 1, n + 1):
        left = truncated_step(model, j, p, left)
    right = project_last_p(mu, p)
    for j in range(k, n + 1):
        right = truncated_step(model, j, p, right)
    return tv_distance(left, right)
