"""
Particle approximations of the true and truncated filters, plus the coupled
construction that runs both potentials on shared mutation draws.

Every step is select (multinomial resampling from the current weights),
mutate (one kernel draw per particle), weight (potential at the new path).
Particles store only a trailing window of coordinates together with the
model's recursive statistics, which is exact because the potentials are
recursive; the window must cover every projection depth that will be asked
for.

All randomness flows through ``RandomSource.uniform`` via inverse-CDF
sampling, so full and truncated runs with the same seed consume identical
draw sequences (this is what makes the p > n projection-commutation check a
same-seed equality).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import HypothesisConstants
from .fk_core import FKModel
from .measures import (
    DegenerateMeasureError,
    DiscreteMeasure,
    RandomSource,
    multinomial_indices,
)

# Exact indicator supremum is used while the segment space is at most this
# big; beyond it, a fixed family of random sign functions gives a lower bound.
EXACT_TEST_FAMILY_LIMIT = 2**14
RANDOM_TEST_FUNCTIONS = 512


class DegenerateParticleError(RuntimeError):
    """All particle weights vanished (envelope hypothesis broken)."""


@dataclass
class ParticleSystem:
    """N weighted trailing path segments with their recursive statistics.

    ``states[:, -1]`` is the current coordinate; ``states`` keeps at most
    ``window`` trailing coordinates.  ``stats`` is whatever the model's
    potential carries (an array for the numeric models, a list of full path
    tuples for the generic fallback, None in truncated mode).
    """

    states: np.ndarray
    stats: object
    weights: np.ndarray
    time: int
    mode: str  # "full" or "truncated"
    p: int
    window: int
    rng: RandomSource

    @property
    def n_particles(self) -> int:
        return self.states.shape[0]


@dataclass(frozen=True)
class CouplingDiagnostics:
    """Realized discrepancy between the coupled weightings of shared draws."""

    discrepancy: float  # (1/2) sum_i |w_i/sum w - wbar_i/sum wbar|
    test_sup: float  # worst |<difference, f>| over the test-function family
    bound: float  # phi_k tau^p when constants were supplied, else nan


def init_system(
    model: FKModel,
    N: int,
    mode: str,
    p: int,
    rng: RandomSource,
    window: int | None = None,
) -> ParticleSystem:
    """Time-0 system: N i.i.d. draws from the initial law, unit weights."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if mode not in ("full", "truncated"):
        raise ValueError(f"unknown mode {mode!r}")
    if window is None:
        window = max(p, 1)
    if window < min(p, 1):
        raise ValueError("window must cover the projection depth")
    cdf = np.cumsum(model.zeta)
    cdf[-1] = 1.0
    states = np.searchsorted(cdf, rng.uniform(N), side="right").astype(np.int64)
    states = states[:, np.newaxis]
    stats = model.potential.stats_init(states[:, -1]) if mode == "full" else None
    return ParticleSystem(
        states=states,
        stats=stats,
        weights=np.ones(N),
        time=0,
        mode=mode,
        p=p,
        window=max(window, p),
        rng=rng,
    )


def _select_and_mutate(model: FKModel, system: ParticleSystem):
    """Shared select/mutate phase; returns (ancestors, extended states)."""
    n = system.time + 1
    N = system.n_particles
    try:
        ancestors = multinomial_indices(system.weights, N, system.rng)
    except DegenerateMeasureError as exc:
        raise DegenerateParticleError("degenerate particle system") from exc
    Q = model.kernel.matrix(n)
    cum = np.cumsum(Q, axis=1)
    cum[:, -1] = 1.0
    rows = cum[system.states[ancestors, -1]]
    new_states = (system.rng.uniform(N)[:, np.newaxis] >= rows).sum(axis=1).astype(np.int64)
    extended = np.concatenate(
        [system.states[ancestors], new_states[:, np.newaxis]], axis=1
    )[:, -system.window :]
    return ancestors, new_states, extended


def _gather_stats(stats, ancestors):
    if stats is None:
        return None
    if isinstance(stats, np.ndarray):
        return stats[ancestors]
    return [stats[i] for i in ancestors]


def particle_step(model: FKModel, system: ParticleSystem) -> ParticleSystem:
    """One true-potential step: select, mutate, weight by the full potential."""
    if system.mode != "full":
        raise ValueError("particle_step requires a full-path system")
    n = system.time + 1
    ancestors, new_states, extended = _select_and_mutate(model, system)
    stats, psi = model.potential.step_full(
        n, _gather_stats(system.stats, ancestors), new_states
    )
    return ParticleSystem(
        states=extended,
        stats=stats,
        weights=np.asarray(psi, dtype=float),
        time=n,
        mode="full",
        p=system.p,
        window=system.window,
        rng=system.rng,
    )


def truncated_particle_step(model: FKModel, system: ParticleSystem, p: int | None = None) -> ParticleSystem:
    """One truncated step: shared select/mutate, weight by the truncated potential."""
    if system.mode != "truncated":
        raise ValueError("truncated_particle_step requires a truncated system")
    p = system.p if p is None else p
    n = system.time + 1
    _, _, extended = _select_and_mutate(model, system)
    seg_len = min(p, n + 1)
    psi = model.potential.truncated_weights(n, p, extended[:, -seg_len:])
    return ParticleSystem(
        states=extended,
        stats=None,
        weights=np.asarray(psi, dtype=float),
        time=n,
        mode="truncated",
        p=p,
        window=system.window,
        rng=system.rng,
    )


def _test_sup(diff_by_code: np.ndarray) -> float:
    """Worst |<signed measure, f>| over the configured test family."""
    if diff_by_code.shape[0] <= EXACT_TEST_FAMILY_LIMIT:
        return float(np.sum(np.abs(diff_by_code)))
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(202406)))
    signs = gen.choice([-1.0, 1.0], size=(RANDOM_TEST_FUNCTIONS, diff_by_code.shape[0]))
    return float(np.max(np.abs(signs @ diff_by_code)))


def segment_codes(segments: np.ndarray, n_states: int) -> np.ndarray:
    """Lexicographic integer codes of the segment rows."""
    L = segments.shape[1]
    powers = n_states ** np.arange(L - 1, -1, -1, dtype=np.int64)
    return segments @ powers


def weighted_vector(segments: np.ndarray, weights: np.ndarray, n_states: int) -> np.ndarray:
    """Normalized weight vector over the full segment space, code-ordered."""
    total = float(np.sum(weights))
    if total <= 0.0:
        raise DegenerateParticleError("degenerate particle system")
    codes = segment_codes(segments, n_states)
    return np.bincount(codes, weights=weights, minlength=n_states ** segments.shape[1]) / total


def vector_to_measure(vec: np.ndarray, seg_len: int, n_states: int) -> DiscreteMeasure:
    """Expand a code-ordered weight vector into an explicit DiscreteMeasure."""
    atoms = []
    for code in range(vec.shape[0]):
        digits = []
        c = code
        for _ in range(seg_len):
            digits.append(c % n_states)
            c //= n_states
        atoms.append(tuple(reversed(digits)))
    return DiscreteMeasure(atoms, vec)


def measure_to_vector(mu: DiscreteMeasure, seg_len: int, n_states: int) -> np.ndarray:
    """Code-ordered dense weight vector of a segment measure."""
    vec = np.zeros(n_states**seg_len)
    for atom, w in zip(mu.support, mu.weights):
        code = 0
        for s in atom:
            code = code * n_states + int(s)
        vec[code] = w
    return vec


def projected_measure(system: ParticleSystem, model: FKModel, depth: int | None = None) -> DiscreteMeasure:
    """Normalized particle measure projected to the last min(depth, time+1) coords."""
    depth = system.p if depth is None else depth
    seg_len = min(depth, system.time + 1)
    if seg_len > system.states.shape[1]:
        raise ValueError("projection depth exceeds the stored window")
    segs = system.states[:, -seg_len:]
    vec = weighted_vector(segs, system.weights, model.n_states)
    return vector_to_measure(vec, seg_len, model.n_states)


def coupled_step(
    model: FKModel,
    system: ParticleSystem,
    p: int,
    consts: HypothesisConstants | None = None,
):
    """One coupled step: shared draws, weighted by both potentials.

    Returns ``(advanced full system, truncated-view measure, diagnostics)``.
    The truncated view is the projection-depth-p measure weighted by the
    truncated potential of the very same mutation draws, i.e. one
    realization of the truncated particle operator applied to the projected
    input.
    """
    if system.mode != "full":
        raise ValueError("coupled_step requires a full-path system")
    n = system.time + 1
    seg_len = min(p, n + 1)
    if seg_len > system.window:
        raise ValueError("window too small for the requested coupling depth")
    ancestors, new_states, extended = _select_and_mutate(model, system)
    stats, psi = model.potential.step_full(
        n, _gather_stats(system.stats, ancestors), new_states
    )
    psi = np.asarray(psi, dtype=float)
    psi_bar = np.asarray(
        model.potential.truncated_weights(n, p, extended[:, -seg_len:]), dtype=float
    )
    sum_psi = float(np.sum(psi))
    sum_bar = float(np.sum(psi_bar))
    if sum_psi <= 0.0 or sum_bar <= 0.0:
        raise DegenerateParticleError("degenerate particle system")
    discrepancy = 0.5 * float(np.sum(np.abs(psi / sum_psi - psi_bar / sum_bar)))
    segs = extended[:, -seg_len:]
    diff = weighted_vector(segs, psi, model.n_states) - weighted_vector(
        segs, psi_bar, model.n_states
    )
    bound = math.nan
    if consts is not None:
        bound = consts.phi_at(n) * consts.tau**p
    diagnostics = CouplingDiagnostics(
        discrepancy=discrepancy, test_sup=_test_sup(diff), bound=bound
    )
    advanced = ParticleSystem(
        states=extended,
        stats=stats,
        weights=psi,
        time=n,
        mode="full",
        p=system.p,
        window=system.window,
        rng=system.rng,
    )
    truncated_view = vector_to_measure(
        weighted_vector(segs, psi_bar, model.n_states), seg_len, model.n_states
    )
    return advanced, truncated_view, diagnostics


def run_filter(
    model: FKModel,
    horizon: int,
    N: int,
    mode: str,
    p: int,
    rng: RandomSource,
    window: int | None = None,
) -> list[DiscreteMeasure]:
    """Iterate the chosen particle operator from the initial law.

    Returns the depth-p projected particle measure at every time 0..horizon.
    Fully deterministic given the RandomSource.
    """
    system = init_system(model, N, mode, p, rng, window=window)
    out = [projected_measure(system, model, p)]
    step = particle_step if mode == "full" else truncated_particle_step
    for _ in range(horizon):
        system = step(model, system)
        out.append(projected_measure(system, model, p))
    return out
