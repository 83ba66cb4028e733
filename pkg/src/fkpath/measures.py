"""
Discrete measures over finite supports, with the metrics used throughout.

Conventions fixed here once and for all:

* Total variation: ``tv(mu, nu) = sup_{|f| <= 1} |mu(f) - nu(f)|``, which for
  discrete measures equals the sum of absolute weight differences over the
  union support.  Two disjoint unit masses are at distance 2.
* Hilbert projective metric: on the common support,
  ``h = log max_i(mu_i/nu_i) + log max_i(nu_i/mu_i)``; measures whose
  supports differ are at distance infinity (they are not comparable in the
  projective sense).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Weights below this are treated as exact zeros so ratio computations in the
# Hilbert metric cannot overflow.
_WEIGHT_FLOOR = 1e-300


class DegenerateMeasureError(ValueError):
    """Raised when an operation needs strictly positive total mass."""


@dataclass(frozen=True)
class RandomSource:
    """Seeded, stream-split randomness.

    Identical ``(seed, stream)`` pairs produce bit-identical draw sequences;
    distinct streams are statistically independent (PCG64 seeded through a
    ``SeedSequence`` keyed on both integers).  A RandomSource owns its
    generator: never share one instance across concurrent consumers, split
    streams instead.
    """

    seed: int
    stream: int = 0
    _generator: np.random.Generator = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed, self.stream)))
        )
        object.__setattr__(self, "_generator", gen)

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def uniform(self, n: int) -> np.ndarray:
        """n uniforms in [0, 1); the only primitive the filters consume."""
        return self._generator.random(n)

    def split(self, stream: int) -> "RandomSource":
        """Fresh independent source with the same seed, different stream."""
        return RandomSource(self.seed, stream)


class DiscreteMeasure:
    """Nonnegative measure with an explicit finite support.

    Atoms are opaque hashable values (state indices, path tuples, ...) and
    must be pairwise distinct.  Immutable after construction.
    """

    __slots__ = ("support", "weights", "_index")

    def __init__(self, support, weights):
        support = tuple(support)
        weights = np.asarray(weights, dtype=float).copy()
        if len(support) != weights.shape[0]:
            raise ValueError("support and weights must have the same length")
        if weights.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and nonnegative")
        weights[np.abs(weights) < _WEIGHT_FLOOR] = 0.0
        index = {}
        for i, atom in enumerate(support):
            if atom in index:
                raise ValueError(f"duplicate atom {atom!r}")
            index[atom] = i
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", index)
        self.weights.flags.writeable = False

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteMeasure is immutable")

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return f"DiscreteMeasure({len(self.support)} atoms, mass={self.total_mass():.6g})"

    @classmethod
    def from_dict(cls, mapping) -> "DiscreteMeasure":
        """Build from {atom: weight}, atoms sorted for determinism."""
        atoms = sorted(mapping)
        return cls(atoms, [mapping[a] for a in atoms])

    @classmethod
    def point_mass(cls, atom) -> "DiscreteMeasure":
        return cls((atom,), (1.0,))

    def weight(self, atom) -> float:
        i = self._index.get(atom)
        return 0.0 if i is None else float(self.weights[i])

    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def normalized(self) -> "DiscreteMeasure":
        """Probability view.  Raises on zero total mass."""
        mass = self.total_mass()
        if mass <= 0.0:
            raise DegenerateMeasureError("degenerate measure: zero total mass")
        return DiscreteMeasure(self.support, self.weights / mass)

    def integrate(self, f) -> float:
        return float(sum(w * f(a) for a, w in zip(self.support, self.weights)))

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.weights.tolist()))


def _union_weights(mu: DiscreteMeasure, nu: DiscreteMeasure):
    atoms = sorted(set(mu.support) | set(nu.support))
    wmu = np.array([mu.weight(a) for a in atoms])
    wnu = np.array([nu.weight(a) for a in atoms])
    return atoms, wmu, wnu


def tv_distance(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """Total variation distance, sup over test functions bounded by 1.

    Equals the L1 distance of the weight vectors on the union support;
    symmetric, zero iff the measures coincide.
    """
    _, wmu, wnu = _union_weights(mu, nu)
    return float(np.sum(np.abs(wmu - wnu)))


def hilbert_metric(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """Hilbert projective metric; infinity when the supports differ.

    Scale invariant: ``h(c*mu, nu) == h(mu, nu)`` for any c > 0.
    """
    if mu.total_mass() <= 0.0 or nu.total_mass() <= 0.0:
        raise DegenerateMeasureError("degenerate measure: zero total mass")
    _, wmu, wnu = _union_weights(mu, nu)
    pos_mu = wmu > 0.0
    pos_nu = wnu > 0.0
    if not np.array_equal(pos_mu, pos_nu):
        return math.inf
    wmu = wmu[pos_mu]
    wnu = wnu[pos_nu]
    ratios = wmu / wnu
    return float(np.log(np.max(ratios)) + np.log(np.max(1.0 / ratios)))


def sample_multinomial(mu: DiscreteMeasure, n: int, rng: RandomSource) -> list:
    """n i.i.d. draws from the normalized measure (inverse-CDF sampling)."""
    if n < 1:
        raise ValueError("n must be positive")
    prob = mu.normalized()
    cdf = np.cumsum(prob.weights)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.uniform(n), side="right")
    return [prob.support[i] for i in idx]


def multinomial_indices(weights: np.ndarray, n: int, rng: RandomSource) -> np.ndarray:
    """n ancestor indices drawn proportional to ``weights`` (vectorized)."""
    total = float(np.sum(weights))
    if total <= 0.0:
        raise DegenerateMeasureError("degenerate measure: zero total mass")
    cdf = np.cumsum(weights) / total
    cdf[-1] = 1.0
    return np.searchsorted(cdf, rng.uniform(n), side="right")
