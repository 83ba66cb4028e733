"""
Stability-bound calculators for truncated path-dependent particle filters.

All formulas are exact evaluations of the closed-form bounds: block mixing
coefficients, Birkhoff contraction coefficients, the deterministic truncation
propagation bound, the particle-error bound, the time-uniform envelope, and
the closed-form truncation-depth selector.

Index conventions: time is 1-based.  Empty sums are zero, empty products are
one.  Constants referenced past the declared horizon are extended with
``a = b = 1``, ``phi = phi[horizon]``, ``eps = eps[horizon]``; evaluations
that used the extension say so in their report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG3 = math.log(3.0)


class HorizonExceededError(IndexError):
    """Raised for time indices below 1."""


class StabilityConditionError(ValueError):
    """Raised when a bound's feasibility condition fails (e.g. tau*c^3 >= 1)."""


@dataclass(frozen=True)
class HypothesisConstants:
    """Per-step envelope constants and the global truncation decay rate.

    ``a[i]``, ``b[i]``, ``phi[i]``, ``eps[i]`` are the constants for time
    ``i`` (1-based; index 0 is an unused placeholder so that ``a[i]`` reads
    naturally).  ``tau`` is the geometric decay rate of the truncation error.
    """

    a: np.ndarray
    b: np.ndarray
    phi: np.ndarray
    eps: np.ndarray
    tau: float

    def __post_init__(self):
        for name in ("a", "b", "phi", "eps"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
        if not (0.0 < self.tau < 1.0):
            raise ValueError("tau must lie in (0, 1)")
        if self.horizon < 1:
            raise ValueError("constants must cover at least time 1")
        if np.any(self.a[1:] < 1.0) or np.any(self.b[1:] < 1.0):
            raise ValueError("a_n and b_n must be >= 1")
        if np.any(self.phi[1:] <= 0.0):
            raise ValueError("phi_n must be > 0")
        if np.any(self.eps[1:] <= 0.0) or np.any(self.eps[1:] > 1.0):
            raise ValueError("eps_n must lie in (0, 1]")

    @classmethod
    def uniform(cls, n: int, a: float, b: float, phi: float, eps: float, tau: float):
        """Constant-in-time constants over horizon n."""
        pad = np.ones(n + 1)
        return cls(a * pad, b * pad, phi * pad, eps * pad, tau)

    @property
    def horizon(self) -> int:
        return len(self.a) - 1

    def _get(self, arr: np.ndarray, i: int, beyond: float) -> float:
        if i < 1:
            raise HorizonExceededError(f"time index {i} out of range")
        return float(arr[i]) if i <= self.horizon else beyond

    def a_at(self, i: int) -> float:
        return self._get(self.a, i, 1.0)

    def b_at(self, i: int) -> float:
        return self._get(self.b, i, 1.0)

    def phi_at(self, i: int) -> float:
        return self._get(self.phi, i, float(self.phi[self.horizon]))

    def eps_at(self, i: int) -> float:
        return self._get(self.eps, i, float(self.eps[self.horizon]))


@dataclass(frozen=True)
class BoundReport:
    """Evaluated error bounds and the feasibility flags behind them."""

    theorem_bound: float
    corollary_bound: float
    chosen_p: int
    C: float
    D: float
    exponent: float
    feasible_tau_c3: bool
    vacuous: bool
    extended_past_horizon: bool


def tilde_epsilon_sq(consts: HypothesisConstants, k: int, p: int) -> float:
    """Squared mixing coefficient of a p-block of truncated steps at time k.

    ``eps_k^2 / ((a_k ... a_{k+p-2}) (b_k ... b_{k+p-2}))``; the products are
    empty for p = 1.
    """
    if k < 1:
        raise HorizonExceededError(f"time index {k} out of range")
    if p < 1:
        raise ValueError("p must be >= 1")
    prod = 1.0
    for i in range(k, k + p - 1):
        prod *= consts.a_at(i) * consts.b_at(i)
    return consts.eps_at(k) ** 2 / prod


def tilde_rho(consts: HypothesisConstants, k: int, p: int) -> float:
    """Birkhoff contraction coefficient ``(1 - e) / (1 + e)`` of a p-block."""
    e = tilde_epsilon_sq(consts, k, p)
    return (1.0 - e) / (1.0 + e)


def _uses_extension(consts: HypothesisConstants, n: int, p: int) -> bool:
    # The theorem's sum references eps/a/b up to index n + 2p - 1.
    return n + 2 * p - 1 > consts.horizon


def theorem_bound(consts: HypothesisConstants, n: int, p: int, N: int) -> float:
    """Particle-error bound for the projected filter at time n.

    ``(4/log 3) * sum_i delta_i / (e_{i+1,p} e_{i+p+1,p})
    * prod_{j=2}^{floor((n-i)/p)-1} rho_{i+jp+1,p}`` with
    ``delta_i = 3 tau^p phi_i + 4 a_i b_i / sqrt(N)``.
    """
    if n < 0:
        raise HorizonExceededError("n must be >= 0")
    if p < 2:
        raise ValueError("p must be >= 2")
    if N < 1:
        raise ValueError("N must be >= 1")
    total = 0.0
    taup = consts.tau**p
    for i in range(1, n + 1):
        delta = 3.0 * taup * consts.phi_at(i) + 4.0 * consts.a_at(i) * consts.b_at(i) / math.sqrt(N)
        term = delta / (
            tilde_epsilon_sq(consts, i + 1, p) * tilde_epsilon_sq(consts, i + p + 1, p)
        )
        for j in range(2, (n - i) // p):
            term *= tilde_rho(consts, i + j * p + 1, p)
        total += term
    return 4.0 / LOG3 * total


def tele2_bound(consts: HypothesisConstants, n: int, p: int) -> float:
    """Deterministic bound on the truncation gap of the exact filters.

    ``(4 tau^p / log 3) * sum_i phi_i / e_{i+1,p}
    * prod_{j=1}^{floor((n-i)/p)-1} rho_{i+jp+1,p}``.
    """
    if n < 0:
        raise HorizonExceededError("n must be >= 0")
    if p < 1:
        raise ValueError("p must be >= 1")
    total = 0.0
    for i in range(1, n + 1):
        term = consts.phi_at(i) / tilde_epsilon_sq(consts, i + 1, p)
        for j in range(1, (n - i) // p):
            term *= tilde_rho(consts, i + j * p + 1, p)
        total += term
    return 4.0 * consts.tau**p / LOG3 * total


def choose_p(c: float, phi: float, tau: float, N: int, min_p: int = 1) -> int:
    """Closed-form truncation depth ``ceil(log{4c/(3 phi sqrt(N))} / log tau)``.

    Floored below at ``min_p`` (the depth must be at least 1 and at least the
    model's smallest depth for which the truncation hypothesis is declared).
    """
    if not (0.0 < tau < 1.0):
        raise ValueError("tau must lie in (0, 1)")
    if c < 1.0 or phi <= 0.0 or N < 1:
        raise ValueError("require c >= 1, phi > 0, N >= 1")
    raw = math.ceil(math.log(4.0 * c / (3.0 * phi * math.sqrt(N))) / math.log(tau))
    return max(min_p, 1, raw)


def corollary_bound(c: float, eps: float, phi: float, tau: float, N: int):
    """Time-uniform envelope ``C {log N + D} (1/sqrt(N))^{1 + 3 log c/log tau}``.

    Returns ``(C, D, exponent, value)``.  Requires ``tau * c^3 < 1``.
    """
    if not (0.0 < tau < 1.0):
        raise ValueError("tau must lie in (0, 1)")
    if tau * c**3 >= 1.0:
        raise StabilityConditionError("stability condition violated: tau * c^3 >= 1")
    logc_over_logtau = math.log(c) / math.log(tau)
    C = (
        16.0
        / (eps**6 * c**2)
        * (-1.0 / math.log(tau))
        * (4.0 * c / (3.0 * phi)) ** (3.0 * logc_over_logtau)
    )
    D = 2.0 * math.log(3.0 * phi / (4.0 * c * tau))
    exponent = 1.0 + 3.0 * logc_over_logtau
    value = C * (math.log(N) + D) * (1.0 / math.sqrt(N)) ** exponent
    return C, D, exponent, value


def bound_report(
    consts: HypothesisConstants,
    n: int,
    N: int,
    c: float,
    eps: float,
    phi: float,
    p: int | None = None,
    min_p: int = 1,
) -> BoundReport:
    """Evaluate theorem and corollary bounds together; p defaults to choose_p."""
    tau = consts.tau
    feasible = tau * c**3 < 1.0
    if p is None:
        p = choose_p(c, phi, tau, N, min_p=min_p)
    p_eff = max(p, 2)
    thm = theorem_bound(consts, n, p_eff, N)
    if feasible:
        C, D, exponent, value = corollary_bound(c, eps, phi, tau, N)
    else:
        C = D = exponent = value = math.nan
    return BoundReport(
        theorem_bound=thm,
        corollary_bound=value,
        chosen_p=p,
        C=C,
        D=D,
        exponent=exponent,
        feasible_tau_c3=feasible,
        vacuous=thm > 2.0,
        extended_past_horizon=_uses_extension(consts, n, p_eff),
    )
