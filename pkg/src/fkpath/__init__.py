"""
Exact and particle filtering for Feynman-Kac flows whose potentials depend
on the whole latent path, with truncated-potential approximations, coupled
particle systems, and evaluable time-uniform error bounds.
"""
from .bounds import (
    BoundReport,
    HorizonExceededError,
    HypothesisConstants,
    StabilityConditionError,
    bound_report,
    choose_p,
    corollary_bound,
    tele2_bound,
    theorem_bound,
    tilde_epsilon_sq,
    tilde_rho,
)
from .fk_core import (
    DegenerateStepError,
    DimensionError,
    EnumerationBudgetError,
    FKModel,
    MixingKernel,
    PathPotential,
    enumeration_budget,
    exact_path_filter,
    exact_truncated_filter,
    forward_gamma,
    local_truncation_gap,
    normalized_step,
    project_last_p,
    truncated_step,
)
from .measures import (
    DegenerateMeasureError,
    DiscreteMeasure,
    RandomSource,
    hilbert_metric,
    multinomial_indices,
    sample_multinomial,
    tv_distance,
)
from .smc import (
    CouplingDiagnostics,
    DegenerateParticleError,
    ParticleSystem,
    coupled_step,
    init_system,
    particle_step,
    projected_measure,
    run_filter,
    truncated_particle_step,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "HorizonExceededError",
    "HypothesisConstants",
    "StabilityConditionError",
    "bound_report",
    "choose_p",
    "corollary_bound",
    "tele2_bound",
    "theorem_bound",
    "tilde_epsilon_sq",
    "tilde_rho",
    "DegenerateStepError",
    "DimensionError",
    "EnumerationBudgetError",
    "FKModel",
    "MixingKernel",
    "PathPotential",
    "enumeration_budget",
    "exact_path_filter",
    "exact_truncated_filter",
    "forward_gamma",
    "local_truncation_gap",
    "normalized_step",
    "project_last_p",
    "truncated_step",
    "DegenerateMeasureError",
    "DiscreteMeasure",
    "RandomSource",
    "hilbert_metric",
    "multinomial_indices",
    "sample_multinomial",
    "tv_distance",
    "CouplingDiagnostics",
    "DegenerateParticleError",
    "ParticleSystem",
    "coupled_step",
    "init_system",
    "particle_step",
    "projected_measure",
    "run_filter",
    "truncated_particle_step",
    "__version__",
]
