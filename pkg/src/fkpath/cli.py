"""
Configuration-driven experiment harness.

A single JSON document describes the model, the scenario, and the run
parameters; the harness builds the model, simulates (or loads) observations,
runs the requested filters and oracles, and writes one CSV row per metric
with the matching theoretical bound attached.  Runs are byte-reproducible:
every replication gets its own randomness stream keyed by (N, p, rep).

Exit codes: 0 success, 1 configuration error, 2 a deterministic bound was
violated (the regression gate).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bnd
from . import fk_core, smc
from .measures import DiscreteMeasure, RandomSource, tv_distance
from .models import (
    GarchSpec,
    KalmanSpec,
    LogisticARSpec,
    garch_constants,
    garch_model,
    kalman_constants,
    kalman_model,
    logistic_constants,
    logistic_model,
    simulate_garch,
    simulate_kalman,
    simulate_logistic,
)

CSV_HEADER = "scenario,model,n,N,p,rep,metric,value,bound,seed"
FAMILIES = ("garch_beta0", "garch_general", "mixture_kalman", "logistic_ar")
SCENARIOS = (
    "convergence_in_N",
    "uniform_in_time",
    "coupling_check",
    "bound_vs_empirical",
    "truncation_gap",
)
# Slack for floating round-off in the deterministic value <= bound gates.
GATE_TOLERANCE = 1e-12
# Stream 0 of the config seed is reserved for data simulation; particle
# replications use streams >= 1.
DATA_STREAM = 0


class ConfigError(ValueError):
    """Invalid experiment configuration; carries key-path diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


@dataclass
class ExperimentConfig:
    """Validated experiment description (depths may still be "auto")."""

    family: str
    params: dict
    scenario: str
    horizon: int
    particle_counts: list
    depths: object  # list of ints, or the string "auto"
    replications: int
    seed: int
    output: str
    observations: list | None = None
    constants: dict | None = None  # optional {c, phi, tau} override for auto-p


@dataclass
class ModelBundle:
    """Everything the scenarios need: model, data, and scalar constants."""

    model: fk_core.FKModel
    consts_for: object  # p -> HypothesisConstants
    c: float
    eps: float
    phi: float
    tau: float
    min_p: int
    states: np.ndarray
    y: np.ndarray


def _as_float_list(value, key, diags, min_len=1):
    try:
        out = [float(v) for v in value]
    except (TypeError, ValueError):
        diags.append(f"{key}: expected a list of reals")
        return None
    if len(out) < min_len:
        diags.append(f"{key}: expected at least {min_len} entries")
        return None
    return out


def _check_transition(params, n_states, diags):
    matrix = params.get("transition")
    if matrix is None:
        diags.append("model.transition: missing required field")
        return
    arr = np.asarray(matrix, dtype=float)
    if arr.shape != (n_states, n_states):
        diags.append(f"model.transition: expected a {n_states}x{n_states} matrix")
        return
    if np.any(arr < 0.0) or not np.allclose(arr.sum(axis=1), 1.0, atol=1e-9):
        diags.append("model.transition: rows must be probability vectors")


def _validate_model(spec: dict, diags):
    family = spec.get("family")
    if family is None:
        diags.append("model.family: missing required field")
        return None, {}
    if family not in FAMILIES:
        diags.append(f"model.family: unknown family {family!r}")
        return None, {}
    params = {k: v for k, v in spec.items() if k != "family"}
    if family in ("garch_beta0", "garch_general"):
        alpha = _as_float_list(params.get("alpha"), "model.alpha", diags)
        gamma = _as_float_list(params.get("gamma"), "model.gamma", diags)
        if alpha is not None and any(a <= 0.0 for a in alpha):
            diags.append("model.alpha: require alpha > 0")
        if gamma is not None:
            for i, g in enumerate(gamma):
                if not 0.0 <= g < 1.0:
                    diags.append(f"model.gamma[{i}]: require 0 <= gamma < 1 (gamma_max < 1)")
        beta = params.get("beta")
        if beta is not None:
            beta = _as_float_list(beta, "model.beta", diags)
            if beta is not None:
                for i, b in enumerate(beta):
                    if not 0.0 <= b < 1.0:
                        diags.append(f"model.beta[{i}]: require 0 <= beta < 1")
                if family == "garch_beta0" and any(b != 0.0 for b in beta):
                    diags.append("model.beta: garch_beta0 requires beta identically zero")
        if family == "garch_general" and gamma is not None and len(set(gamma)) > 1:
            diags.append("model.gamma: garch_general requires a constant gamma")
        if alpha is not None:
            _check_transition(params, len(alpha), diags)
    elif family == "mixture_kalman":
        h = _as_float_list(params.get("h"), "model.h", diags)
        v = _as_float_list(params.get("v"), "model.v", diags)
        w = _as_float_list(params.get("w"), "model.w", diags)
        if h is not None and any(abs(x) >= 1.0 for x in h):
            diags.append("model.h: require |h| < 1")
        for key, vals in (("model.v", v), ("model.w", w)):
            if vals is not None and any(x <= 0.0 for x in vals):
                diags.append(f"{key}: require positive variances")
        if params.get("c_y") is not None and float(params["c_y"]) <= 0.0:
            diags.append("model.c_y: require c_y > 0")
        if h is not None:
            _check_transition(params, len(h), diags)
    elif family == "logistic_ar":
        rho = params.get("rho")
        if rho is None:
            diags.append("model.rho: missing required field")
        elif not abs(float(rho)) < 1.0:
            diags.append("model.rho: require |rho| < 1")
        l = params.get("l")
        if l is None:
            diags.append("model.l: missing required field")
        elif float(l) < 0.0:
            diags.append("model.l: require l >= 0")
    return family, params


def validate_config(text: str) -> ExperimentConfig:
    """Parse and fully validate a JSON experiment config.

    Raises ConfigError with one diagnostic per violation, each prefixed by
    the offending key path.
    """
    diags: list[str] = []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config: invalid JSON ({exc})"]) from exc
    if not isinstance(doc, dict):
        raise ConfigError(["config: expected a JSON object"])

    model_spec = doc.get("model")
    if model_spec is None or not isinstance(model_spec, dict):
        diags.append("model: missing required field")
        family, params = None, {}
    else:
        family, params = _validate_model(model_spec, diags)

    scenario = doc.get("scenario")
    if scenario is None:
        diags.append("scenario: missing required field")
    elif scenario not in SCENARIOS:
        diags.append(f"scenario: unknown scenario {scenario!r}")

    horizon = doc.get("horizon")
    if not isinstance(horizon, int) or horizon < 1:
        diags.append("horizon: require a positive integer")
        horizon = 1

    counts = doc.get("particle_counts")
    if counts is None:
        if scenario == "truncation_gap":
            counts = [0]
        else:
            diags.append("particle_counts: missing required field")
            counts = []
    elif not (isinstance(counts, list) and all(isinstance(n, int) and n >= 1 for n in counts)):
        diags.append("particle_counts: require a list of integers >= 1")
        counts = []

    depths = doc.get("truncation_depths")
    if depths is None:
        diags.append("truncation_depths: missing required field")
    elif depths != "auto" and not (
        isinstance(depths, list) and all(isinstance(p, int) and p >= 1 for p in depths)
    ):
        diags.append('truncation_depths: require a list of integers >= 1 or "auto"')

    reps = doc.get("replications", 1)
    if not isinstance(reps, int) or reps < 1:
        diags.append("replications: require an integer >= 1")
        reps = 1

    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        diags.append("seed: require an integer")
        seed = 0

    output = doc.get("output", "results.csv")
    if not isinstance(output, str):
        diags.append("output: require a path string")
        output = "results.csv"

    observations = doc.get("observations")
    if observations is not None:
        if isinstance(observations, str):
            try:
                with open(observations) as fh:
                    observations = [float(line) for line in fh if line.strip()]
            except (OSError, ValueError) as exc:
                diags.append(f"observations: unreadable file ({exc})")
                observations = None
        elif isinstance(observations, list):
            observations = _as_float_list(observations, "observations", diags)
        else:
            diags.append("observations: require a list of reals or a file path")
            observations = None
        if observations is not None and len(observations) < horizon:
            diags.append("observations: fewer entries than the horizon")

    constants = doc.get("constants")
    if constants is not None:
        if not isinstance(constants, dict) or not {"c", "phi", "tau"} <= set(constants):
            diags.append("constants: require an object with keys c, phi, tau")
            constants = None
        elif not (0.0 < float(constants["tau"]) < 1.0):
            diags.append("constants.tau: require 0 < tau < 1")

    if scenario in ("convergence_in_N", "bound_vs_empirical", "truncation_gap") and family:
        n_states = {
            "garch_beta0": len(params.get("alpha") or [1]),
            "garch_general": len(params.get("alpha") or [1]),
            "mixture_kalman": len(params.get("h") or [1]),
            "logistic_ar": len(params.get("support") or [0, 0, 0]),
        }[family]
        if n_states ** (horizon + 1) > fk_core.enumeration_budget():
            diags.append(
                "horizon: exact-oracle scenario exceeds the enumeration budget "
                f"({n_states}^{horizon + 1} atoms)"
            )

    if diags:
        raise ConfigError(diags)
    return ExperimentConfig(
        family=family,
        params=params,
        scenario=scenario,
        horizon=horizon,
        particle_counts=counts,
        depths=depths,
        replications=reps,
        seed=seed,
        output=output,
        observations=observations,
        constants=constants,
    )


def build_model(config: ExperimentConfig) -> ModelBundle:
    """Instantiate the model family, simulating observations if none given."""
    rng = RandomSource(config.seed, DATA_STREAM)
    horizon = config.horizon
    params = config.params
    if config.family in ("garch_beta0", "garch_general"):
        alpha = np.asarray(params["alpha"], dtype=float)
        gamma = np.asarray(params["gamma"], dtype=float)
        beta = np.asarray(params.get("beta", np.zeros_like(alpha)), dtype=float)
        kernel = fk_core.MixingKernel(np.asarray(params["transition"], dtype=float), len(alpha))
        if config.observations is not None:
            states = np.full(horizon + 1, -1, dtype=np.int64)
            y = np.concatenate([[np.nan], np.asarray(config.observations[:horizon])])
        else:
            states, y, _ = simulate_garch(alpha, beta, gamma, kernel, horizon, rng)
        spec = GarchSpec(alpha, beta, gamma, y, z=params.get("z"))
        mode = "beta_zero" if config.family == "garch_beta0" else "general"
        eps = kernel.epsilon(1)
        _, report = garch_constants(spec, mode, q=1, eps=eps)
        base_consts, _ = garch_constants(spec, mode, q=1, eps=eps)
        phi = report.phi_bar if math.isfinite(report.phi_bar) else float(np.max(base_consts.phi[1:]))
        return ModelBundle(
            model=garch_model(spec, kernel),
            consts_for=lambda p: garch_constants(spec, mode, q=p, eps=eps)[0],
            c=report.c,
            eps=eps,
            phi=phi,
            tau=report.tau,
            min_p=1,
            states=states,
            y=y,
        )
    if config.family == "mixture_kalman":
        h = np.asarray(params["h"], dtype=float)
        v = np.asarray(params["v"], dtype=float)
        w = np.asarray(params["w"], dtype=float)
        c_y = float(params.get("c_y", 10.0))
        kernel = fk_core.MixingKernel(np.asarray(params["transition"], dtype=float), len(h))
        if config.observations is not None:
            states = np.full(horizon + 1, -1, dtype=np.int64)
            y = np.concatenate([[np.nan], np.asarray(config.observations[:horizon])])
        else:
            states, _, y, _ = simulate_kalman(h, v, w, kernel, horizon, rng, c_y=c_y)
        spec = KalmanSpec(h, v, w, y, c_y=c_y)
        eps = kernel.epsilon(1)
        consts, report = kalman_constants(spec, eps=eps)
        return ModelBundle(
            model=kalman_model(spec, kernel),
            consts_for=lambda p: consts,
            c=report.c,
            eps=eps,
            phi=report.phi,
            tau=report.tau,
            min_p=1,
            states=states,
            y=y,
        )
    # logistic_ar
    rho = float(params["rho"])
    l = float(params["l"])
    support = params.get("support")
    weights = params.get("weights")
    if support is None:
        support = [-l, 0.0, l]
    if config.observations is not None:
        states = np.full(horizon + 1, -1, dtype=np.int64)
        y = np.concatenate([[np.nan], np.asarray(config.observations[:horizon])])
    else:
        states, _, y = simulate_logistic(rho, l, support, weights or None, horizon, rng)
    spec = LogisticARSpec(
        rho, l, y, support=np.asarray(support, dtype=float),
        weights=None if weights is None else np.asarray(weights, dtype=float),
        lipschitz=float(params.get("lipschitz", 1.0)),
    )
    consts, c = logistic_constants(spec)
    return ModelBundle(
        model=logistic_model(spec),
        consts_for=lambda p: consts,
        c=c,
        eps=1.0,
        phi=float(consts.phi[1]),
        tau=spec.tau,
        min_p=1,
        states=states,
        y=y,
    )


def resolve_depths(config: ExperimentConfig, bundle: ModelBundle | None = None) -> dict:
    """Map each particle count to its list of truncation depths.

    Literal depth lists apply to every N; "auto" picks the closed-form depth
    per N from the scalar constants (config override first, else the model's).
    """
    if config.depths != "auto":
        return {N: list(config.depths) for N in config.particle_counts}
    if config.constants is not None:
        c = float(config.constants["c"])
        phi = float(config.constants["phi"])
        tau = float(config.constants["tau"])
        min_p = 1
    else:
        if bundle is None:
            bundle = build_model(config)
        c, phi, tau, min_p = bundle.c, bundle.phi, bundle.tau, bundle.min_p
    if not math.isfinite(c):
        raise ConfigError(
            ["truncation_depths: auto depth needs a finite c (mixture ratio >= 2?)"]
        )
    return {
        N: [bnd.choose_p(c, phi, tau, max(N, 1), min_p=min_p)]
        for N in config.particle_counts
    }


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


@dataclass
class RowWriter:
    """Accumulates CSV rows and tracks deterministic-gate violations."""

    scenario: str
    model: str
    seed: int
    rows: list = field(default_factory=list)
    violations: int = 0

    def emit(self, n, N, p, rep, metric, value, bound, deterministic=False):
        self.rows.append(
            f"{self.scenario},{self.model},{n},{N},{p},{rep},{metric},"
            f"{_fmt(float(value))},{_fmt(float(bound))},{self.seed}"
        )
        if deterministic and math.isfinite(bound) and value > bound + GATE_TOLERANCE:
            self.violations += 1

    def write(self, path: str):
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in self.rows:
                fh.write(row + "\n")


def _stream_id(iN: int, ip: int, rep: int, n_depths: int, reps: int) -> int:
    return 1 + (iN * n_depths + ip) * reps + rep


def _exact_path_vectors(model, horizon, depth):
    """Depth-projected exact filter vector at each time 0..horizon."""
    mu = model.initial_measure()
    out = [smc.measure_to_vector(mu, 1, model.n_states)]
    for n in range(1, horizon + 1):
        mu = fk_core.normalized_step(model, n, mu)
        seg = min(depth, n + 1)
        out.append(
            smc.measure_to_vector(fk_core.project_last_p(mu, seg), seg, model.n_states)
        )
    return out


def _exact_truncated_vectors(model, horizon, p):
    mu = model.initial_measure()
    out = [smc.measure_to_vector(mu, 1, model.n_states)]
    for n in range(1, horizon + 1):
        mu = fk_core.truncated_step(model, n, p, mu)
        seg = min(p, n + 1)
        out.append(smc.measure_to_vector(mu, seg, model.n_states))
    return out


def _particle_tv_series(model, horizon, N, mode, p, rng, oracle_vectors):
    """TV to the oracle at each time along one particle run."""
    system = smc.init_system(model, N, mode, p, rng)
    series = np.empty(horizon + 1)
    vec = smc.weighted_vector(system.states[:, -1:], system.weights, model.n_states)
    series[0] = float(np.abs(vec - oracle_vectors[0]).sum())
    step = smc.particle_step if mode == "full" else smc.truncated_particle_step
    for n in range(1, horizon + 1):
        system = step(model, system)
        seg = min(p, n + 1)
        vec = smc.weighted_vector(
            system.states[:, -seg:], system.weights, model.n_states
        )
        series[n] = float(np.abs(vec - oracle_vectors[n]).sum())
    return series


def run_experiment(config: ExperimentConfig) -> int:
    """Execute the configured scenario; returns the process exit code."""
    bundle = build_model(config)
    depths = resolve_depths(config, bundle)
    writer = RowWriter(config.scenario, config.family, config.seed)
    model = bundle.model
    horizon = config.horizon
    reps = config.replications
    summary: list[str] = []

    if config.scenario == "truncation_gap":
        all_p = sorted({p for ps in depths.values() for p in ps})
        for ip, p in enumerate(all_p):
            consts = bundle.consts_for(p)
            path_vecs = _exact_path_vectors(model, horizon, p)
            trunc_vecs = _exact_truncated_vectors(model, horizon, p)
            worst = -math.inf
            for n in range(1, horizon + 1):
                gap = float(np.abs(path_vecs[n] - trunc_vecs[n]).sum())
                bound = bnd.tele2_bound(consts, n, p)
                writer.emit(n, 0, p, 0, "truncation_gap", gap, bound, deterministic=True)
                worst = max(worst, gap - bound)
            summary.append(f"p={p}: worst gap-minus-bound {worst:.3e}")
    elif config.scenario == "coupling_check":
        for iN, N in enumerate(config.particle_counts):
            for ip, p in enumerate(depths[N]):
                consts = bundle.consts_for(p)
                for rep in range(reps):
                    rng = RandomSource(
                        config.seed, _stream_id(iN, ip, rep, len(depths[N]), reps)
                    )
                    system = smc.init_system(model, N, "full", p, rng, window=p + 1)
                    try:
                        for k in range(1, horizon + 1):
                            system, _, diag = smc.coupled_step(model, system, p, consts)
                            writer.emit(
                                k, N, p, rep, "coupling_discrepancy",
                                diag.discrepancy, diag.bound, deterministic=True,
                            )
                    except smc.DegenerateParticleError:
                        writer.emit(system.time + 1, N, p, rep, "degenerate", 1.0, math.nan)
        summary.append(f"coupling violations: {writer.violations}")
    elif config.scenario in ("convergence_in_N", "bound_vs_empirical"):
        means = {}
        for iN, N in enumerate(config.particle_counts):
            for ip, p in enumerate(depths[N]):
                consts = bundle.consts_for(p)
                oracle = _exact_path_vectors(model, horizon, p)
                bound = (
                    bnd.theorem_bound(consts, horizon, p, N) if p >= 2 else math.nan
                )
                errs = []
                for rep in range(reps):
                    rng = RandomSource(
                        config.seed, _stream_id(iN, ip, rep, len(depths[N]), reps)
                    )
                    try:
                        series = _particle_tv_series(
                            model, horizon, N, "full", p, rng, oracle
                        )
                    except smc.DegenerateParticleError:
                        writer.emit(horizon, N, p, rep, "degenerate", 1.0, math.nan)
                        continue
                    writer.emit(horizon, N, p, rep, "tv_error", series[horizon], bound)
                    errs.append(series[horizon])
                if errs:
                    means[(N, p)] = float(np.mean(errs))
                    summary.append(
                        f"N={N} p={p}: mean TV {means[(N, p)]:.4e}"
                        + (f" (theorem bound {bound:.4e})" if math.isfinite(bound) else "")
                    )
        if config.scenario == "convergence_in_N" and len(config.particle_counts) >= 2:
            for p in sorted({q for ps in depths.values() for q in ps}):
                pts = [
                    (math.log(N), math.log(means[(N, p)]))
                    for N in config.particle_counts
                    if (N, p) in means and means[(N, p)] > 0.0
                ]
                if len(pts) >= 2:
                    slope = float(np.polyfit([x for x, _ in pts], [y for _, y in pts], 1)[0])
                    summary.append(f"p={p}: fitted log-log slope {slope:.4f} (theory -0.5)")
    elif config.scenario == "uniform_in_time":
        for iN, N in enumerate(config.particle_counts):
            for ip, p in enumerate(depths[N]):
                consts = bundle.consts_for(p)
                oracle = _exact_truncated_vectors(model, horizon, p)
                try:
                    _, _, _, cor_value = bnd.corollary_bound(
                        bundle.c, bundle.eps, bundle.phi, bundle.tau, N
                    )
                except (bnd.StabilityConditionError, ValueError):
                    cor_value = math.nan
                acc = np.zeros(horizon + 1)
                used = 0
                for rep in range(reps):
                    rng = RandomSource(
                        config.seed, _stream_id(iN, ip, rep, len(depths[N]), reps)
                    )
                    try:
                        series = _particle_tv_series(
                            model, horizon, N, "truncated", p, rng, oracle
                        )
                    except smc.DegenerateParticleError:
                        writer.emit(horizon, N, p, rep, "degenerate", 1.0, math.nan)
                        continue
                    for n in range(1, horizon + 1):
                        writer.emit(n, N, p, rep, "tv_error", series[n], cor_value)
                    used += 1
                    acc[: len(series)] += series
                if used:
                    mean = acc / used
                    half = np.arange(horizon // 2, horizon + 1)
                    slope = float(np.polyfit(half, mean[half], 1)[0])
                    summary.append(
                        f"N={N} p={p}: mean TV last half {float(np.mean(mean[half])):.4e}, "
                        f"slope/step {slope:.3e}, corollary {cor_value:.4e}"
                    )
    writer.write(config.output)
    print(f"wrote {len(writer.rows)} rows to {config.output}")
    for line in summary:
        print(line)
    if writer.violations:
        print(f"deterministic bound violations: {writer.violations}")
        return 2
    return 0


def _load_config(path: str, args) -> ExperimentConfig:
    with open(path) as fh:
        config = validate_config(fh.read())
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "reps", None) is not None:
        config.replications = args.reps
    if getattr(args, "out", None) is not None:
        config.output = args.out
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fkpath",
        description="Particle filters with path-dependent potentials: experiment harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a scenario and write the CSV")
    run_p.add_argument("config")
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--reps", type=int)
    run_p.add_argument("--out")
    val_p = sub.add_parser("validate", help="validate a config and echo resolved depths")
    val_p.add_argument("config")
    bounds_p = sub.add_parser("bounds", help="print the bound report, no simulation")
    bounds_p.add_argument("config")
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config, args)
    except ConfigError as exc:
        for diag in exc.diagnostics:
            print(f"config error: {diag}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "validate":
            depths = resolve_depths(config)
            print(f"config OK: scenario={config.scenario} model={config.family}")
            for N in config.particle_counts:
                print(f"N={N}: p={','.join(str(p) for p in depths[N])}")
            return 0
        if args.command == "bounds":
            bundle = build_model(config)
            depths = resolve_depths(config, bundle)
            for N in config.particle_counts:
                for p in depths[N]:
                    report = bnd.bound_report(
                        bundle.consts_for(p),
                        config.horizon,
                        max(N, 1),
                        bundle.c,
                        bundle.eps,
                        bundle.phi,
                        p=p,
                        min_p=bundle.min_p,
                    )
                    print(
                        f"N={N} p={p}: theorem={_fmt(report.theorem_bound)} "
                        f"corollary={_fmt(report.corollary_bound)} "
                        f"C={_fmt(report.C)} D={_fmt(report.D)} "
                        f"exponent={_fmt(report.exponent)} "
                        f"feasible={report.feasible_tau_c3} vacuous={report.vacuous}"
                    )
            return 0
        return run_experiment(config)
    except ConfigError as exc:
        for diag in exc.diagnostics:
            print(f"config error: {diag}", file=sys.stderr)
        return 1
    except fk_core.EnumerationBudgetError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
