import math

import numpy as np
import pytest

from fkpath import (
    DiscreteMeasure,
    FKModel,
    MixingKernel,
    PathPotential,
    RandomSource,
    exact_path_filter,
    exact_truncated_filter,
    project_last_p,
    tv_distance,
)
from fkpath import smc
from fkpath.models.garch import garch_constants


class ConstantPotential(PathPotential):
    def eval(self, n, path):
        return 1.0

    def truncated_eval_segment(self, n, p, segment):
        return 1.0


class LastStatePotential(PathPotential):
    def eval(self, n, path):
        return 1.0 if path[-1] == 0 else 2.0

    def truncated_eval_segment(self, n, p, segment):
        return 1.0 if segment[-1] == 0 else 2.0


def uniform_model(potential, n_states=2):
    P = np.full((n_states, n_states), 1.0 / n_states)
    return FKModel(
        zeta=np.full(n_states, 1.0 / n_states),
        kernel=MixingKernel(P, n_states),
        potential=potential,
    )


class TestParticleStep:
    def test_constant_potential_equal_weights(self):
        model = uniform_model(ConstantPotential())
        system = smc.init_system(model, 64, "full", 2, RandomSource(1, 0))
        system = smc.particle_step(model, system)
        assert np.all(system.weights == 1.0)
        assert system.time == 1

    def test_single_particle(self):
        model = uniform_model(LastStatePotential())
        system = smc.init_system(model, 1, "full", 2, RandomSource(2, 0))
        system = smc.particle_step(model, system)
        assert system.states.shape[0] == 1
        assert system.weights[0] in (1.0, 2.0)

    def test_mode_guard(self):
        model = uniform_model(ConstantPotential())
        system = smc.init_system(model, 4, "truncated", 2, RandomSource(3, 0))
        with pytest.raises(ValueError):
            smc.particle_step(model, system)

    def test_degenerate_weights(self):
        model = uniform_model(ConstantPotential())
        system = smc.init_system(model, 4, "full", 2, RandomSource(4, 0))
        system.weights = np.zeros(4)
        with pytest.raises(smc.DegenerateParticleError):
            smc.particle_step(model, system)

    def test_mean_tv_to_exact_marginal(self):
        # E = {0,1}, Psi_1 = (1, 2): exact current-state marginal (1/3, 2/3)
        model = uniform_model(LastStatePotential())
        N, reps = 10**4, 100
        errs = []
        for rep in range(reps):
            system = smc.init_system(model, N, "full", 1, RandomSource(50, rep + 1))
            system = smc.particle_step(model, system)
            vec = smc.weighted_vector(system.states[:, -1:], system.weights, 2)
            errs.append(abs(vec[0] - 1.0 / 3.0) + abs(vec[1] - 2.0 / 3.0))
        assert np.mean(errs) <= 0.02


class TestTruncatedParticleStep:
    def test_segment_lengths(self, garch2):
        _, _, model = garch2
        p = 3
        system = smc.init_system(model, 32, "truncated", p, RandomSource(5, 0))
        for n in range(1, 7):
            system = smc.truncated_particle_step(model, system)
            assert system.states.shape[1] >= min(p, n + 1)

    def test_mean_tv_to_exact_truncated(self, garch2):
        _, _, model = garch2
        n, p, N, reps = 8, 3, 10**4, 100
        oracle = smc.measure_to_vector(exact_truncated_filter(model, n, p), p, 2)
        errs = []
        for rep in range(reps):
            system = smc.init_system(model, N, "truncated", p, RandomSource(60, rep + 1))
            for k in range(n):
                system = smc.truncated_particle_step(model, system)
            vec = smc.weighted_vector(system.states[:, -p:], system.weights, 2)
            errs.append(float(np.abs(vec - oracle).sum()))
        assert np.mean(errs) <= 0.04


class TestProjectionCommutation:
    def test_p_above_n_same_seed_equality(self, garch2):
        _, _, model = garch2
        p = 12
        full = smc.run_filter(model, 8, 300, "full", p, RandomSource(7, 1))
        trunc = smc.run_filter(model, 8, 300, "truncated", p, RandomSource(7, 1))
        for a, b in zip(full, trunc):
            assert a.as_dict() == b.as_dict()

    def test_p_above_n_same_seed_equality_logistic(self, logistic3):
        _, model = logistic3
        full = smc.run_filter(model, 6, 300, "full", 9, RandomSource(8, 2))
        trunc = smc.run_filter(model, 6, 300, "truncated", 9, RandomSource(8, 2))
        for a, b in zip(full, trunc):
            assert a.as_dict() == b.as_dict()


class TestCoupledStep:
    def test_zero_discrepancy_when_p_exceeds_k(self, garch2):
        _, _, model = garch2
        system = smc.init_system(model, 200, "full", 4, RandomSource(9, 0), window=6)
        system, view, diag = smc.coupled_step(model, system, 5)
        assert diag.discrepancy == 0.0
        assert diag.test_sup == 0.0

    def test_zero_discrepancy_constant_potential(self):
        model = uniform_model(ConstantPotential())
        system = smc.init_system(model, 200, "full", 2, RandomSource(10, 0), window=3)
        for _ in range(3):
            system, _, diag = smc.coupled_step(model, system, 2)
        assert diag.discrepancy == 0.0

    def test_pathwise_bound_and_consistency(self, garch2):
        spec, kernel, model = garch2
        p = 2
        consts, _ = garch_constants(spec, "beta_zero", q=p, eps=kernel.epsilon(1))
        system = smc.init_system(model, 2000, "full", p, RandomSource(11, 0), window=p + 1)
        for k in range(1, 7):
            system, view, diag = smc.coupled_step(model, system, p, consts)
            assert diag.bound == pytest.approx(consts.phi_at(k) * consts.tau**p)
            assert diag.discrepancy <= diag.bound + 1e-12
            # sup over |f| <= 1 of the aggregated difference never exceeds
            # the total per-particle weight difference
            assert diag.test_sup <= 2.0 * diag.discrepancy + 1e-9
            assert view.total_mass() == pytest.approx(1.0)


class TestRunFilter:
    def test_time_zero_draws_from_initial_law(self):
        model = uniform_model(ConstantPotential())
        out = smc.run_filter(model, 0, 10**4, "full", 1, RandomSource(12, 0))
        assert len(out) == 1
        assert out[0].weight((0,)) == pytest.approx(0.5, abs=0.02)

    def test_same_seed_identical_outputs(self, garch2):
        _, _, model = garch2
        a = smc.run_filter(model, 6, 500, "full", 2, RandomSource(13, 3))
        b = smc.run_filter(model, 6, 500, "full", 2, RandomSource(13, 3))
        for ma, mb in zip(a, b):
            assert ma.as_dict() == mb.as_dict()

    def test_error_decreases_with_n(self, garch2):
        _, _, model = garch2
        p, n = 2, 8
        oracle = smc.measure_to_vector(
            project_last_p(exact_path_filter(model, n), p), p, 2
        )
        means = []
        for N in (100, 10**4):
            errs = []
            for rep in range(30):
                out = smc.run_filter(model, n, N, "full", p, RandomSource(14, rep + 1))
                vec = smc.measure_to_vector(out[-1], p, 2)
                errs.append(float(np.abs(vec - oracle).sum()))
            means.append(np.mean(errs))
        assert means[1] < means[0] / 3.0


class TestOneStepParticleError:
    def test_mean_sup_error_bound(self, garch2):
        # particle version of one truncated step from a fixed segment law:
        # mean sup-over-indicators error is at most 2 a_n b_n / sqrt(N)
        spec, kernel, model = garch2
        n, p, N, reps = 6, 3, 10**4, 60
        consts, _ = garch_constants(spec, "beta_zero", q=p, eps=kernel.epsilon(1))
        mu = exact_truncated_filter(model, n - 1, p)
        oracle = smc.measure_to_vector(
            exact_truncated_filter(model, n, p), p, 2
        )
        support = np.array(mu.support)
        weights = np.asarray(mu.weights)
        pot = model.potential
        Q = model.kernel.matrix(n)
        cum = np.cumsum(Q, axis=1)
        cum[:, -1] = 1.0
        errs = []
        for rep in range(reps):
            rng = RandomSource(70, rep + 1)
            anc = smc.multinomial_indices(weights, N, rng)
            segs = support[anc]
            rows = cum[segs[:, -1]]
            new = (rng.uniform(N)[:, np.newaxis] >= rows).sum(axis=1)
            segs = np.concatenate([segs[:, 1:], new[:, np.newaxis]], axis=1)
            psi = pot.truncated_weights(n, p, segs)
            vec = smc.weighted_vector(segs, psi, 2)
            errs.append(float(np.abs(vec - oracle).sum()))
        cap = 2.0 * consts.a_at(n) * consts.b_at(n) / math.sqrt(N)
        sigma = np.std(errs) / math.sqrt(reps)
        assert np.mean(errs) <= cap + 3.0 * sigma


class TestSegmentEncoding:
    def test_vector_measure_round_trip(self):
        segs = np.array([[0, 1], [1, 1], [0, 1]])
        w = np.array([1.0, 2.0, 1.0])
        vec = smc.weighted_vector(segs, w, 2)
        assert vec == pytest.approx(np.array([0.0, 0.5, 0.0, 0.5]))
        mu = smc.vector_to_measure(vec, 2, 2)
        assert mu.weight((0, 1)) == pytest.approx(0.5)
        back = smc.measure_to_vector(mu, 2, 2)
        assert np.array_equal(back, vec)
