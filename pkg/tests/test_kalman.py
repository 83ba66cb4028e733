import itertools
import math

import numpy as np
import pytest

from fkpath import MixingKernel, RandomSource
from fkpath.models.kalman import (
    KalmanSpec,
    kalman_constants,
    kalman_model,
    kalman_recursion,
    simulate_kalman,
    upsilon,
)

P2 = np.array([[0.6, 0.4], [0.3, 0.7]])


def make_spec(h, v, w, y, **kw):
    return KalmanSpec(
        np.asarray(h, dtype=float),
        np.asarray(v, dtype=float),
        np.asarray(w, dtype=float),
        np.asarray(y, dtype=float),
        **kw,
    )


def random_spec(rng, horizon):
    size = int(rng.integers(2, 4))
    h = rng.uniform(-0.9, 0.9, size)
    v = rng.uniform(0.3, 2.0, size)
    w = rng.uniform(0.3, 2.0, size)
    y = np.concatenate([[np.nan], rng.standard_normal(horizon)])
    return make_spec(h, v, w, y)


def joint_log_density(spec, path, upto):
    """Log density of y_{1:upto} given the regime path, by direct Gaussian
    composition: X_0 = 0, X_n = h_n X_{n-1} + W_n, Y_n = X_n + V_n."""
    n = upto
    A = np.zeros((n, n))
    for i in range(1, n + 1):
        prod = 1.0
        for k in range(i, 0, -1):
            A[i - 1, k - 1] = prod
            prod *= spec.h[path[k]]
    wdiag = np.array([spec.w[path[k]] for k in range(1, n + 1)])
    vdiag = np.array([spec.v[path[k]] for k in range(1, n + 1)])
    cov = A @ np.diag(wdiag) @ A.T + np.diag(vdiag)
    yv = spec.y[1 : n + 1]
    sign, logdet = np.linalg.slogdet(cov)
    assert sign > 0
    return -0.5 * (yv @ np.linalg.solve(cov, yv) + logdet + n * math.log(2.0 * math.pi))


class TestKalmanRecursion:
    def test_h_zero_closed_form(self):
        spec = make_spec([0.0], [2.0], [3.0], [np.nan, 1.5, -0.7])
        out = kalman_recursion(spec, (0, 0, 0))
        for n, (mu, sig2, a, m, c) in enumerate(out, start=1):
            assert mu == 0.0
            assert sig2 == pytest.approx(5.0)
            assert a == pytest.approx(3.0 / 5.0)
            assert m == pytest.approx(a * spec.y[n])
            assert c == pytest.approx(2.0 * 3.0 / 5.0)

    def test_zero_observations_zero_mean(self):
        spec = make_spec([0.0, 0.0], [1.0, 2.0], [1.0, 0.5], [np.nan, 0.0, 0.0, 0.0])
        out = kalman_recursion(spec, (0, 1, 0, 1))
        assert all(step[3] == 0.0 for step in out)

    def test_matches_joint_gaussian_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            horizon = int(rng.integers(2, 12))
            spec = random_spec(rng, horizon)
            path = tuple(rng.integers(0, spec.n_states, horizon + 1))
            steps = kalman_recursion(spec, path)
            log_psi = sum(
                math.log(
                    math.exp(-((spec.y[n] - mu) ** 2) / (2.0 * sig2))
                    / math.sqrt(2.0 * math.pi * sig2)
                )
                for n, (mu, sig2, _, _, _) in enumerate(steps, start=1)
            )
            assert log_psi == pytest.approx(
                joint_log_density(spec, path, horizon), rel=1e-12, abs=1e-10
            )

    def test_boxes(self):
        rng = np.random.default_rng(22)
        for _ in range(30):
            spec = random_spec(rng, 12)
            v_lo, v_hi, w_lo, w_hi = spec.bounds
            c_lo = 1.0 / (1.0 / v_lo + 1.0 / w_lo)
            s_lo = v_lo + w_lo
            s_hi = (spec.h_bar**2 + 1.0) * v_hi + w_hi
            for _ in range(10):
                path = tuple(rng.integers(0, spec.n_states, 13))
                for _, sig2, _, _, c in kalman_recursion(spec, path):
                    assert c_lo - 1e-12 <= c <= v_hi + 1e-12
                    assert s_lo - 1e-12 <= sig2 <= s_hi + 1e-12


class TestKalmanPotential:
    def test_vectorized_step_matches_eval(self):
        rng = np.random.default_rng(23)
        spec = random_spec(rng, 5)
        model = kalman_model(spec, MixingKernel(np.full((spec.n_states,) * 2, 1.0 / spec.n_states), spec.n_states))
        pot = model.potential
        paths = list(itertools.product(range(spec.n_states), repeat=4))
        arr = np.array(paths)
        stats = pot.stats_init(arr[:, 0])
        for n in (1, 2, 3):
            stats, psi = pot.step_full(n, stats, arr[:, n])
            expected = [pot.eval(n, tuple(row[: n + 1])) for row in paths]
            assert np.allclose(psi, expected, rtol=1e-13)

    def test_truncated_equals_full_when_p_exceeds_n(self):
        rng = np.random.default_rng(24)
        spec = random_spec(rng, 4)
        model = kalman_model(spec, MixingKernel(np.full((spec.n_states,) * 2, 1.0 / spec.n_states), spec.n_states))
        pot = model.potential
        for n in range(1, 4):
            for path in itertools.product(range(spec.n_states), repeat=n + 1):
                assert pot.truncated_eval(n, 6, path) == pot.eval(n, path)

    def test_vectorized_truncated_matches_scalar(self):
        rng = np.random.default_rng(25)
        spec = random_spec(rng, 8)
        model = kalman_model(spec, MixingKernel(np.full((spec.n_states,) * 2, 1.0 / spec.n_states), spec.n_states))
        pot = model.potential
        n, p = 6, 3
        segs = np.array(list(itertools.product(range(spec.n_states), repeat=p)))
        psi = pot.truncated_weights(n, p, segs)
        expected = [pot.truncated_eval(n, p, tuple(row)) for row in segs]
        assert np.allclose(psi, expected, rtol=1e-13)


class TestKalmanConstants:
    def test_tau_sigma_worked_value(self):
        spec = make_spec([0.5], [1.0], [1.0], [np.nan, 0.1])
        _, report = kalman_constants(spec)
        assert report.tau_sigma == pytest.approx(1.0 / (2.0 + 2.0 * math.sqrt(2.0)))

    def test_h_zero_degenerate(self):
        spec = make_spec([0.0, 0.0], [1.0, 1.5], [0.5, 2.0], [np.nan, 0.1])
        _, report = kalman_constants(spec)
        assert report.c_sigma == 0.0
        assert report.c_mu == 0.0
        assert report.tau == report.tau_sigma

    def test_envelope_floor(self):
        rng = np.random.default_rng(26)
        spec = random_spec(rng, 4)
        consts, report = kalman_constants(spec)
        assert np.all(consts.a[1:] >= 1.0)
        assert np.all(consts.b[1:] >= 1.0)
        assert report.phi > 0.0

    def test_upsilon_derivative_below_tau_sigma(self):
        rng = np.random.default_rng(27)
        for _ in range(5):
            spec = random_spec(rng, 3)
            _, report = kalman_constants(spec)
            v_lo, v_hi, w_lo, _ = spec.bounds
            grid = np.linspace(math.log(1.0 / (1.0 / v_lo + 1.0 / w_lo)), math.log(v_hi), 400)
            dc = 1e-6
            for s in range(spec.n_states):
                for c in grid:
                    deriv = (upsilon(spec, c + dc, s) - upsilon(spec, c - dc, s)) / (2.0 * dc)
                    assert abs(deriv) <= report.tau_sigma + 1e-9

    def test_sigma_contraction(self):
        rng = np.random.default_rng(28)
        spec = random_spec(rng, 10)
        _, report = kalman_constants(spec)
        n = 9
        for p in (2, 4):
            for _ in range(20):
                tail = tuple(rng.integers(0, spec.n_states, p))
                head1 = tuple(rng.integers(0, spec.n_states, n + 1 - p))
                head2 = tuple(rng.integers(0, spec.n_states, n + 1 - p))
                s1 = kalman_recursion(spec, head1 + tail)[-1][1]
                s2 = kalman_recursion(spec, head2 + tail)[-1][1]
                assert abs(s1 - s2) <= report.c_sigma * report.tau_sigma**p + 1e-12

    def test_mu_bound(self):
        rng = np.random.default_rng(29)
        spec = random_spec(rng, 10)
        _, report = kalman_constants(spec)
        gain = report.a_bar * spec.h_bar / (1.0 - report.a_tilde * spec.h_bar)
        for _ in range(20):
            path = tuple(rng.integers(0, spec.n_states, 11))
            steps = kalman_recursion(spec, path)
            for n, (mu, *_rest) in enumerate(steps, start=1):
                m_prev = float(np.max(np.abs(spec.y[1:n]))) if n > 1 else 0.0
                assert abs(mu) <= gain * m_prev + 1e-12


class TestSimulateKalman:
    def test_seed_determinism(self):
        kernel = MixingKernel(P2, 2)
        a = simulate_kalman([0.3, -0.5], [1.0, 0.5], [0.8, 1.2], kernel, 40, RandomSource(4, 2))
        b = simulate_kalman([0.3, -0.5], [1.0, 0.5], [0.8, 1.2], kernel, 40, RandomSource(4, 2))
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[2][1:], b[2][1:])

    def test_h_zero_iid_variance(self):
        kernel = MixingKernel(np.full((1, 1), 1.0), 1)
        _, _, y, _ = simulate_kalman([0.0], [1.5], [0.5], kernel, 10**5, RandomSource(6, 0))
        assert np.var(y[1:]) == pytest.approx(2.0, rel=0.05)

    def test_observation_cap_enforced(self):
        kernel = MixingKernel(P2, 2)
        _, _, y, rejections = simulate_kalman(
            [0.3, -0.5], [1.0, 0.5], [0.8, 1.2], kernel, 500, RandomSource(8, 0), c_y=1.0
        )
        assert np.all(np.abs(y[1:]) <= 1.0)
        assert rejections > 0
