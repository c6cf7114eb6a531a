"""Tests for the tail-bound evaluators and the martingale simulator."""

import math

import numpy as np
import pytest

from graphconc import concentration as conc
from graphconc import rng as _rng
from graphconc.errors import (
    DimensionMismatch,
    DomainError,
    InvalidParameter,
    NormTooLarge,
    NotPSD,
)


class TestFreedmanBound:
    def test_zero_threshold(self):
        assert conc.freedman_bound(1, 0.0, 1.0, 1.0) == 1.0

    def test_direct_evaluation(self):
        assert conc.freedman_bound(2, 2.0, 1.0, 1.0) == pytest.approx(2.0 * math.exp(-0.25))

    def test_monotone_in_t(self):
        ts = np.linspace(0.0, 500.0, 40)
        vals = [conc.freedman_bound(8, t, 2.0, 1.0) for t in ts]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-10 * vals[0]  # decays toward 0

    def test_monotone_in_sigma_m_d(self):
        for grid, make in [
            (np.linspace(0.5, 5, 10), lambda s: conc.freedman_bound(4, 3.0, s, 1.0)),
            (np.linspace(0.5, 5, 10), lambda m: conc.freedman_bound(4, 3.0, 1.0, m)),
            (range(1, 10), lambda d: conc.freedman_bound(d, 3.0, 1.0, 1.0)),
        ]:
            vals = [make(x) for x in grid]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_two_sided_factor(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            d = int(rng.integers(1, 20))
            t = float(rng.uniform(0, 10))
            s2 = float(rng.uniform(0.1, 5))
            m = float(rng.uniform(0.1, 5))
            assert conc.freedman_bound_two_sided(d, t, s2, m) == 2.0 * conc.freedman_bound(
                d, t, s2, m
            )

    def test_two_sided_direct(self):
        assert conc.freedman_bound_two_sided(4, 10.0, 1.0, 1.0) == pytest.approx(
            8.0 * math.exp(-100.0 / 48.0)
        )

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameter):
            conc.freedman_bound(2, 1.0, 0.0, 1.0)
        with pytest.raises(InvalidParameter):
            conc.freedman_bound(2, 1.0, 1.0, -1.0)
        with pytest.raises(InvalidParameter):
            conc.freedman_bound(0, 1.0, 1.0, 1.0)
        with pytest.raises(InvalidParameter):
            conc.freedman_bound(2, -1.0, 1.0, 1.0)


class TestHoeffdingBound:
    def test_zero_threshold_returns_d(self):
        for d, n, r in [(1, 10, 5.0), (3, 7, 2.5), (8, 100, 60.0)]:
            assert conc.cm_hoeffding_bound(d, 0.0, n, r) == pytest.approx(d)

    def test_direct_entropy_evaluation(self):
        # independent recomputation of the entropy exponent
        r, x, n = 0.5, 0.75, 10
        entropy = x * math.log(x / r) + (1 - x) * math.log((1 - x) / (1 - r))
        expected = math.exp(-n * entropy)
        assert conc.cm_hoeffding_bound(1, 2.5, 10, 5.0) == pytest.approx(expected)

    def test_domain_edges(self):
        with pytest.raises(DomainError):
            conc.cm_hoeffding_bound(1, 5.0, 10, 5.0)  # (R+t)/n = 1
        with pytest.raises(DomainError):
            conc.cm_hoeffding_bound(1, 7.0, 10, 5.0)  # (R+t)/n > 1
        with pytest.raises(DomainError):
            conc.cm_hoeffding_bound(1, 1.0, 10, 0.0)  # R/n = 0
        with pytest.raises(DomainError):
            conc.cm_hoeffding_bound(1, 1.0, 10, 10.0)  # R/n = 1


class TestIndependentSumSigma2:
    def test_single_input(self):
        assert conc.independent_sum_sigma2([np.diag([1.0, 2.0])]) == pytest.approx(2.0)

    def test_scaling(self):
        n = 25
        mats = [np.eye(3) / n] * n
        assert conc.independent_sum_sigma2(mats) == pytest.approx(1.0)

    def test_edge_variance_matrix(self):
        # sum of p(1-p) A_ij^2 over pairs is diagonal with entries
        # sum_j p(i,j)(1 - p(i,j)), and its maximum is below the max degree
        rng = np.random.default_rng(1)
        n = 6
        prob = rng.uniform(0, 1, (n, n))
        prob = (prob + prob.T) / 2
        moments = []
        for i in range(n):
            for j in range(i, n):
                a = conc._pair_matrix(n, i, j)
                moments.append(prob[i, j] * (1 - prob[i, j]) * (a @ a))
        sigma2 = conc.independent_sum_sigma2(moments)
        diag_expected = np.array([(prob[i] * (1 - prob[i])).sum() for i in range(n)])
        assert sigma2 == pytest.approx(diag_expected.max())
        assert sigma2 <= prob.sum(axis=1).max()

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            conc.independent_sum_sigma2([np.diag([1.0, -0.5])])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            conc.independent_sum_sigma2([np.eye(2), np.eye(3)])


class TestSimulateMartingale:
    def test_scalar_walk_support(self):
        for seed in range(10):
            trace = conc.simulate_martingale(conc.DiagonalRademacher(1), 4, seed)
            z4 = trace.final_sum()[0, 0]
            assert z4 in {-4.0, -2.0, 0.0, 2.0, 4.0}

    @pytest.mark.parametrize(
        "gen",
        [
            conc.DiagonalRademacher(5, scale=0.7),
            conc.RankOneSign(4, vector_seed=3, scale=1.3),
            conc.BernoulliCenteredEdge(4, 0, 2, p=0.3, scale=2.0),
        ],
        ids=["diagonal", "rank-one", "edge"],
    )
    def test_trace_invariants(self, gen):
        trace = conc.simulate_martingale(gen, 30, 12)
        # increments reproduce the partial-sum differences (up to summation
        # round-off; exact when the scale is dyadic)
        diffs = np.diff(trace.partial_sums, axis=0)
        assert np.abs(diffs - trace.increments).max() <= 1e-12 * trace.n_steps
        # norm bound holds for every increment
        for x in trace.increments:
            assert np.linalg.eigvalsh(x)[[0, -1]].__abs__().max() <= trace.bound_M + 1e-12
        # quadratic variation is PSD
        assert np.linalg.eigvalsh(trace.quad_variation)[0] >= -1e-12

    def test_rademacher_quad_variation(self):
        trace = conc.simulate_martingale(conc.DiagonalRademacher(8), 100, 5)
        assert np.array_equal(trace.quad_variation, 100.0 * np.eye(8))

    def test_second_moment_by_averaging(self):
        # empirical mean of X^2 over 1e5 draws matches the analytic moment
        gen = conc.DiagonalRademacher(8)
        stream = _rng.stream(2024)
        increments = gen.sample_increments(stream, 100_000)
        mean_sq = np.einsum("kij,kjl->il", increments, increments) / increments.shape[0]
        assert np.abs(mean_sq - gen.second_moment()).max() <= 0.05

    def test_increment_mean_near_zero(self):
        trials = 20_000
        for gen in [
            conc.DiagonalRademacher(3),
            conc.RankOneSign(3, vector_seed=1),
            conc.BernoulliCenteredEdge(3, 0, 1, p=0.4),
        ]:
            stream = _rng.stream(99)
            increments = gen.sample_increments(stream, trials)
            mean = increments.mean(axis=0)
            assert np.abs(mean).max() <= 5.0 * gen.bound() / math.sqrt(trials)

    def test_deterministic(self):
        gen = conc.RankOneSign(3, vector_seed=5)
        t1 = conc.simulate_martingale(gen, 10, 77)
        t2 = conc.simulate_martingale(gen, 10, 77)
        assert np.array_equal(t1.increments, t2.increments)

    def test_bad_steps(self):
        with pytest.raises(InvalidParameter):
            conc.simulate_martingale(conc.DiagonalRademacher(2), 0, 1)


class TestEmpiricalTail:
    def test_zero_threshold_symmetry(self):
        trials = 400
        rows = conc.empirical_tail(conc.DiagonalRademacher(1), 21, trials, [0.0], seed=6)
        assert 0.0 <= rows[0].empirical_prob <= 1.0
        # odd number of +-1 steps: P(final >= 0) is exactly 1/2
        assert rows[0].empirical_prob >= 0.5 - conc.monte_carlo_slack(0.5, trials)
        # the signed rank-one generator has lambda_max = max(sum, 0) >= 0
        rows = conc.empirical_tail(conc.RankOneSign(3, vector_seed=1), 21, 50, [0.0], seed=6)
        assert rows[0].empirical_prob == 1.0

    def test_blocks_decouple_oracle(self):
        # the diagonal generator's lambda_max equals the max of d scalar
        # walks driven by the same draws
        gen = conc.DiagonalRademacher(6)
        n_steps, trials, seed = 40, 30, 17
        rows = conc.empirical_tail(gen, n_steps, trials, [5.0], seed)
        exceed = 0
        for k in range(trials):
            stream = _rng.trial_stream(seed, k)
            signs = (stream.integers(0, 2, size=(n_steps, 6)) * 2 - 1).astype(float)
            walk_max = signs.sum(axis=0).max()
            exceed += walk_max >= 5.0
        assert rows[0].empirical_prob == pytest.approx(exceed / trials)

    def test_bound_validity_small_scale(self):
        gen = conc.DiagonalRademacher(4)
        trials = 2000
        rows = conc.empirical_tail(gen, 50, trials, [5.0, 10.0, 15.0, 20.0], seed=8)
        for row in rows:
            slack = conc.monte_carlo_slack(row.freedman_value, trials)
            assert row.empirical_prob <= row.freedman_value + slack

    def test_uses_exact_sigma2(self):
        gen = conc.RankOneSign(5, vector_seed=2, scale=0.5)
        rows = conc.empirical_tail(gen, 64, 10, [1.0], seed=9)
        sigma2 = 64 * 0.25  # n * scale^2 for a unit direction
        assert rows[0].freedman_value == pytest.approx(
            conc.freedman_bound(5, 1.0, sigma2, 0.5)
        )


class TestExpQuadraticDominance:
    def test_zero_matrix(self):
        holds, slack = conc.exp_quadratic_dominance_check(np.zeros((3, 3)))
        assert holds
        assert slack == pytest.approx(0.0, abs=1e-12)

    def test_scalar_one(self):
        holds, slack = conc.exp_quadratic_dominance_check(np.array([[1.0]]))
        assert holds
        assert slack == pytest.approx(3.0 - math.e, rel=1e-12)

    def test_random_instances(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            n = int(rng.integers(1, 10))
            c = rng.standard_normal((n, n))
            c = (c + c.T) / 2
            norm = np.abs(np.linalg.eigvalsh(c)).max()
            if norm > 0:
                c *= rng.uniform(0.05, 1.0) / norm
            holds, slack = conc.exp_quadratic_dominance_check(c)
            assert holds
            assert slack >= -1e-10

    def test_norm_too_large(self):
        with pytest.raises(NormTooLarge):
            conc.exp_quadratic_dominance_check(np.diag([1.5, 0.0]))
