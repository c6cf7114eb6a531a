"""Unit and property tests for the symmetric linear-algebra core."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from graphconc import linalg
from graphconc.errors import DimensionMismatch, NonFinite


def random_symmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n))
    return scale * (a + a.T) / 2.0


class TestEigSym:
    def test_diagonal(self):
        dec = linalg.eig_sym(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(dec.eigenvalues, [1.0, 2.0, 3.0])
        # eigenvectors are signed permutation columns
        np.testing.assert_allclose(np.abs(dec.eigenvectors), np.eye(3)[:, [1, 2, 0]], atol=1e-12)

    def test_two_by_two_exchange(self):
        dec = linalg.eig_sym(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-15)

    def test_reconstruction_oracle(self):
        rng = np.random.default_rng(7)
        a = random_symmetric(rng, 20)
        dec = linalg.eig_sym(a)
        norm_a = linalg.spectral_norm(a)
        assert linalg.spectral_norm(dec.reconstruct() - a) <= 1e-10 * norm_a

    def test_orthonormality(self):
        rng = np.random.default_rng(8)
        a = random_symmetric(rng, 15)
        dec = linalg.eig_sym(a)
        gram = dec.eigenvectors.T @ dec.eigenvectors
        assert np.abs(gram - np.eye(15)).max() <= linalg.tol_eig(a)

    def test_rejects_nonfinite(self):
        bad = np.array([[1.0, np.nan], [np.nan, 1.0]])
        with pytest.raises(NonFinite):
            linalg.eig_sym(bad)

    def test_rejects_nonsquare(self):
        with pytest.raises(DimensionMismatch):
            linalg.eig_sym(np.zeros((2, 3)))

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        a = random_symmetric(rng, 12)
        d1 = linalg.eig_sym(a)
        d2 = linalg.eig_sym(a.copy())
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)


class TestSpectralNorm:
    def test_zero(self):
        assert linalg.spectral_norm(np.zeros((4, 4))) == 0.0

    def test_diagonal(self):
        assert linalg.spectral_norm(np.diag([-5.0, 2.0])) == 5.0

    def test_rank_one(self):
        v = np.array([2.0, 0.0, 0.0])
        v = v * (2.0 / np.linalg.norm(v))  # norm exactly 2
        assert linalg.spectral_norm(np.outer(v, v)) == pytest.approx(4.0, abs=1e-12)

    def test_rayleigh_lower_bound(self):
        rng = np.random.default_rng(11)
        a = random_symmetric(rng, 10)
        norm = linalg.spectral_norm(a)
        vs = rng.standard_normal((1000, 10))
        vs /= np.linalg.norm(vs, axis=1, keepdims=True)
        rayleigh = np.abs(np.einsum("ki,ij,kj->k", vs, a, vs)).max()
        assert norm >= rayleigh - 1e-12


class TestPsdOrder:
    def test_zero_below_identity(self):
        assert linalg.psd_dominates(np.zeros((3, 3)), np.eye(3), 0.0)

    def test_identity_not_below_zero(self):
        assert not linalg.psd_dominates(np.eye(3), np.zeros((3, 3)), 0.0)

    def test_tolerance_semantics(self):
        a = np.diag([1.0, 0.0])
        b = np.diag([1.0, 1e-12])
        assert linalg.psd_dominates(a, b, 1e-10)

    def test_reflexive(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = random_symmetric(rng, 6)
            assert linalg.psd_dominates(a, a, 1e-12)

    def test_transitive_chain(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = random_symmetric(rng, 6)
            b = a + _psd(rng, 6)
            c = b + _psd(rng, 6)
            assert linalg.psd_dominates(a, b, 1e-10)
            assert linalg.psd_dominates(b, c, 1e-10)
            assert linalg.psd_dominates(a, c, 2e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            linalg.psd_dominates(np.eye(2), np.eye(3), 0.0)


def _psd(rng, n):
    g = rng.standard_normal((n, n))
    return g @ g.T


class TestMatrixExp:
    def test_zero_gives_identity(self):
        np.testing.assert_allclose(linalg.matrix_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        out = linalg.matrix_exp(np.diag([np.log(2.0), 0.0]))
        np.testing.assert_allclose(out, np.diag([2.0, 1.0]), rtol=1e-14)

    def test_inverse_identity_oracle(self):
        rng = np.random.default_rng(5)
        a = random_symmetric(rng, 10)
        prod = linalg.matrix_exp(a) @ linalg.matrix_exp(-a)
        assert linalg.spectral_norm(prod - np.eye(10)) <= 1e-9

    def test_positive_spectrum(self):
        rng = np.random.default_rng(6)
        a = random_symmetric(rng, 8)
        assert np.linalg.eigvalsh(linalg.matrix_exp(a))[0] > 0


class TestEigenRangeProjector:
    def test_simple_interval(self):
        p = linalg.eigen_range_projector(np.diag([1.0, 3.0]), 0.5, 1.5)
        np.testing.assert_allclose(p.matrix, np.diag([1.0, 0.0]), atol=1e-14)
        assert p.rank == 1

    def test_full_range_identity_exact_diagonal(self):
        a = np.diag([-2.0, 0.5, 2.0])
        p = linalg.eigen_range_projector(a, -2.0, 2.0)
        np.testing.assert_allclose(p.matrix, np.eye(3))
        assert p.rank == 3

    def test_full_range_identity(self):
        # boundary comparison is exact by contract, so widen by one tolerance
        rng = np.random.default_rng(12)
        a = random_symmetric(rng, 7)
        width = linalg.spectral_norm(a) + linalg.tol_eig(a)
        p = linalg.eigen_range_projector(a, -width, width)
        np.testing.assert_allclose(p.matrix, np.eye(7), atol=1e-12)
        assert p.rank == 7

    def test_multiplicity(self):
        p = linalg.eigen_range_projector(np.diag([1.0, 1.0, 5.0]), 0.0, 2.0)
        np.testing.assert_allclose(p.matrix, np.diag([1.0, 1.0, 0.0]), atol=1e-14)
        assert p.rank == 2

    def test_projector_invariants(self):
        rng = np.random.default_rng(13)
        a = random_symmetric(rng, 9)
        p = linalg.eigen_range_projector(a, 0.0, 10.0).matrix
        tol = linalg.tol_eig(a)
        assert linalg.spectral_norm(p @ p - p) <= tol
        assert np.array_equal(p, p.T)

    def test_commutes_with_source(self):
        rng = np.random.default_rng(14)
        a = random_symmetric(rng, 9)
        p = linalg.eigen_range_projector(a, -0.5, 0.5).matrix
        norm = linalg.spectral_norm(a)
        assert linalg.spectral_norm(p @ a - a @ p) <= linalg.tol_eig(a) * max(norm, 1.0)

    def test_trace_equals_rank(self):
        rng = np.random.default_rng(15)
        a = random_symmetric(rng, 11)
        p = linalg.eigen_range_projector(a, 0.0, 3.0)
        assert abs(np.trace(p.matrix) - p.rank) <= linalg.tol_eig(a)


class TestInterlacing:
    def test_equal_inputs(self):
        a = np.diag([1.0, 2.0])
        assert linalg.interlacing_report(a, a) == (0.0, 0.0)

    def test_permuted_diagonals_coincide(self):
        gap, norm = linalg.interlacing_report(np.diag([0.0, 1.0]), np.diag([1.0, 0.0]))
        assert gap == pytest.approx(0.0, abs=1e-15)
        assert norm == pytest.approx(1.0)

    def test_exchange_vs_zero(self):
        gap, norm = linalg.interlacing_report(np.array([[0.0, 1.0], [1.0, 0.0]]), np.zeros((2, 2)))
        assert gap == pytest.approx(1.0)
        assert norm == pytest.approx(1.0)

    def test_random_pairs(self):
        rng = np.random.default_rng(16)
        for _ in range(100):
            n = int(rng.integers(2, 30))
            b1 = random_symmetric(rng, n, scale=rng.uniform(0.1, 5.0))
            b2 = b1 + random_symmetric(rng, n, scale=rng.uniform(0.0, 2.0))
            gap, norm = linalg.interlacing_report(b1, b2)
            assert gap <= norm + 1e-9


class TestGoldenThompson:
    def test_zero_pair(self):
        assert linalg.golden_thompson_report(np.zeros((3, 3)), np.zeros((3, 3))) == (3.0, 3.0)

    def test_commuting_equality(self):
        lhs, rhs = linalg.golden_thompson_report(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert lhs == pytest.approx(2.0 * np.e, rel=1e-12)
        assert rhs == pytest.approx(2.0 * np.e, rel=1e-12)

    def test_random_noncommuting(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            a = random_symmetric(rng, 8)
            b = random_symmetric(rng, 8)
            lhs, rhs = linalg.golden_thompson_report(a, b)
            assert lhs <= rhs + 1e-9 * max(abs(lhs), 1.0)


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, (6, 6), elements=st.floats(-3, 3)),
    arrays(np.float64, (6, 6), elements=st.floats(-3, 3)),
)
def test_interlacing_property(m1, m2):
    b1 = (m1 + m1.T) / 2.0
    b2 = (m2 + m2.T) / 2.0
    gap, norm = linalg.interlacing_report(b1, b2)
    assert gap <= norm + 1e-9


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, (5, 5), elements=st.floats(-2, 2)),
    arrays(np.float64, (5, 5), elements=st.floats(-2, 2)),
)
def test_golden_thompson_property(m1, m2):
    a = (m1 + m1.T) / 2.0
    b = (m2 + m2.T) / 2.0
    lhs, rhs = linalg.golden_thompson_report(a, b)
    assert lhs <= rhs + 1e-9 * max(abs(lhs), 1.0)
