"""Dense real-symmetric linear algebra primitives.

Everything downstream (tail bounds, graph matrices, graphon estimates,
perturbation lemmas) manipulates symmetric matrices through the handful of
constructs implemented here: spectral decomposition, spectral norm, the
positive semi-definite order, the spectral-calculus exponential,
eigen-range projectors, eigenvalue interlacing and the Golden-Thompson
trace inequality.

Matrices are plain ``numpy`` float arrays; validation is explicit rather
than wrapped in a class.  All functions are pure and safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFinite,
    Overflow,
)

__all__ = [
    "SpectralDecomposition",
    "Projector",
    "symmetrize",
    "require_symmetric",
    "tol_eig",
    "eig_sym",
    "spectral_norm",
    "psd_dominates",
    "matrix_exp",
    "eigen_range_projector",
    "interlacing_report",
    "golden_thompson_report",
]


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Exactly symmetric copy of ``a`` (average with its transpose)."""
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


def require_symmetric(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Validate that ``a`` is a finite, square, symmetric 2-D array."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise NonFinite(f"{name} contains non-finite entries")
    if not np.array_equal(a, a.T):
        # tolerate representable round-off from upstream arithmetic, but
        # reject anything visibly asymmetric
        if np.abs(a - a.T).max() > 1e-12 * max(1.0, np.abs(a).max()):
            raise DimensionMismatch(f"{name} is not symmetric")
        a = symmetrize(a)
    return a


def tol_eig(a: np.ndarray) -> float:
    """Eigen-tolerance used throughout: 1e-10 * max(1, Frobenius norm)."""
    return 1e-10 * max(1.0, float(np.linalg.norm(a, "fro")))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray  # shape (n,), ascending
    eigenvectors: np.ndarray  # shape (n, n), column i pairs with eigenvalue i

    @property
    def order(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return symmetrize(v @ np.diag(self.eigenvalues) @ v.T)


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector onto a span of eigenvectors."""

    matrix: np.ndarray
    rank: int


def eig_sym(a: np.ndarray) -> SpectralDecomposition:
    """Full spectral decomposition of a symmetric matrix.

    Eigenvalues come back ascending (ties keep the solver's stable order);
    consumers must treat tied eigenvalues as interchangeable.
    """
    a = require_symmetric(a)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def _eigvals(a: np.ndarray) -> np.ndarray:
    a = require_symmetric(a)
    try:
        return np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(str(exc)) from exc


def spectral_norm(a: np.ndarray) -> float:
    """max_i |lambda_i(a)|, the operator norm of a symmetric matrix."""
    vals = _eigvals(a)
    if vals.size == 0:
        return 0.0
    return float(np.abs(vals).max())


def psd_dominates(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """True iff a <= b in the semi-definite order, up to ``tol``.

    Checks lambda_min(b - a) >= -tol.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"orders differ: {a.shape} vs {b.shape}")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    diff = require_symmetric(b - a, "b - a")
    return bool(_eigvals(diff)[0] >= -tol)


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """exp(a) by spectral calculus: V diag(e^{lambda_i}) V^T."""
    dec = eig_sym(a)
    evals = np.exp(dec.eigenvalues)
    if not np.isfinite(evals).all():
        raise Overflow("matrix exponential overflowed")
    v = dec.eigenvectors
    return symmetrize((v * evals) @ v.T)


def eigen_range_projector(a: np.ndarray, lo: float, hi: float) -> Projector:
    """Orthogonal projector onto eigenvectors with eigenvalues in [lo, hi].

    The interval is closed and the comparison is exact on the computed
    eigenvalues; callers wanting fuzz pass a widened interval.
    """
    if lo > hi:
        raise ValueError(f"empty interval: [{lo}, {hi}]")
    dec = eig_sym(a)
    mask = (dec.eigenvalues >= lo) & (dec.eigenvalues <= hi)
    vsel = dec.eigenvectors[:, mask]
    return Projector(matrix=symmetrize(vsel @ vsel.T), rank=int(mask.sum()))


def interlacing_report(b1: np.ndarray, b2: np.ndarray) -> tuple[float, float]:
    """(max sorted-eigenvalue gap, operator-norm gap) for a symmetric pair.

    Weyl interlacing guarantees the first is at most the second.
    """
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    if b1.shape != b2.shape:
        raise DimensionMismatch(f"orders differ: {b1.shape} vs {b2.shape}")
    gap = float(np.abs(_eigvals(b1) - _eigvals(b2)).max())
    return gap, spectral_norm(symmetrize(b1 - b2))


def golden_thompson_report(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """(Tr exp(a+b), Tr(exp(a) exp(b))); the first never exceeds the second."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"orders differ: {a.shape} vs {b.shape}")
    lhs = float(np.trace(matrix_exp(symmetrize(a + b))))
    rhs = float(np.trace(matrix_exp(a) @ matrix_exp(b)))
    if not (np.isfinite(lhs) and np.isfinite(rhs)):
        raise Overflow("trace of matrix exponential overflowed")
    return lhs, rhs
