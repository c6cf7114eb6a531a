"""Matrix tail bounds and their Monte Carlo validation.

Two closed-form bounds on ``lambda_max`` of a sum of bounded random
symmetric matrices are provided:

* the matrix Freedman bound ``d * exp(-t^2 / (8 sigma^2 + 4 M t))`` where
  ``sigma^2`` bounds the largest eigenvalue of the predictable quadratic
  variation and ``M`` the increment norms, plus its two-sided variant with
  the extra factor 2;
* a matrix Hoeffding bound of Chernoff/entropy type,
  ``d * exp(-n * H_{R/n}((R+t)/n))`` with
  ``H_r(x) = x ln(x/r) + (1-x) ln((1-x)/(1-r))``.

A small family of mean-zero increment generators (diagonal Rademacher,
signed rank-one, centered Bernoulli edge) drives the empirical side: the
simulator builds martingale traces and the tail estimator compares observed
exceedance frequencies against the closed forms.  Bounds larger than 1 are
reported as-is, never clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import rng as _rng
from .errors import (
    DimensionMismatch,
    DomainError,
    InvalidParameter,
    NormTooLarge,
    NotPSD,
)
from .linalg import (
    matrix_exp,
    psd_dominates,
    require_symmetric,
    spectral_norm,
    symmetrize,
    tol_eig,
)

__all__ = [
    "freedman_bound",
    "freedman_bound_two_sided",
    "cm_hoeffding_bound",
    "independent_sum_sigma2",
    "DiagonalRademacher",
    "RankOneSign",
    "BernoulliCenteredEdge",
    "MartingaleTrace",
    "simulate_martingale",
    "TailRow",
    "empirical_tail",
    "exp_quadratic_dominance_check",
    "monte_carlo_slack",
]


def freedman_bound(d: int, t: float, sigma2: float, M: float) -> float:
    """One-sided tail bound d * exp(-t^2 / (8 sigma2 + 4 M t))."""
    if d < 1 or int(d) != d:
        raise InvalidParameter(f"d must be a positive integer, got {d}")
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t}")
    if sigma2 <= 0:
        raise InvalidParameter(f"sigma2 must be > 0, got {sigma2}")
    if M <= 0:
        raise InvalidParameter(f"M must be > 0, got {M}")
    return d * math.exp(-(t * t) / (8.0 * sigma2 + 4.0 * M * t))


def freedman_bound_two_sided(d: int, t: float, sigma2: float, M: float) -> float:
    """Norm-tail variant: 2 * d * exp(-t^2 / (8 sigma2 + 4 M t))."""
    return 2.0 * freedman_bound(d, t, sigma2, M)


def cm_hoeffding_bound(d: int, t: float, n: int, R: float) -> float:
    """Entropy-form Hoeffding bound d * exp(-n * H_{R/n}((R+t)/n)).

    Requires 0 < R/n < 1 and 0 < (R+t)/n < 1; equals d at t = 0.
    """
    if d < 1 or int(d) != d:
        raise InvalidParameter(f"d must be a positive integer, got {d}")
    if n < 1 or int(n) != n:
        raise InvalidParameter(f"n must be a positive integer, got {n}")
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t}")
    r = R / n
    x = (R + t) / n
    if not 0.0 < r < 1.0:
        raise DomainError(f"R/n must lie in (0,1), got {r}")
    if not 0.0 < x < 1.0:
        raise DomainError(f"(R+t)/n must lie in (0,1), got {x}")
    entropy = x * math.log(x / r) + (1.0 - x) * math.log((1.0 - x) / (1.0 - r))
    return d * math.exp(-n * entropy)


def independent_sum_sigma2(second_moments: Sequence[np.ndarray]) -> float:
    """lambda_max of the summed per-increment second moments.

    Each input must be symmetric PSD (within its eigen-tolerance) and all
    must share one order.
    """
    mats = [require_symmetric(m, f"second_moments[{k}]") for k, m in enumerate(second_moments)]
    if not mats:
        raise InvalidParameter("second_moments must be nonempty")
    order = mats[0].shape
    for k, m in enumerate(mats):
        if m.shape != order:
            raise DimensionMismatch(f"second_moments[{k}] has order {m.shape}, expected {order}")
        lam_min = float(np.linalg.eigvalsh(m)[0])
        if lam_min < -tol_eig(m):
            raise NotPSD(f"second_moments[{k}] has lambda_min = {lam_min}")
    total = symmetrize(np.sum(mats, axis=0))
    return float(np.linalg.eigvalsh(total)[-1])


def _pair_matrix(d: int, i: int, j: int) -> np.ndarray:
    """e_i e_j^T + e_j e_i^T for i != j, e_i e_i^T for a loop."""
    m = np.zeros((d, d))
    if i == j:
        m[i, i] = 1.0
    else:
        m[i, j] = 1.0
        m[j, i] = 1.0
    return m


@dataclass(frozen=True)
class DiagonalRademacher:
    """Diagonal increments with independent unbiased +-scale entries."""

    d: int
    scale: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameter("d must be >= 1")
        if self.scale <= 0:
            raise InvalidParameter("scale must be > 0")

    @property
    def dimension(self) -> int:
        return self.d

    def bound(self) -> float:
        return self.scale

    def second_moment(self) -> np.ndarray:
        return self.scale**2 * np.eye(self.d)

    def _sample_signs(self, gen: np.random.Generator, n_steps: int) -> np.ndarray:
        return (gen.integers(0, 2, size=(n_steps, self.d)) * 2 - 1).astype(float)

    def sample_increments(self, gen: np.random.Generator, n_steps: int) -> np.ndarray:
        signs = self._sample_signs(gen, n_steps)
        out = np.zeros((n_steps, self.d, self.d))
        idx = np.arange(self.d)
        out[:, idx, idx] = self.scale * signs
        return out

    def sample_sum_lambda_max(self, gen: np.random.Generator, n_steps: int) -> float:
        # the d diagonal slots are independent +-1 walks
        signs = self._sample_signs(gen, n_steps)
        return float(self.scale * signs.sum(axis=0).max())


@dataclass(frozen=True)
class RankOneSign:
    """Increments +-scale * u u^T for one fixed unit vector u.

    The direction u is drawn once from ``vector_seed`` and then frozen, so
    two generators with equal parameters are identical.
    """

    d: int
    vector_seed: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameter("d must be >= 1")
        if self.scale <= 0:
            raise InvalidParameter("scale must be > 0")

    @property
    def dimension(self) -> int:
        return self.d

    def direction(self) -> np.ndarray:
        g = _rng.stream(self.vector_seed).standard_normal(self.d)
        return g / np.linalg.norm(g)

    def bound(self) -> float:
        return self.scale

    def second_moment(self) -> np.ndarray:
        u = self.direction()
        return self.scale**2 * np.outer(u, u)

    def sample_increments(self, gen: np.random.Generator, n_steps: int) -> np.ndarray:
        u = self.direction()
        signs = (gen.integers(0, 2, size=n_steps) * 2 - 1).astype(float)
        return self.scale * signs[:, None, None] * np.outer(u, u)[None, :, :]

    def sample_sum_lambda_max(self, gen: np.random.Generator, n_steps: int) -> float:
        signs = (gen.integers(0, 2, size=n_steps) * 2 - 1).astype(float)
        return float(self.scale * max(signs.sum(), 0.0))


@dataclass(frozen=True)
class BernoulliCenteredEdge:
    """Increments scale * (B - p) * (e_i e_j^T + e_j e_i^T), B ~ Bernoulli(p)."""

    d: int
    i: int
    j: int
    p: float
    scale: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameter("d must be >= 1")
        if not (0 <= self.i < self.d and 0 <= self.j < self.d):
            raise InvalidParameter("edge endpoints must lie in [0, d)")
        if not 0.0 < self.p < 1.0:
            raise InvalidParameter("p must lie in (0,1)")
        if self.scale <= 0:
            raise InvalidParameter("scale must be > 0")

    @property
    def dimension(self) -> int:
        return self.d

    def bound(self) -> float:
        return self.scale * max(self.p, 1.0 - self.p)

    def second_moment(self) -> np.ndarray:
        a = _pair_matrix(self.d, self.i, self.j)
        return self.scale**2 * self.p * (1.0 - self.p) * (a @ a)

    def sample_increments(self, gen: np.random.Generator, n_steps: int) -> np.ndarray:
        a = _pair_matrix(self.d, self.i, self.j)
        draws = (gen.random(n_steps) < self.p).astype(float) - self.p
        return self.scale * draws[:, None, None] * a[None, :, :]

    def sample_sum_lambda_max(self, gen: np.random.Generator, n_steps: int) -> float:
        draws = (gen.random(n_steps) < self.p).astype(float) - self.p
        s = self.scale * draws.sum()
        # e_i e_j^T + e_j e_i^T has eigenvalues +-1 (i != j) or 1 (loop)
        return float(max(s, 0.0) if self.i == self.j else abs(s))


@dataclass(frozen=True)
class MartingaleTrace:
    """Increments, partial sums, and predictable quadratic variation."""

    dimension: int
    increments: np.ndarray      # (n_steps, d, d)
    partial_sums: np.ndarray    # (n_steps + 1, d, d); index 0 is the zero matrix
    quad_variation: np.ndarray  # W_n = sum of conditional second moments
    bound_M: float

    @property
    def n_steps(self) -> int:
        return self.increments.shape[0]

    def final_sum(self) -> np.ndarray:
        return self.partial_sums[-1]


def simulate_martingale(gen, n_steps: int, seed: int) -> MartingaleTrace:
    """Simulate one martingale trace of ``n_steps`` independent increments.

    Deterministic for fixed (generator, n_steps, seed).  For independent
    increments the conditional second moment is the unconditional one, so
    the quadratic variation is ``n_steps * E[X^2]``.
    """
    if n_steps < 1:
        raise InvalidParameter("n_steps must be >= 1")
    stream = _rng.stream(seed)
    increments = gen.sample_increments(stream, n_steps)
    partial = np.concatenate(
        [np.zeros((1, gen.dimension, gen.dimension)), np.cumsum(increments, axis=0)]
    )
    return MartingaleTrace(
        dimension=gen.dimension,
        increments=increments,
        partial_sums=partial,
        quad_variation=n_steps * gen.second_moment(),
        bound_M=gen.bound(),
    )


class TailRow(NamedTuple):
    threshold: float
    empirical_prob: float
    freedman_value: float


def analytic_sigma2(gen, n_steps: int) -> float:
    """Exact lambda_max of the quadratic variation after ``n_steps`` steps."""
    return n_steps * float(np.linalg.eigvalsh(gen.second_moment())[-1])


def empirical_tail(
    gen,
    n_steps: int,
    trials: int,
    thresholds: Sequence[float],
    seed: int,
) -> list[TailRow]:
    """Observed P(lambda_max(Z_n) >= t) next to the closed-form bound.

    The bound is evaluated at the generator's exact quadratic-variation
    maximum, so its conditioning event holds with probability one.  Trial k
    uses the stream derived from (seed, k); rerunning is bit-identical.
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    sigma2 = analytic_sigma2(gen, n_steps)
    maxima = np.empty(trials)
    for k in range(trials):
        maxima[k] = gen.sample_sum_lambda_max(_rng.trial_stream(seed, k), n_steps)
    rows = []
    for t in thresholds:
        prob = float(np.mean(maxima >= t))
        rows.append(TailRow(float(t), prob, freedman_bound(gen.dimension, t, sigma2, gen.bound())))
    return rows


def monte_carlo_slack(bound: float, trials: int) -> float:
    """3-sigma binomial slack for comparing a frequency against ``bound``."""
    b = min(max(bound, 0.0), 1.0)
    return 3.0 * math.sqrt(b * (1.0 - b) / trials)


def exp_quadratic_dominance_check(c: np.ndarray, tol: float = 1e-9) -> tuple[bool, float]:
    """Check exp(c) <= I + c + c^2 in the semi-definite order for ||c|| <= 1.

    Returns (holds, slack) where slack = lambda_min(I + c + c^2 - exp(c));
    the statement is exactly the nonnegativity of slack.
    """
    c = require_symmetric(c, "c")
    if spectral_norm(c) > 1.0 + 1e-12:
        raise NormTooLarge("||c|| must be at most 1")
    upper = np.eye(c.shape[0]) + c + c @ c
    holds = psd_dominates(matrix_exp(c), upper, tol)
    slack = float(np.linalg.eigvalsh(symmetrize(upper - matrix_exp(c)))[0])
    return holds, slack
