"""Spectral perturbation checks for symmetric matrices.

Two executable facts about eps-close symmetric operators, both used to
transfer spectral statements from a typical matrix to a sampled one:

* multiplicity transfer: if ||V - W|| <= eps and S stays more than eps away
  from 0, then counting eigenvalues of V in S is dominated by counting
  eigenvalues of W in the eps-dilation of S;
* projector stability: if the spectrum of V avoids gamma-neighborhoods of
  both interval endpoints, then
  ||P_[a,b](V) - P_[a,b](W)|| <= (b - a + 2 gamma) eps / (pi (gamma^2 - gamma eps)).

The projector bound's proof mechanism, the resolvent integral
(1/2 pi i) oint (zI - M)^{-1} dz over a rectangle, is implemented as an
actual quadrature so it can be compared with the direct eigenvector-sum
projector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import HypothesisViolated, InvalidParameter, SingularResolvent
from .linalg import eig_sym, eigen_range_projector, spectral_norm, symmetrize

__all__ = [
    "IntervalSet",
    "multiplicity_count",
    "dilate",
    "multiplicity_lemma_check",
    "projector_perturbation_bound",
    "projector_lemma_check",
    "ProjectorCheck",
    "contour_projector",
    "random_multiplicity_instance",
    "random_projector_instance",
    "random_contour_instance",
]


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint closed intervals on the real line, normalized on creation."""

    intervals: tuple

    def __init__(self, intervals: Sequence[tuple]):
        pairs = sorted((float(a), float(b)) for (a, b) in intervals)
        for (a, b) in pairs:
            if a > b:
                raise InvalidParameter(f"interval [{a}, {b}] is empty")
        merged: list[tuple] = []
        for (a, b) in pairs:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "intervals", tuple(merged))

    def contains(self, x: float) -> bool:
        return any(a <= x <= b for (a, b) in self.intervals)

    def inf_abs(self) -> float:
        """Distance from 0 to the set (0 if the set straddles the origin)."""
        best = math.inf
        for (a, b) in self.intervals:
            best = min(best, 0.0 if a <= 0.0 <= b else min(abs(a), abs(b)))
        return best


def multiplicity_count(spectrum: Sequence[float], s: IntervalSet) -> int:
    """Number of listed eigenvalues lying in the set (exact comparison)."""
    return sum(1 for lam in spectrum if s.contains(float(lam)))


def dilate(s: IntervalSet, eps: float) -> IntervalSet:
    """Each [a, b] widens to [a - eps, b + eps]; overlaps merge."""
    if eps < 0:
        raise InvalidParameter("eps must be >= 0")
    return IntervalSet([(a - eps, b + eps) for (a, b) in s.intervals])


def multiplicity_lemma_check(
    v: np.ndarray, w: np.ndarray, s: IntervalSet
) -> tuple[bool, bool]:
    """Both directions of the multiplicity-transfer inequality.

    With eps = ||v - w||, requires inf_{x in S} |x| > eps and checks
    m_v(S) <= m_w(S^eps) and m_w(S) <= m_v(S^eps).
    """
    eps = spectral_norm(symmetrize(np.asarray(v, float) - np.asarray(w, float)))
    if s.inf_abs() <= eps:
        raise HypothesisViolated(
            f"S must stay farther than eps = {eps} from 0, got inf |s| = {s.inf_abs()}"
        )
    spec_v = np.linalg.eigvalsh(np.asarray(v, float))
    spec_w = np.linalg.eigvalsh(np.asarray(w, float))
    dilated = dilate(s, eps)
    forward = multiplicity_count(spec_v, s) <= multiplicity_count(spec_w, dilated)
    backward = multiplicity_count(spec_w, s) <= multiplicity_count(spec_v, dilated)
    return forward, backward


def projector_perturbation_bound(a: float, b: float, gamma: float, eps: float) -> float:
    """(b - a + 2 gamma) eps / (pi (gamma^2 - gamma eps)); diverges as eps -> gamma."""
    if not a < b:
        raise InvalidParameter("need a < b")
    if not a + gamma < b - gamma:
        raise InvalidParameter("need a + gamma < b - gamma")
    if not gamma > eps >= 0:
        raise InvalidParameter("need gamma > eps >= 0")
    return (b - a + 2.0 * gamma) * eps / (math.pi * (gamma * gamma - gamma * eps))


class ProjectorCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def projector_lemma_check(
    v: np.ndarray,
    w: np.ndarray,
    a: float,
    b: float,
    gamma: float,
    tol: float = 1e-9,
) -> ProjectorCheck:
    """Measured projector distance against its closed-form bound.

    Requires the spectrum of ``v`` to avoid (a-gamma, a+gamma) and
    (b-gamma, b+gamma), and ||v - w|| < gamma.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    spec_v = np.linalg.eigvalsh(v)
    for lam in spec_v:
        if a - gamma < lam < a + gamma or b - gamma < lam < b + gamma:
            raise HypothesisViolated(
                f"eigenvalue {lam} lies within gamma = {gamma} of an interval endpoint"
            )
    eps = spectral_norm(symmetrize(v - w))
    if eps >= gamma:
        raise HypothesisViolated(f"||v - w|| = {eps} must be below gamma = {gamma}")
    lhs = spectral_norm(
        eigen_range_projector(v, a, b).matrix - eigen_range_projector(w, a, b).matrix
    )
    rhs = projector_perturbation_bound(a, b, gamma, eps)
    return ProjectorCheck(lhs, rhs, lhs <= rhs + tol)


def _rectangle_sides(a: float, b: float, gamma: float) -> list[tuple[complex, complex]]:
    # counterclockwise, starting from the bottom edge
    return [
        (complex(a, -gamma), complex(b, -gamma)),
        (complex(b, -gamma), complex(b, gamma)),
        (complex(b, gamma), complex(a, gamma)),
        (complex(a, gamma), complex(a, -gamma)),
    ]


def contour_projector(
    m: np.ndarray, a: float, b: float, gamma: float, quad_points: int
) -> np.ndarray:
    """Spectral projector as a resolvent contour integral.

    Integrates (1/2 pi i) (zI - m)^{-1} counterclockwise around the
    rectangle with corners a +- i gamma, b +- i gamma using a composite
    trapezoid rule with ``quad_points`` intervals per side.  The resolvent
    is applied spectrally, so the only error is quadrature error; the
    result converges to the direct eigen-range projector for [a, b].
    """
    if quad_points < 16:
        raise InvalidParameter("quad_points must be >= 16 per side")
    if not a < b:
        raise InvalidParameter("need a < b")
    if gamma <= 0:
        raise InvalidParameter("need gamma > 0")
    dec = eig_sym(m)
    lam = dec.eigenvalues
    coeff = np.zeros(lam.shape[0], dtype=complex)
    for z0, z1 in _rectangle_sides(a, b, gamma):
        nodes = z0 + (z1 - z0) * np.arange(quad_points + 1) / quad_points
        dist = np.abs(nodes[:, None] - lam[None, :])
        if dist.min() < 1e-8:
            raise SingularResolvent("quadrature node within 1e-8 of an eigenvalue")
        weights = np.full(quad_points + 1, (z1 - z0) / quad_points, dtype=complex)
        weights[0] /= 2.0
        weights[-1] /= 2.0
        coeff += (weights[:, None] / (nodes[:, None] - lam[None, :])).sum(axis=0)
    coeff /= 2.0j * math.pi
    v = dec.eigenvectors
    return symmetrize((v * coeff.real) @ v.T)


def _random_orthogonal(gen: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(gen.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _matrix_with_spectrum(gen: np.random.Generator, spec: np.ndarray) -> np.ndarray:
    q = _random_orthogonal(gen, spec.size)
    return symmetrize((q * spec) @ q.T)


def _random_perturbation(gen: np.random.Generator, n: int, norm: float) -> np.ndarray:
    e = symmetrize(gen.standard_normal((n, n)))
    return e * (norm / spectral_norm(e))


def random_multiplicity_instance(
    gen: np.random.Generator, max_order: int = 40
) -> tuple[np.ndarray, np.ndarray, IntervalSet]:
    """Random (V, W, S) satisfying the multiplicity-transfer hypothesis.

    The interval set keeps a strict margin above ||V - W|| from the origin.
    """
    n = int(gen.integers(2, max_order + 1))
    v = symmetrize(gen.standard_normal((n, n)))
    eps = float(gen.uniform(0.01, 0.5))
    w = v + _random_perturbation(gen, n, eps)
    intervals = []
    for _ in range(int(gen.integers(1, 3))):
        sign = 1.0 if gen.random() < 0.5 else -1.0
        lo = eps * float(gen.uniform(1.2, 3.0))
        hi = lo + float(gen.uniform(0.1, 2.0))
        intervals.append((sign * hi, sign * lo) if sign < 0 else (lo, hi))
    return v, w, IntervalSet(intervals)


def random_projector_instance(
    gen: np.random.Generator, max_order: int = 40
) -> tuple[np.ndarray, np.ndarray, float, float, float]:
    """Random (V, W, a, b, gamma) with planted spectral gaps at a and b.

    V's eigenvalues avoid gamma-neighborhoods of both endpoints and
    ||V - W|| stays below gamma, so the projector bound applies.
    """
    n = int(gen.integers(3, max_order + 1))
    a, b = -1.0, 1.0
    gamma = float(gen.uniform(0.15, 0.45))
    pad = 1.05 * gamma
    regions = [(-3.0, a - pad), (a + pad, b - pad), (b + pad, 3.0)]
    weights = np.array([0.3, 0.4, 0.3])
    counts = gen.multinomial(n, weights)
    while counts[1] == 0:  # keep the target interval populated
        counts = gen.multinomial(n, weights)
    spec = np.concatenate(
        [gen.uniform(lo, hi, size=c) for (lo, hi), c in zip(regions, counts)]
    )
    v = _matrix_with_spectrum(gen, np.sort(spec))
    eps = gamma * float(gen.uniform(0.05, 0.85))
    w = v + _random_perturbation(gen, n, eps)
    return v, w, a, b, gamma


def random_contour_instance(
    gen: np.random.Generator, max_order: int = 20
) -> tuple[np.ndarray, float, float, float]:
    """Random (M, a, b, gamma) with all eigenvalues well clear of the contour."""
    n = int(gen.integers(2, max_order + 1))
    a, b, gamma = -1.0, 1.0, 0.5
    margin = 0.3
    regions = [(-2.5, a - margin), (a + margin, b - margin), (b + margin, 2.5)]
    counts = gen.multinomial(n, np.array([0.25, 0.5, 0.25]))
    while counts[1] == 0:
        counts = gen.multinomial(n, np.array([0.25, 0.5, 0.25]))
    spec = np.concatenate(
        [gen.uniform(lo, hi, size=c) for (lo, hi), c in zip(regions, counts)]
    )
    return _matrix_with_spectrum(gen, np.sort(spec)), a, b, gamma
