"""Inhomogeneous random graphs driven by a kernel on [0,1]^2.

Vertices carry i.i.d. uniform latent positions X_i; the pair (i, j) is an
edge with probability min(p * kappa(X_i, X_j), 1).  For p <= 1/sup(kappa)
no clipping occurs and A/(p n) estimates the integral operator of kappa:
its matrix counterpart is the cell-averaged embedding E T_kappa H, where H
maps coordinates to sorted-cell step functions and E is its adjoint.  On
the step-function coordinate system (orthonormal basis sqrt(n) * 1_cell)
both maps are realized by one permutation matrix, so their algebra is
exact.

The module covers: point sampling and ordering, the edge-probability
model, the sampled graph's step kernel (value 1/p on cells of edges), the
embedding matrices of a kernel and of its eigenprojections, operator and
cut norms of step kernels, the closed-form deviation budget
``2 eps + c (L + K) (ln n / n)^{1/4} + sqrt(K ln n / (p n))``, and a Monte
Carlo estimation report that ties all of it together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import rng as _rng
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    QuadratureFailure,
    TooLarge,
    Unsupported,
)
from .graphs import EdgeProbabilityModel, Graph, adjacency, sample_graph
from .linalg import eig_sym, eigen_range_projector, spectral_norm, symmetrize
from .perturbation import IntervalSet, dilate, multiplicity_count

__all__ = [
    "ConstantKernel",
    "RankOneKernel",
    "BlockKernel",
    "SmoothKernel",
    "PointSample",
    "StepKernel",
    "order_points",
    "sample_points",
    "model_inhomogeneous",
    "graph_step_kernel",
    "step_operator_norm",
    "embed_matrix",
    "embed_projector",
    "reference_spectrum",
    "cell_average_grid",
    "discretization_remainder",
    "theta_bound",
    "coordinate_embedding",
    "realized_eigenprojectors",
    "cut_norm_step",
    "norm_sandwich_check",
    "NormSandwich",
    "EigenvalueCheck",
    "EstimationTrial",
    "estimation_report",
    "CUT_NORM_MAX_N",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class ConstantKernel:
    """kappa(x, y) = c."""

    c: float

    def __post_init__(self):
        if self.c < 0:
            raise InvalidParameter("kernel values must be nonnegative")

    @property
    def sup_bound(self) -> float:
        return self.c

    @property
    def lipschitz(self) -> float:
        return 0.0

    def evaluate(self, x, y):
        return np.full(np.broadcast(x, y).shape, self.c)

    def embed_base(self, n: int) -> np.ndarray:
        return np.full((n, n), self.c / n)

    def l2_norm_sq(self) -> float:
        return self.c**2


@dataclass(frozen=True)
class RankOneKernel:
    """kappa(x, y) = coef * x^a * y^a, a separable product kernel."""

    coef: float
    exponent: float = 1.0

    def __post_init__(self):
        if self.coef < 0:
            raise InvalidParameter("kernel values must be nonnegative")
        if self.exponent < 0:
            raise InvalidParameter("exponent must be >= 0")

    @property
    def sup_bound(self) -> float:
        return self.coef

    @property
    def lipschitz(self) -> Optional[float]:
        a = self.exponent
        if a == 0:
            return 0.0
        if a >= 1:
            return self.coef * a * math.sqrt(2.0)
        return None  # gradient blows up at 0 for 0 < a < 1

    def evaluate(self, x, y):
        return self.coef * np.asarray(x, float) ** self.exponent * np.asarray(y, float) ** self.exponent

    def _cell_moments(self, n: int) -> np.ndarray:
        # integral of x^a over each cell ((k)/n, (k+1)/n]
        edges = np.arange(n + 1) / n
        powered = edges ** (self.exponent + 1.0)
        return np.diff(powered) / (self.exponent + 1.0)

    def embed_base(self, n: int) -> np.ndarray:
        m = self._cell_moments(n)
        return self.coef * n * np.outer(m, m)

    def l2_norm_sq(self) -> float:
        return (self.coef / (2.0 * self.exponent + 1.0)) ** 2

    def top_eigenvalue(self) -> float:
        # eigenfunction x^a, eigenvalue coef * integral of y^{2a}
        return self.coef / (2.0 * self.exponent + 1.0)


@dataclass(frozen=True)
class BlockKernel:
    """Piecewise-constant kernel on the uniform k x k partition of [0,1]^2."""

    values: np.ndarray  # (k, k) symmetric nonnegative

    def __post_init__(self):
        m = np.asarray(self.values, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidParameter("block values must be square")
        if not np.array_equal(m, m.T):
            raise InvalidParameter("block values must be symmetric")
        if (m < 0).any() or not np.isfinite(m).all():
            raise InvalidParameter("block values must be finite and nonnegative")
        object.__setattr__(self, "values", m)

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def sup_bound(self) -> float:
        return float(self.values.max())

    @property
    def lipschitz(self) -> Optional[float]:
        return None if (self.values != self.values[0, 0]).any() else 0.0

    def _block_index(self, x) -> np.ndarray:
        idx = np.ceil(np.asarray(x, float) * self.k).astype(int) - 1
        return np.clip(idx, 0, self.k - 1)

    def evaluate(self, x, y):
        bx, by = self._block_index(x), self._block_index(y)
        return self.values[bx, by]

    def _overlaps(self, n: int) -> np.ndarray:
        """(n, k) matrix of |cell intersect block| lengths."""
        cell_lo = np.arange(n) / n
        cell_hi = cell_lo + 1.0 / n
        blk_lo = np.arange(self.k) / self.k
        blk_hi = blk_lo + 1.0 / self.k
        lo = np.maximum(cell_lo[:, None], blk_lo[None, :])
        hi = np.minimum(cell_hi[:, None], blk_hi[None, :])
        return np.maximum(hi - lo, 0.0)

    def embed_base(self, n: int) -> np.ndarray:
        ov = self._overlaps(n)
        return n * symmetrize(ov @ self.values @ ov.T)

    def l2_norm_sq(self) -> float:
        return float((self.values**2).mean())


@dataclass(frozen=True)
class SmoothKernel:
    """Closed-form smooth kernel; embeddings use per-cell Gauss-Legendre."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    sup_bound: float
    lipschitz: Optional[float] = None
    name: str = "smooth"

    def evaluate(self, x, y):
        out = np.asarray(self.fn(np.asarray(x, float), np.asarray(y, float)), dtype=float)
        if not np.isfinite(out).all():
            raise QuadratureFailure(f"kernel {self.name} produced non-finite values")
        return out

    def _axis_nodes(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        # 8 Gauss-Legendre nodes per cell, flattened to n*8 points
        centers = (np.arange(n)[:, None] + (_GL_NODES[None, :] + 1.0) / 2.0) / n
        weights = np.tile(_GL_WEIGHTS / (2.0 * n), (n, 1))
        return centers.ravel(), weights.ravel()

    def embed_base(self, n: int, chunk: int = 256) -> np.ndarray:
        pts, wts = self._axis_nodes(n)
        out = np.empty((n, n))
        per = 8
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            rows = slice(start * per, stop * per)
            vals = self.evaluate(pts[rows][:, None], pts[None, :])
            contrib = (wts[rows][:, None] * vals) * wts[None, :]
            out[start:stop] = n * contrib.reshape(stop - start, per, n, per).sum(axis=(1, 3))
        return symmetrize(out)

    def l2_norm_sq(self, resolution: int = 64) -> float:
        pts, wts = self._axis_nodes(resolution)
        vals = self.evaluate(pts[:, None], pts[None, :])
        return float((wts[:, None] * vals**2 * wts[None, :]).sum())


Kernel = ConstantKernel | RankOneKernel | BlockKernel | SmoothKernel


@dataclass(frozen=True)
class PointSample:
    """Latent positions with their order statistics.

    raw[i] = sorted_values[sigma[i]]; sigma is the (0-based) rank of each
    point, ties broken by original index.
    """

    raw: np.ndarray
    sorted_values: np.ndarray
    sigma: np.ndarray

    @property
    def n(self) -> int:
        return self.raw.shape[0]


def order_points(raw: np.ndarray) -> PointSample:
    """Attach order statistics to given positions (stable tie-breaking)."""
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 1 or raw.size < 1:
        raise InvalidParameter("positions must form a nonempty 1-D array")
    if (raw < 0).any() or (raw > 1).any():
        raise InvalidParameter("positions must lie in [0, 1]")
    order = np.argsort(raw, kind="stable")
    sigma = np.empty(raw.size, dtype=int)
    sigma[order] = np.arange(raw.size)
    return PointSample(raw=raw, sorted_values=raw[order], sigma=sigma)


def sample_points(n: int, seed: int) -> PointSample:
    """n i.i.d. uniform positions, deterministic per seed."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return order_points(_rng.stream(seed).random(n))


@dataclass(frozen=True)
class StepKernel:
    """Function on [0,1]^2 constant on the uniform n x n grid of cells."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionMismatch("step-kernel values must be square")
        if not np.isfinite(v).all():
            raise InvalidParameter("step-kernel values must be finite")
        if not np.array_equal(v, v.T):
            raise InvalidParameter("step-kernel values must be symmetric")
        object.__setattr__(self, "values", v)

    @property
    def resolution(self) -> int:
        return self.values.shape[0]


def model_inhomogeneous(kernel: Kernel, pts: PointSample, p: float) -> EdgeProbabilityModel:
    """Edge probabilities min(p * kappa(X_i, X_j), 1); no clipping if p <= 1/K."""
    if not 0.0 < p <= 1.0:
        raise InvalidParameter("p must lie in (0, 1]")
    x = pts.raw
    prob = np.minimum(p * kernel.evaluate(x[:, None], x[None, :]), 1.0)
    return EdgeProbabilityModel(symmetrize(prob))


def graph_step_kernel(g: Graph, pts: PointSample, p: float) -> StepKernel:
    """Step kernel of a sampled graph: 1/p on cell (sigma(i), sigma(j)) per edge."""
    if g.n != pts.n:
        raise DimensionMismatch(f"graph has {g.n} vertices but sample has {pts.n}")
    if p <= 0:
        raise InvalidParameter("p must be > 0")
    inv = np.argsort(pts.sigma)
    values = adjacency(g)[np.ix_(inv, inv)] / p
    return StepKernel(values)


def step_operator_norm(sk: StepKernel) -> float:
    """Operator norm of a step kernel: ||values|| / n, exactly.

    The operator vanishes on functions with zero cell averages and acts as
    values/n on the cell-average coordinates, so no discretization error.
    """
    return spectral_norm(sk.values) / sk.resolution


def coordinate_embedding(pts: PointSample) -> np.ndarray:
    """Matrix of the coordinate-to-step-function map in the cell basis.

    Column i is e_{sigma(i)}: a permutation matrix.  Its transpose realizes
    the averaging (restriction) map, so restriction @ embedding = I exactly.
    """
    n = pts.n
    h = np.zeros((n, n))
    h[pts.sigma, np.arange(n)] = 1.0
    return h


def embed_matrix(kernel: Kernel, pts: PointSample) -> np.ndarray:
    """Matrix of embed-then-integrate-then-average: entry (i, j) is
    n * integral of kappa over cell(sigma(i)) x cell(sigma(j))."""
    base = kernel.embed_base(pts.n)
    return base[np.ix_(pts.sigma, pts.sigma)]


def cell_average_grid(kernel: Kernel, n: int) -> np.ndarray:
    """Cell means of the kernel on the uniform n x n grid (n^2 * integral)."""
    return n * kernel.embed_base(n)


def discretization_remainder(kernel: Kernel, n: int) -> float:
    """Upper bound on the operator distance between kappa and its cell means.

    The cell-mean step kernel is the L2 projection of kappa onto grid step
    functions, so the squared L2 distance is l2(kappa)^2 - l2(means)^2, and
    the operator norm is below the L2 norm.
    """
    d = cell_average_grid(kernel, n)
    return math.sqrt(max(kernel.l2_norm_sq() - float((d**2).mean()), 0.0))


def reference_spectrum(kernel: Kernel) -> list[tuple[float, int]]:
    """Nonzero eigenvalues (value, multiplicity) of the kernel's operator.

    Closed forms exist for constant, separable-product and block kernels;
    0 always remains in the spectrum with infinite multiplicity and is not
    listed.  Raises Unsupported for smooth kernels.
    """
    if isinstance(kernel, ConstantKernel):
        return [(kernel.c, 1)] if kernel.c != 0 else []
    if isinstance(kernel, RankOneKernel):
        top = kernel.top_eigenvalue()
        return [(top, 1)] if top != 0 else []
    if isinstance(kernel, BlockKernel):
        vals = np.linalg.eigvalsh(kernel.values / kernel.k)
        scale = max(1.0, float(np.abs(vals).max()))
        groups: list[list[float]] = []
        for lam in vals:
            if groups and abs(lam - groups[-1][-1]) <= 1e-9 * scale:
                groups[-1].append(lam)
            else:
                groups.append([lam])
        out = []
        for grp in groups:
            mean = float(np.mean(grp))
            if abs(mean) > 1e-12 * scale:
                out.append((mean, len(grp)))
        out.sort(key=lambda t: -t[0])
        return out
    raise Unsupported("no closed-form spectrum for smooth kernels")


def embed_projector(kernel: Kernel, alpha: float, pts: PointSample) -> np.ndarray:
    """Cell embedding of the eigenprojection of the kernel's operator at alpha.

    Same averaging as :func:`embed_matrix`, applied to the projector's own
    kernel (closed form for the three spectral kernel families).
    """
    n = pts.n
    ref = reference_spectrum(kernel)
    match = [v for (v, _) in ref if math.isclose(v, alpha, rel_tol=1e-9, abs_tol=1e-12)]
    if not match:
        raise InvalidParameter(f"alpha = {alpha} is not a reference eigenvalue")
    if isinstance(kernel, ConstantKernel):
        base = np.full((n, n), 1.0 / n)
    elif isinstance(kernel, RankOneKernel):
        a = kernel.exponent
        m = kernel._cell_moments(n)
        base = (2.0 * a + 1.0) * n * np.outer(m, m)
    else:  # BlockKernel
        k = kernel.k
        vals, vecs = np.linalg.eigh(kernel.values / k)
        scale = max(1.0, float(np.abs(vals).max()))
        sel = np.abs(vals - alpha) <= 1e-9 * scale
        u = vecs[:, sel]
        ov = kernel._overlaps(n)
        base = n * k * (ov @ u) @ (ov @ u).T
    return symmetrize(base[np.ix_(pts.sigma, pts.sigma)])


def theta_bound(
    eps: float, lipschitz: float, sup: float, n: float, p: float, c_const: float
) -> float:
    """Deviation budget 2 eps + c (L + K)(ln n / n)^{1/4} + sqrt(K ln n /(p n))."""
    if eps < 0 or lipschitz < 0 or c_const < 0:
        raise InvalidParameter("eps, lipschitz and c_const must be >= 0")
    if sup <= 0:
        raise InvalidParameter("sup bound must be > 0")
    if n <= 1:
        raise InvalidParameter("n must exceed 1")
    if not 0.0 < p <= 1.0:
        raise InvalidParameter("p must lie in (0, 1]")
    ln_n = math.log(n)
    return (
        2.0 * eps
        + c_const * (lipschitz + sup) * (ln_n / n) ** 0.25
        + math.sqrt(sup * ln_n / (p * n))
    )


def realized_eigenprojectors(
    a: np.ndarray, pts: PointSample, group_tol: Optional[float] = None
) -> list[tuple[float, np.ndarray]]:
    """Eigenprojections of a graph matrix carried onto step coordinates.

    Groups numerically coincident eigenvalues, forms each orthogonal
    eigenprojection, and conjugates by the coordinate embedding.  The
    results are orthogonal projections with mutually orthogonal ranges.
    """
    dec = eig_sym(a)
    if group_tol is None:
        group_tol = 1e-8 * max(1.0, float(np.abs(dec.eigenvalues).max()))
    h = coordinate_embedding(pts)
    out = []
    start = 0
    vals = dec.eigenvalues
    for k in range(1, vals.size + 1):
        if k == vals.size or vals[k] - vals[k - 1] > group_tol:
            vsel = dec.eigenvectors[:, start:k]
            proj = symmetrize(h @ (vsel @ vsel.T) @ h.T)
            out.append((float(np.mean(vals[start:k])), proj))
            start = k
    return out


CUT_NORM_MAX_N = 24  # 2^n row subsets, chunked


def cut_norm_step(sk: StepKernel) -> float:
    """Exact rectangle cut norm sup_{A,B} |integral over A x B| of a step kernel.

    Optimal A and B are unions of cells.  For each row subset S the best
    column set keeps the columns whose partial sums share a sign, so the
    enumeration is over the 2^n row subsets only, both signs taken.
    """
    n = sk.resolution
    if n > CUT_NORM_MAX_N:
        raise TooLarge(f"cut norm enumeration capped at n = {CUT_NORM_MAX_N}")
    v = sk.values
    best = 0.0
    chunk = 1 << 16
    for start in range(0, 1 << n, chunk):
        stop = min(start + chunk, 1 << n)
        masks = np.arange(start, stop, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(float)
        colsums = bits @ v
        pos = np.maximum(colsums, 0.0).sum(axis=1).max()
        neg = np.maximum(-colsums, 0.0).sum(axis=1).max()
        best = max(best, float(pos), float(neg))
    return best / (n * n)


@dataclass(frozen=True)
class NormSandwich:
    cut2: float
    cut_lower: float
    cut_upper: float
    op: float

    @property
    def consistent(self) -> bool:
        return self.op >= self.cut2 - 1e-12


def norm_sandwich_check(sk: StepKernel) -> NormSandwich:
    """Rectangle cut norm, the implied interval for the functional cut
    norm (within a factor 4), and the operator norm that dominates both."""
    cut2 = cut_norm_step(sk)
    return NormSandwich(
        cut2=cut2,
        cut_lower=cut2,
        cut_upper=4.0 * cut2,
        op=step_operator_norm(sk),
    )


@dataclass(frozen=True)
class EigenvalueCheck:
    """Per-reference-eigenvalue observations for one sampled graph."""

    alpha: float
    multiplicity: int
    gamma: float
    count_in_window: int
    max_error: float        # worst |eig - alpha| over the window, inf if empty
    transfer_forward: Optional[bool] = None
    transfer_backward: Optional[bool] = None
    projector_dev: Optional[float] = None
    projector_bound: Optional[float] = None


@dataclass(frozen=True)
class EstimationTrial:
    eigenvalues: np.ndarray              # spectrum of A / (p n), ascending
    matrix_dev: Optional[float] = None   # ||A/pn - embedding of kappa||
    operator_dev: Optional[float] = None  # step-kernel distance + remainder
    checks: tuple = ()


def _window_halfwidths(ref: Sequence[tuple[float, int]]) -> list[float]:
    # half the distance to the nearest other spectral value (0 included),
    # shrunk slightly so the 2*gamma isolation hypothesis holds strictly
    points = [0.0] + [v for (v, _) in ref]
    out = []
    for v, _ in ref:
        sep = min(abs(v - q) for q in points if q != v)
        out.append(0.49 * sep)
    return out


def estimation_report(
    kernel: Kernel,
    n: int,
    p: float,
    trials: int,
    seed: int,
    checks: Sequence[str] = ("matrix", "operator", "transfer", "projector"),
) -> list[EstimationTrial]:
    """Monte Carlo comparison of sampled graphs against their kernel.

    Per trial: draw positions and a graph, then record the rescaled
    spectrum plus any of four optional observations.

    "matrix":    ||A/(pn) - embed_matrix(kernel)||;
    "operator":  exact step-kernel distance to the cell-averaged kernel
                 plus the discretization remainder (an upper bound on the
                 operator-norm distance between the graph's step kernel
                 and the kernel's operator);
    "transfer":  both multiplicity-transfer inequalities between the
                 rescaled spectrum and the reference spectrum, dilating by
                 the "operator" distance;
    "projector": eigen-range projector of A around each isolated reference
                 eigenvalue versus the embedded reference projector, with
                 the bound 4 theta / (pi (gamma - theta)).

    Window half-widths gamma are derived from the reference spectrum's
    separations.  Requires a closed-form reference spectrum unless checks
    is empty or ("matrix",).
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    unknown = set(checks) - {"matrix", "operator", "transfer", "projector"}
    if unknown:
        raise InvalidParameter(f"unknown checks: {sorted(unknown)}")
    need_ops = bool({"operator", "transfer", "projector"} & set(checks))
    try:
        ref = reference_spectrum(kernel)
    except Unsupported:
        if {"transfer", "projector"} & set(checks):
            raise
        ref = []
    gammas = _window_halfwidths(ref)
    remainder = discretization_remainder(kernel, n) if need_ops else 0.0
    cell_means = cell_average_grid(kernel, n) if need_ops else None
    results = []
    for trial in range(trials):
        pts = sample_points(n, _rng.mix_seed(seed, 2 * trial))
        model = model_inhomogeneous(kernel, pts, p)
        g = sample_graph(model, _rng.mix_seed(seed, 2 * trial + 1))
        a = adjacency(g)
        scaled = np.linalg.eigvalsh(a) / (p * n)

        matrix_dev = None
        if "matrix" in checks:
            matrix_dev = spectral_norm(a / (p * n) - embed_matrix(kernel, pts))

        operator_dev = None
        if need_ops:
            sk = graph_step_kernel(g, pts, p)
            exact = spectral_norm(sk.values - cell_means) / n
            operator_dev = exact + remainder

        per_alpha = []
        for (alpha, mult), gamma in zip(ref, gammas):
            window = scaled[(scaled >= alpha - gamma) & (scaled <= alpha + gamma)]
            check = EigenvalueCheck(
                alpha=alpha,
                multiplicity=mult,
                gamma=gamma,
                count_in_window=int(window.size),
                max_error=float(np.abs(window - alpha).max()) if window.size else math.inf,
            )
            if "transfer" in checks and operator_dev is not None and gamma > operator_dev:
                s = IntervalSet([(alpha - gamma, alpha + gamma)])
                dilated = dilate(s, operator_dev)
                m_sample = multiplicity_count(scaled, s)
                m_ref = sum(m for (v, m) in ref if s.contains(v))
                m_ref_dilated = sum(m for (v, m) in ref if dilated.contains(v))
                check = replace(
                    check,
                    transfer_forward=m_sample <= m_ref_dilated,
                    transfer_backward=m_ref <= multiplicity_count(scaled, dilated),
                )
            if "projector" in checks:
                proj = eigen_range_projector(
                    a, (alpha - gamma) * p * n, (alpha + gamma) * p * n
                )
                dev = spectral_norm(proj.matrix - embed_projector(kernel, alpha, pts))
                bound = None
                if operator_dev is not None and operator_dev < gamma:
                    bound = 4.0 * operator_dev / (math.pi * (gamma - operator_dev))
                check = replace(check, projector_dev=dev, projector_bound=bound)
            per_alpha.append(check)
        results.append(
            EstimationTrial(
                eigenvalues=scaled,
                matrix_dev=matrix_dev,
                operator_dev=operator_dev,
                checks=tuple(per_alpha),
            )
        )
    return results
