"""Random graphs with independent edges and their typical matrices.

A model assigns each unordered pair (loops allowed) an inclusion
probability.  Sampling a graph includes each pair independently; the
"typical" adjacency/Laplacian are those of the weighted graph whose edge
weights are the probabilities.  The deviation experiment measures how far
sampled matrices land from the typical ones and compares against the
closed-form high-probability bounds

    adjacency:  4 * sqrt(Delta * ln(n/delta))        (Delta = max typical degree)
    Laplacian: 14 * sqrt(ln(4n/delta) / d)           (d = min typical degree)

valid for delta in (0, 1/2].  Bond percolation (keep each edge of a base
graph with probability p) is the special case prob = p on the edge set; its
typical adjacency is p*A and its typical Laplacian is exactly the base
Laplacian.

Conventions follow the degree definition deg(i) = sum_j w(i,j): a loop adds
1 to its endpoint's degree and puts a 1 on the adjacency diagonal, and an
isolated vertex gets T(i,i) = 0 so its Laplacian row is literally L(i,i)=1
(not zeroed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import rng as _rng
from .errors import DimensionMismatch, InvalidParameter, IoError, ZeroDegree
from .linalg import spectral_norm, symmetrize

__all__ = [
    "Graph",
    "EdgeProbabilityModel",
    "DeviationReport",
    "complete_graph",
    "model_erdos_renyi",
    "model_percolation",
    "sample_graph",
    "adjacency",
    "laplacian",
    "laplacian_from_adjacency",
    "typical_adjacency",
    "typical_laplacian",
    "adjacency_bound",
    "laplacian_bound",
    "deviation_experiment",
    "failure_fraction",
    "spectral_gap",
    "chung_horn_reference",
    "write_graph",
    "read_graph",
]


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 0..n-1; edges are pairs (i, j), i <= j."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("graph needs at least one vertex")
        for (i, j) in self.edges:
            if not (0 <= i <= j < self.n):
                raise InvalidParameter(f"edge ({i},{j}) out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_loops(self) -> bool:
        return any(i == j for (i, j) in self.edges)

    def edge_array(self) -> np.ndarray:
        """(m, 2) integer array of edges; empty graphs give shape (0, 2)."""
        if not self.edges:
            return np.empty((0, 2), dtype=int)
        return np.array(sorted(self.edges), dtype=int)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n)
        e = self.edge_array()
        np.add.at(deg, e[:, 0], 1.0)
        off = e[:, 0] != e[:, 1]
        np.add.at(deg, e[off, 1], 1.0)
        return deg


def complete_graph(n: int) -> Graph:
    """K_n, no loops."""
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


@dataclass(frozen=True)
class EdgeProbabilityModel:
    """Symmetric inclusion probabilities for all pairs (i, j) in [n]^2."""

    prob: np.ndarray  # (n, n) symmetric, entries in [0, 1]

    def __post_init__(self):
        p = np.asarray(self.prob, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DimensionMismatch("prob must be a square matrix")
        if not np.isfinite(p).all():
            raise InvalidParameter("prob contains non-finite entries")
        if (p < 0).any() or (p > 1).any():
            raise InvalidParameter("probabilities must lie in [0, 1]")
        if not np.array_equal(p, p.T):
            raise InvalidParameter("prob must be symmetric")
        object.__setattr__(self, "prob", p)

    @property
    def n(self) -> int:
        return self.prob.shape[0]

    def typical_degrees(self) -> np.ndarray:
        return self.prob.sum(axis=1)

    @property
    def d_min(self) -> float:
        return float(self.typical_degrees().min())

    @property
    def d_max(self) -> float:
        return float(self.typical_degrees().max())


def model_erdos_renyi(n: int, p: float) -> EdgeProbabilityModel:
    """Homogeneous model: probability p off the diagonal, no loops."""
    if n < 2:
        raise InvalidParameter("n must be >= 2")
    if not 0.0 < p < 1.0:
        raise InvalidParameter("p must lie in (0, 1)")
    prob = np.full((n, n), p)
    np.fill_diagonal(prob, 0.0)
    return EdgeProbabilityModel(prob)


def model_percolation(g: Graph, p: float) -> EdgeProbabilityModel:
    """Bond percolation: keep each edge of ``g`` with probability p."""
    if not 0.0 < p < 1.0:
        raise InvalidParameter("p must lie in (0, 1)")
    return EdgeProbabilityModel(p * adjacency(g))


def sample_graph(model: EdgeProbabilityModel, seed: int) -> Graph:
    """One independent-edge sample, deterministic per seed.

    Pairs (i <= j) are visited in row-major order, each consuming one
    uniform draw; this fixes the seed-to-graph map.
    """
    n = model.n
    iu, ju = np.triu_indices(n)
    u = _rng.stream(seed).random(iu.size)
    keep = u < model.prob[iu, ju]
    edges = frozenset((int(i), int(j)) for i, j in zip(iu[keep], ju[keep]))
    return Graph(n, edges)


def adjacency(g: Graph) -> np.ndarray:
    """0/1 adjacency matrix; a loop puts 1 on the diagonal."""
    a = np.zeros((g.n, g.n))
    e = g.edge_array()
    a[e[:, 0], e[:, 1]] = 1.0
    a[e[:, 1], e[:, 0]] = 1.0
    return a


def laplacian_from_adjacency(a: np.ndarray, degrees: np.ndarray) -> np.ndarray:
    """I - T A T with T = diag(deg^{-1/2}), zero where the degree is zero."""
    with np.errstate(divide="ignore"):
        t = np.where(degrees > 0, 1.0 / np.sqrt(np.maximum(degrees, 1e-300)), 0.0)
    return symmetrize(np.eye(a.shape[0]) - (t[:, None] * a) * t[None, :])


def laplacian(g: Graph) -> np.ndarray:
    """Normalized Laplacian of an unweighted graph; spectrum lies in [0, 2]."""
    return laplacian_from_adjacency(adjacency(g), g.degrees())


def typical_adjacency(model: EdgeProbabilityModel) -> np.ndarray:
    """Weighted adjacency with entries prob(i, j)."""
    return model.prob.copy()


def typical_laplacian(model: EdgeProbabilityModel) -> np.ndarray:
    """Weighted Laplacian of the typical graph; needs all typical degrees > 0."""
    deg = model.typical_degrees()
    if deg.min() <= 0:
        raise ZeroDegree("typical degree is zero; Laplacian undefined")
    return laplacian_from_adjacency(model.prob, deg)


def adjacency_bound(delta_max: float, n: int, delta: float) -> float:
    """4 * sqrt(Delta * ln(n / delta)) for delta in (0, 1/2]."""
    if delta_max <= 0:
        raise InvalidParameter("Delta must be > 0")
    if not 0.0 < delta <= 0.5:
        raise InvalidParameter("delta must lie in (0, 1/2]")
    if n < 2:
        raise InvalidParameter("n must be >= 2")
    return 4.0 * math.sqrt(delta_max * math.log(n / delta))


def laplacian_bound(d_min: float, n: int, delta: float) -> float:
    """14 * sqrt(ln(4n / delta) / d) for delta in (0, 1/2]."""
    if d_min <= 0:
        raise InvalidParameter("d must be > 0")
    if not 0.0 < delta <= 0.5:
        raise InvalidParameter("delta must lie in (0, 1/2]")
    if n < 2:
        raise InvalidParameter("n must be >= 2")
    return 14.0 * math.sqrt(math.log(4.0 * n / delta) / d_min)


@dataclass(frozen=True)
class DeviationReport:
    """One trial of the deviation experiment."""

    n: int
    d_min: float
    d_max: float
    delta: float
    observed: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.observed <= self.bound


def deviation_experiment(
    model: EdgeProbabilityModel,
    delta: float,
    trials: int,
    seed: int,
    which: str,
) -> list[DeviationReport]:
    """Sampled-vs-typical matrix deviations over independent trials.

    ``which`` selects "adjacency" (bound uses the max typical degree) or
    "laplacian" (bound uses the min typical degree, which must be positive).
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    if which not in ("adjacency", "laplacian"):
        raise InvalidParameter(f"which must be 'adjacency' or 'laplacian', got {which!r}")
    n = model.n
    if which == "adjacency":
        typical = typical_adjacency(model)
        bound = adjacency_bound(model.d_max, n, delta)
    else:
        typical = typical_laplacian(model)
        bound = laplacian_bound(model.d_min, n, delta)
    reports = []
    for k in range(trials):
        g = sample_graph(model, _rng.mix_seed(seed, k))
        sampled = adjacency(g) if which == "adjacency" else laplacian(g)
        observed = spectral_norm(sampled - typical)
        reports.append(
            DeviationReport(
                n=n,
                d_min=model.d_min,
                d_max=model.d_max,
                delta=delta,
                observed=observed,
                bound=bound,
            )
        )
    return reports


def failure_fraction(reports: Iterable[DeviationReport]) -> float:
    reports = list(reports)
    return sum(not r.within_bound for r in reports) / len(reports)


def spectral_gap(g: Graph) -> float:
    """min(second-smallest Laplacian eigenvalue, 2 - largest)."""
    if g.n < 2:
        raise InvalidParameter("spectral gap needs at least 2 vertices")
    vals = np.linalg.eigvalsh(laplacian(g))
    return float(min(vals[1], 2.0 - vals[-1]))


def chung_horn_reference(
    n: int, p: float, d_g: float, constants: Sequence[float]
) -> float:
    """Reference spectral-gap error term with caller-supplied constants:

    c1 * sqrt(ln n / (p d)) + c2 * (ln n)^{3/2} / (p d (ln ln n)^{3/2}).
    """
    if n < 3:
        raise InvalidParameter("n must be >= 3 so ln ln n is defined")
    if p * d_g <= 0:
        raise InvalidParameter("p * d must be > 0")
    c1, c2 = constants
    ln_n = math.log(n)
    return c1 * math.sqrt(ln_n / (p * d_g)) + c2 * ln_n**1.5 / (
        p * d_g * math.log(ln_n) ** 1.5
    )


def write_graph(g: Graph, path) -> None:
    """Plain-text graph file: "n m" then one "i j" line per edge (1-based)."""
    lines = [f"{g.n} {g.m}"]
    for (i, j) in sorted(g.edges):
        lines.append(f"{i + 1} {j + 1}")
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write graph file {path}: {exc}") from exc


def read_graph(path) -> Graph:
    """Inverse of :func:`write_graph`; round-trips exactly."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            tokens = fh.read().split()
    except OSError as exc:
        raise IoError(f"cannot read graph file {path}: {exc}") from exc
    if len(tokens) < 2:
        raise IoError(f"graph file {path} is truncated")
    n, m = int(tokens[0]), int(tokens[1])
    if len(tokens) != 2 + 2 * m:
        raise IoError(f"graph file {path}: expected {m} edges, found {(len(tokens) - 2) // 2}")
    edges = set()
    for k in range(m):
        i, j = int(tokens[2 + 2 * k]) - 1, int(tokens[3 + 2 * k]) - 1
        if not 0 <= i <= j < n:
            raise IoError(f"graph file {path}: bad edge line {i + 1} {j + 1}")
        edges.add((i, j))
    return Graph(n, frozenset(edges))
