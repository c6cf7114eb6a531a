"""Numeric quasi-randomness checks for dense graphs.

For a density parameter p, a quasi-random graph sequence is characterized
by any of: edge count ~ p n^2/2 together with a labeled 4-cycle count
~ (pn)^4, a top adjacency eigenvalue ~ pn with all others o(n), small
subset discrepancy, or small operator-norm distance from the homogeneous
reference matrix p(J - I).  Finite n has no o(.), so every check takes an
explicit slack and the report carries raw margins.

Labeled 4-cycles use the distinct-vertex convention: ordered tuples
(v1,v2,v3,v4) of pairwise-distinct vertices that trace a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidParameter, LoopsUnsupported, TooLarge
from .graphs import Graph, adjacency
from .linalg import spectral_norm

__all__ = [
    "labeled_c4_count",
    "q3_check",
    "Q3Result",
    "p1_deviation",
    "q4_discrepancy",
    "prop42_forward_check",
    "QuasirandomReport",
    "quasirandom_report",
    "Q4_MAX_N",
]

Q4_MAX_N = 20  # subset enumeration is 2^n


def labeled_c4_count(g: Graph) -> int:
    """Number of labeled 4-cycles, via the closed-walk correction.

    Closed 4-walks split into back-and-forth walks through one center
    (2 * sum_v deg(v)^2 - 2|E| of them, counting both degenerate shapes)
    and genuine 4-cycles, so the count is Tr(A^4) - 2 sum_v deg(v)^2 + 2|E|.
    """
    if g.has_loops():
        raise LoopsUnsupported("labeled 4-cycle count is defined for loop-free graphs")
    a = adjacency(g).astype(np.int64)
    a2 = a @ a
    trace4 = int(np.trace(a2 @ a2))
    deg = a.sum(axis=1)
    return trace4 - 2 * int((deg * deg).sum()) + 2 * g.m


class Q3Result(NamedTuple):
    edges_ok: bool
    top_eigen_ok: bool
    bulk_ok: bool


def q3_check(g: Graph, p: float, slack: float) -> Q3Result:
    """Eigenvalue form of quasi-randomness with explicit slack.

    edges_ok:     |E| >= (1 - slack) p n^2 / 2
    top_eigen_ok: |lambda_max - p n| <= slack * n
    bulk_ok:      every other |lambda_i| <= slack * n
    """
    if not 0.0 < p < 1.0:
        raise InvalidParameter("p must lie in (0, 1)")
    if slack < 0:
        raise InvalidParameter("slack must be >= 0")
    n = g.n
    vals = np.linalg.eigvalsh(adjacency(g))
    edges_ok = g.m >= (1.0 - slack) * p * n * n / 2.0
    top_ok = abs(vals[-1] - p * n) <= slack * n
    bulk_ok = bool(np.abs(vals[:-1]).max() <= slack * n) if n > 1 else True
    return Q3Result(bool(edges_ok), bool(top_ok), bulk_ok)


def p1_deviation(g: Graph, p: float) -> float:
    """Operator-norm distance ||A - p(J - I)|| from the homogeneous reference."""
    if not 0.0 < p < 1.0:
        raise InvalidParameter("p must lie in (0, 1)")
    n = g.n
    reference = p * (np.ones((n, n)) - np.eye(n))
    return spectral_norm(adjacency(g) - reference)


def _subset_edge_counts(g: Graph) -> np.ndarray:
    """e(S) for every S subset of [n], indexed by bitmask.

    Incremental over the lowest set bit: adding vertex v to S contributes
    its edges into S plus its loop.
    """
    n = g.n
    nbr = [0] * n  # non-loop neighbor bitmasks
    loops = [0] * n
    for (i, j) in g.edges:
        if i == j:
            loops[i] = 1
        else:
            nbr[i] |= 1 << j
            nbr[j] |= 1 << i
    counts = np.zeros(1 << n, dtype=np.int64)
    for s in range(1, 1 << n):
        v = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        counts[s] = counts[rest] + (nbr[v] & rest).bit_count() + loops[v]
    return counts


def q4_discrepancy(g: Graph, p: float) -> float:
    """Exact max over all vertex subsets of |e(S) - p |S|^2 / 2|."""
    if g.n > Q4_MAX_N:
        raise TooLarge(f"subset enumeration capped at n = {Q4_MAX_N}")
    counts = _subset_edge_counts(g)
    sizes = np.array([s.bit_count() for s in range(1 << g.n)], dtype=np.int64)
    return float(np.abs(counts - p * sizes.astype(float) ** 2 / 2.0).max())


def prop42_forward_check(g: Graph, p: float, slack: float) -> bool:
    """Check the arithmetic chain from matrix concentration to eigenvalue form.

    If ||A - p(J-I)|| <= slack*n then eigenvalue interlacing against the
    reference spectrum {p(n-1)} + {-p} forces
       |lambda_max - p n| <= slack*n + p,
       |lambda_i|        <= slack*n + p   for i < n-1,
       |E| >= p n (n-1)/2 - n * dev / 2.
    Returns True when the implication holds (vacuously if the premise fails).
    """
    dev = p1_deviation(g, p)
    n = g.n
    if dev > slack * n:
        return True
    vals = np.linalg.eigvalsh(adjacency(g))
    top_ok = abs(vals[-1] - p * n) <= slack * n + p
    bulk_ok = bool(np.abs(vals[:-1]).max() <= slack * n + p) if n > 1 else True
    edges_ok = g.m >= p * n * (n - 1) / 2.0 - n * dev / 2.0
    return bool(top_ok and bulk_ok and edges_ok)


@dataclass(frozen=True)
class QuasirandomReport:
    n: int
    edge_count: int
    labeled_c4: int
    lambda_max: float
    second_eigen_absmax: float
    p1_dev: float
    q4_disc: Optional[float] = None


def quasirandom_report(g: Graph, p: float, include_q4: bool = False) -> QuasirandomReport:
    """Collect the numeric quasi-randomness statistics for one graph."""
    vals = np.linalg.eigvalsh(adjacency(g))
    return QuasirandomReport(
        n=g.n,
        edge_count=g.m,
        labeled_c4=labeled_c4_count(g),
        lambda_max=float(vals[-1]),
        second_eigen_absmax=float(np.abs(vals[:-1]).max()) if g.n > 1 else 0.0,
        p1_dev=p1_deviation(g, p),
        q4_disc=q4_discrepancy(g, p) if include_q4 else None,
    )
