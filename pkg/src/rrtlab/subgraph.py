"""Diamond and clique counts, the growth-step diamond increment, and the
extremal values g(k)."""
from __future__ import annotations

import itertools
import math

import numpy as np

from . import kernels
from .errors import DomainError
from .graphcore import LabeledGraph


def count_diamonds(g: LabeledGraph) -> int:
    """Number of 4-vertex sets inducing exactly 5 edges (K4 minus an edge).

    Every diamond has a unique adjacent pair of degree-3 vertices; for each edge
    ab we count non-adjacent pairs among the common neighbours of a and b.
    """
    adj = g.adjacency
    total = 0
    for a, b in g.edges:
        common = sorted(adj[a] & adj[b])
        for c, d in itertools.combinations(common, 2):
            if d not in adj[c]:
                total += 1
    return total


def count_cliques(g: LabeledGraph, size: int) -> int:
    """Number of vertex sets of the given size inducing a complete graph."""
    if size < 1:
        raise DomainError(f"clique size must be >= 1, got {size}")
    adj = g.adjacency
    count = 0

    def extend(cands: list[int], depth: int):
        nonlocal count
        if depth == size:
            count += 1
            return
        for i, x in enumerate(cands):
            extend([y for y in cands[i + 1 :] if y in adj[x]], depth + 1)

    extend(list(range(1, g.n + 1)), 0)
    return count


def diamond_delta(g: LabeledGraph, a: int, b: int) -> int:
    """Diamonds created when a new vertex is joined to exactly a and b."""
    na, nb = g.neighbors(a), g.neighbors(b)
    if a == b:
        raise DomainError("attachment pair must be two distinct vertices")
    if b not in na:
        return 0
    return len(na & nb)


def g_diamond(k: int) -> int:
    """Largest diamond count of UA(k, 2): C(k-2, 2)."""
    if k <= 3:
        raise DomainError(f"g_diamond needs k > 3, got {k}")
    return math.comb(k - 2, 2)


def g_clique(k: int, m: int) -> int:
    """Largest K_{m+1} count of UA(k, m): k - m."""
    if k <= m + 1:
        raise DomainError(f"g_clique needs k > m + 1, got k={k}, m={m}")
    return k - m


def diamond_counts(back: np.ndarray, record) -> np.ndarray:
    """Diamond counts of a UA(., 2) history at each vertex count in ``record``."""
    if back.shape[1] != 2:
        raise DomainError("diamond trajectories need m = 2")
    rec = np.asarray(sorted(record), dtype=np.int64)
    return kernels.diamond_trajectory(back, rec)


def clique_counts(back: np.ndarray, record) -> np.ndarray:
    """K_{m+1} counts of a UA(., m) history at each vertex count in ``record``."""
    rec = np.asarray(sorted(record), dtype=np.int64)
    return kernels.clique_trajectory(back, back.shape[1], rec)
