"""Pendant copies of a rooted pattern in trees.

A tree has a pendant G_R when deleting some edge {u, v} leaves the component of
v, rooted at v, isomorphic to G_R.  Both orientations of every edge are
candidates.  Counting roots the tree once: the "down" components (subtrees) are
coded by the compiled kernel, restricted to subtrees no larger than the pattern;
the "up" component of a vertex c (everything except c's subtree, rooted at
c's parent) can only match when it has exactly v vertices, which happens for at
most one vertex once n > 2v, so those are coded directly.
"""
from __future__ import annotations

from collections import deque

import numpy as np

from . import kernels
from .errors import DomainError, NotATree
from .graphcore import LabeledGraph, RootedPattern, RootedTree, canonical_code, code_to_int

MAX_KERNEL_PATTERN = 31


def _recursive_form(t: LabeledGraph) -> tuple[np.ndarray, list[int]]:
    """Parent array in BFS order from vertex 1 (parents precede children)."""
    if not t.is_tree():
        raise NotATree("pendant counting needs a tree")
    order, parent = t.bfs_parents(1)
    pos = {x: i for i, x in enumerate(order, start=1)}
    par = np.zeros(t.n + 1, dtype=np.int64)
    for x in order[1:]:
        par[pos[x]] = pos[parent[x]]
    return par, order


def _complement_code(parent: np.ndarray, start: np.ndarray, kids: np.ndarray, cut: int) -> str:
    """Code of the tree minus the subtree of ``cut``, rooted at parent[cut]."""
    root = int(parent[cut])
    tree_parent = {}
    queue = deque([root])
    seen = {root, cut}
    while queue:
        x = queue.popleft()
        nbrs = [int(y) for y in kids[start[x] : start[x + 1]]]
        if parent[x] > 0:
            nbrs.append(int(parent[x]))
        for y in nbrs:
            if y not in seen:
                seen.add(y)
                tree_parent[y] = x
                queue.append(y)
    return canonical_code(RootedTree(root, tree_parent))


def count_pendants_parents(parent: np.ndarray, p: RootedPattern, stats: dict | None = None) -> int:
    """Pendant count for a tree given as a recursive parent array."""
    n = parent.shape[0] - 1
    v = p.v
    if v > MAX_KERNEL_PATTERN:
        raise DomainError(f"patterns are limited to {MAX_KERNEL_PATTERN} vertices")
    if n < 2:
        return 0
    size = kernels.subtree_sizes(parent)
    start, kids = kernels.children_csr(parent)
    codes, ops = kernels.small_codes(start, kids, size, v)
    target = code_to_int(p.code)
    down = int(np.count_nonzero(codes[2:] == target))
    up = 0
    cands = np.flatnonzero(size[2:] == n - v) + 2
    for c in cands:
        ops += v
        if _complement_code(parent, start, kids, int(c)) == p.code:
            up += 1
    if stats is not None:
        stats["code_merges"] = int(ops)
        stats["up_candidates"] = int(len(cands))
    return down + up


def count_pendants(t: LabeledGraph, p: RootedPattern, stats: dict | None = None) -> int:
    """Number of directed edges (u, v) whose v-side component, rooted at v,
    is isomorphic to the pattern."""
    parent, _ = _recursive_form(t)
    return count_pendants_parents(parent, p, stats)


def has_pendant(t: LabeledGraph, p: RootedPattern) -> bool:
    return count_pendants(t, p) > 0


def count_windowed_parents(parent: np.ndarray, p: RootedPattern, n0: int, r: int) -> int:
    n = parent.shape[0] - 1
    if n0 < 1 or r < 1:
        raise DomainError("need n0 >= 1 and r >= 1")
    if n0 + r + p.v > n:
        raise DomainError(f"need n0 + r + v <= n, got {n0} + {r} + {p.v} > {n}")
    size = kernels.subtree_sizes(parent)
    start, kids = kernels.children_csr(parent)
    pat = np.asarray(p.parent_index, dtype=np.int64)
    return int(kernels.windowed_count(parent, start, kids, size, pat, n0, r))


def count_windowed(t: LabeledGraph, p: RootedPattern, n0: int, r: int) -> int:
    """Tuples n0+r < i_1 < ... < i_v forming a pendant copy {i_1..i_v} whose
    cut edge joins i_1 to a vertex of [n0, n0 + r), with j_s -> i_s a labelled
    isomorphism.  ``t`` must carry arrival labels (every vertex but 1 has a
    unique older neighbour)."""
    if not t.is_tree():
        raise NotATree("windowed counting needs a tree")
    parent = np.zeros(t.n + 1, dtype=np.int64)
    for w in range(2, t.n + 1):
        older = [x for x in t.adjacency[w] if x < w]
        if len(older) != 1:
            raise DomainError("tree is not arrival-labelled")
        parent[w] = older[0]
    return count_windowed_parents(parent, p, n0, r)
