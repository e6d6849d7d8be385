"""Hot loops for growth, subtree coding and incremental subgraph counting.

Every kernel is written once as plain Python over numpy arrays.  When numba is
importable and ``RRTLAB_DISABLE_NUMBA`` is unset (or ``0``), the public names are
bound to ``numba.njit`` compilations of those functions; otherwise they are
bound to the pure fallback, which for a few kernels is a separate vectorized
numpy implementation.  Both paths consume the same pre-drawn uniforms and
return identical arrays.

Conventions shared by all kernels:

* vertices are ``1..n``; arrays have length ``n + 1`` and slot 0 is unused;
* ``back[w, :]`` holds the older neighbours chosen by vertex ``w``
  (0 marks padding, or a self-loop in the fixed-denominator PA law);
* for trees ``parent = back[:, 0]`` and ``parent[1] == 0``.
"""
from __future__ import annotations

import os

import numpy as np

_FLAG = "RRTLAB_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get(_FLAG, "0") in ("", "0")

# name -> pure implementation (loop or vectorized); used by the benchmark and
# by the equivalence tests regardless of which path is active.
PURE: dict = {}
LOOPS: dict = {}


def _kernel(fn=None, *, fallback=None, name=None):
    """Register ``fn`` as a kernel and return the active implementation."""

    def wrap(f):
        key = name or f.__name__
        LOOPS[key] = f
        PURE[key] = fallback if fallback is not None else f
        if USE_NUMBA:
            return numba.njit(cache=True)(f)
        return PURE[key]

    return wrap(fn) if fn is not None else wrap


# --------------------------------------------------------------------------
# growth


def _seed_clique(back, m):
    for j in range(2, m + 2):
        for i in range(1, j):
            back[j, i - 1] = i


def _ua_attach_numpy(u, m):
    n = u.shape[0] - 1
    if m != 1:
        return _ua_attach_loop(u, m)
    back = np.zeros((n + 1, 1), dtype=np.int64)
    if n >= 2:
        w = np.arange(2, n + 1)
        back[2:, 0] = 1 + np.floor(u[2:, 0] * (w - 1)).astype(np.int64)
    return back


def _ua_attach_loop(u, m):
    n = u.shape[0] - 1
    back = np.zeros((n + 1, m), dtype=np.int64)
    _seed_clique(back, m)
    chosen = np.zeros(m, dtype=np.int64)
    for w in range(m + 2, n + 1):
        t = w - 1
        # Floyd's sampler: uniform m-subset of [t] from m uniforms
        k = 0
        for j in range(t - m + 1, t + 1):
            r = 1 + int(u[w, k] * j)
            seen = False
            for q in range(k):
                if chosen[q] == r:
                    seen = True
                    break
            chosen[k] = j if seen else r
            k += 1
        chosen.sort()
        for q in range(m):
            back[w, q] = chosen[q]
    return back


if USE_NUMBA:
    _seed_clique = numba.njit(cache=True)(_seed_clique)
# uniform attachment: ``back`` array from uniforms of shape (n+1, m)
ua_attach = _kernel(_ua_attach_loop, fallback=_ua_attach_numpy, name="ua_attach")


@_kernel
def pa_attach(u, m, fixed_denominator):
    """Preferential attachment with m independent degree-biased endpoint draws.

    Endpoints are sampled from an array holding both ends of every (multi)edge,
    so a draw is O(1).  With ``fixed_denominator`` the index is drawn from
    ``[0, 2*m*t)`` and indices past the live endpoints mean a self-loop.
    """
    n = u.shape[0] - 1
    cap = m * (m + 1) + 2 * m * max(n - m - 1, 0) + 2
    ends = np.zeros(cap, dtype=np.int64)
    back = np.zeros((n + 1, m), dtype=np.int64)
    size = 0
    for j in range(2, m + 2):
        for i in range(1, j):
            back[j, i - 1] = i
            ends[size] = i
            ends[size + 1] = j
            size += 2
    for w in range(m + 2, n + 1):
        t = w - 1
        live = size
        total = 2 * m * t if fixed_denominator else live
        for k in range(m):
            idx = int(u[w, k] * total)
            back[w, k] = ends[idx] if idx < live else 0
        for k in range(m):
            if back[w, k] > 0:
                ends[size] = w
                ends[size + 1] = back[w, k]
                size += 2
    return back


# --------------------------------------------------------------------------
# tree structure


@_kernel
def subtree_sizes(parent):
    """Subtree sizes of a recursive forest (``parent[t] < t``)."""
    n = parent.shape[0] - 1
    size = np.ones(n + 1, dtype=np.int64)
    size[0] = 0
    for t in range(n, 1, -1):
        p = parent[t]
        if p > 0:
            size[p] += size[t]
    return size


def _children_csr_numpy(parent):
    n = parent.shape[0] - 1
    kids = np.argsort(parent[2:], kind="stable").astype(np.int64) + 2
    counts = np.bincount(parent[2:], minlength=n + 1)[: n + 1]
    start = np.zeros(n + 2, dtype=np.int64)
    np.cumsum(counts, out=start[1:])
    return start, kids


@_kernel(fallback=_children_csr_numpy)
def children_csr(parent):
    """CSR children lists: kids[start[v]:start[v+1]] in increasing label order."""
    n = parent.shape[0] - 1
    start = np.zeros(n + 2, dtype=np.int64)
    for t in range(2, n + 1):
        start[parent[t] + 1] += 1
    for v in range(1, n + 2):
        start[v] += start[v - 1]
    fill = start.copy()
    kids = np.zeros(max(n - 1, 0), dtype=np.int64)
    for t in range(2, n + 1):
        p = parent[t]
        kids[fill[p]] = t
        fill[p] += 1
    return start, kids


@_kernel
def small_codes(start, kids, size, vmax):
    """Canonical codes of all subtrees with at most ``vmax`` vertices.

    A code is the balanced-parenthesis word read as bits ('(' = 1, ')' = 0),
    children ordered by increasing code value.  The leading 1 makes the value
    order equal to (length, word) order.  Larger subtrees get -1.  Requires
    ``vmax <= 31`` so codes fit in 62 bits.  Returns (codes, merged_children).
    """
    n = size.shape[0] - 1
    codes = np.full(n + 1, -1, dtype=np.int64)
    buf = np.zeros(max(vmax, 1), dtype=np.int64)
    lens = np.zeros(max(vmax, 1), dtype=np.int64)
    ops = 0
    for t in range(n, 0, -1):
        if size[t] > vmax:
            continue
        k = 0
        for q in range(start[t], start[t + 1]):
            c = kids[q]
            buf[k] = codes[c]
            lens[k] = 2 * size[c]
            k += 1
        order = np.argsort(buf[:k])
        ops += k
        code = 1
        for q in range(k):
            code = (code << lens[order[q]]) | buf[order[q]]
        codes[t] = code << 1
    return codes, ops


@_kernel
def windowed_count(parent, start, kids, size, pattern_parent, n0, r):
    """Count tuples n0+r < i_1 < ... < i_v whose hanging subtree is exactly
    {i_1..i_v}, attached to a vertex in [n0, n0+r), with j_s -> i_s an
    isomorphism of the labelled pattern (``pattern_parent`` is 1-based)."""
    n = parent.shape[0] - 1
    v = pattern_parent.shape[0] - 1
    verts = np.zeros(v + 1, dtype=np.int64)
    stack = np.zeros(v + 1, dtype=np.int64)
    count = 0
    for i1 in range(n0 + r + 1, n + 1):
        p = parent[i1]
        if p < n0 or p >= n0 + r or size[i1] != v:
            continue
        top = 0
        stack[0] = i1
        got = 0
        while top >= 0:
            x = stack[top]
            top -= 1
            got += 1
            verts[got] = x
            for q in range(start[x], start[x + 1]):
                top += 1
                stack[top] = kids[q]
        verts[1:] = np.sort(verts[1:])
        ok = True
        for s in range(2, v + 1):
            if parent[verts[s]] != verts[pattern_parent[s]]:
                ok = False
                break
        if ok:
            count += 1
    return count


# --------------------------------------------------------------------------
# incremental subgraph statistics


@_kernel
def diamond_trajectory(back, record):
    """Diamond counts X_w of a UA(., 2) history at the vertex counts in ``record``.

    Each arrival w attaching to {a, b} adds |N(a) & N(b)| diamonds when a ~ b.
    Common neighbours older than b are read from the back arrays; younger ones
    are exactly the vertices whose back pair is {a, b}, tracked in a counter.
    """
    n = back.shape[0] - 1
    key = n + 1
    pairs = dict()
    pairs[1 * key + 2] = 1
    out = np.zeros(record.shape[0], dtype=np.int64)
    k = 0
    while k < record.shape[0] and record[k] <= 3:
        k += 1
    x = 0
    for w in range(4, n + 1):
        a = back[w, 0]
        b = back[w, 1]
        if back[b, 0] == a or back[b, 1] == a:
            c = 0
            for y in back[a]:
                if y > 0 and (back[b, 0] == y or back[b, 1] == y):
                    c += 1
            for y in back[b]:
                if y > a and (back[y, 0] == a or back[y, 1] == a):
                    c += 1
            c += pairs.get(a * key + b, 0)
            x += c
        pairs[a * key + b] = pairs.get(a * key + b, 0) + 1
        while k < record.shape[0] and record[k] == w:
            out[k] = x
            k += 1
    return out


@_kernel
def clique_trajectory(back, m, record):
    """K_{m+1} counts of a UA(., m) history at the vertex counts in ``record``.

    The seed clique counts once; an arrival adds one new clique exactly when
    its m chosen neighbours are pairwise adjacent.
    """
    n = back.shape[0] - 1
    out = np.zeros(record.shape[0], dtype=np.int64)
    k = 0
    x = 0
    for w in range(1, n + 1):
        if w == m + 1:
            x = 1
        elif w > m + 1:
            full = True
            for p in range(m):
                for q in range(p + 1, m):
                    a = back[w, p]
                    b = back[w, q]
                    hit = False
                    for z in range(m):
                        if back[b, z] == a:
                            hit = True
                    if not hit:
                        full = False
            if full:
                x += 1
        while k < record.shape[0] and record[k] == w:
            out[k] = x
            k += 1
    return out


def warmup():
    """Compile every kernel once on tiny inputs."""
    u = np.full((6, 2), 0.5)
    back = ua_attach(u, 2)
    pa_attach(u, 2, False)
    diamond_trajectory(back, np.array([5], dtype=np.int64))
    clique_trajectory(back, 2, np.array([5], dtype=np.int64))
    parent = ua_attach(u[:, :1].copy(), 1)[:, 0].copy()
    size = subtree_sizes(parent)
    start, kids = children_csr(parent)
    small_codes(start, kids, size, 3)
    windowed_count(parent, start, kids, size, np.array([0, 0], dtype=np.int64), 1, 1)
