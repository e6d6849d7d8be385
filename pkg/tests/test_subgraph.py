import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, naive_cliques, naive_diamonds, random_graph
from rrtlab.errors import DomainError
from rrtlab.graphcore import LabeledGraph
from rrtlab.subgraph import (
    clique_counts,
    count_cliques,
    count_diamonds,
    diamond_counts,
    diamond_delta,
    g_clique,
    g_diamond,
)
from rrtlab.treegen import GrowthConfig, back_to_graph, enumerate_histories, generate, ua_back

K3 = LabeledGraph.from_edges(3, [(1, 2), (1, 3), (2, 3)])


def test_count_diamonds_examples(diamond_graph):
    assert count_diamonds(K3) == 0
    assert count_diamonds(diamond_graph) == 1
    fan = LabeledGraph.from_edges(5, [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)])
    assert count_diamonds(fan) == 3 == g_diamond(5)


@given(graphs(max_n=9))
def test_count_diamonds_matches_naive(g):
    assert count_diamonds(g) == naive_diamonds(g)


@given(graphs(max_n=9), st.integers(1, 5))
def test_count_cliques_matches_naive(g, size):
    assert count_cliques(g, size) == naive_cliques(g, size)


def test_count_cliques_examples():
    k4 = LabeledGraph.from_edges(4, [(a, b) for a in range(1, 5) for b in range(a + 1, 5)])
    assert count_cliques(k4, 4) == 1
    for _, g, _ in enumerate_histories(5, 3, "UA"):
        assert count_cliques(g, 4) == 2
    tree = generate(GrowthConfig(n=50, seed=4))
    assert count_cliques(tree, 3) == 0
    with pytest.raises(DomainError):
        count_cliques(K3, 0)


def test_diamond_delta_examples():
    assert diamond_delta(K3, 1, 2) == 1
    path = LabeledGraph.from_edges(3, [(1, 2), (2, 3)])
    assert diamond_delta(path, 1, 3) == 0
    with pytest.raises(DomainError):
        diamond_delta(K3, 1, 4)
    with pytest.raises(DomainError):
        diamond_delta(K3, 1, 1)


def test_diamond_delta_matches_recount():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(2, 12))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.9)))
        a, b = (int(x) for x in rng.choice(np.arange(1, n + 1), size=2, replace=False))
        bigger = LabeledGraph.from_edges(n + 1, list(g.edges) + [(a, n + 1), (b, n + 1)])
        assert count_diamonds(bigger) == count_diamonds(g) + diamond_delta(g, a, b)


def test_g_values():
    assert g_diamond(4) == 1
    assert g_diamond(8) == 15
    assert g_clique(5, 3) == 2
    with pytest.raises(DomainError):
        g_diamond(3)
    with pytest.raises(DomainError):
        g_clique(4, 3)


@given(st.integers(4, 120), st.integers(0, 2**32))
def test_trajectory_matches_recount_and_is_monotone(n, seed):
    back = ua_back(n, 2, np.random.default_rng(seed))
    record = list(range(3, n + 1))
    traj = diamond_counts(back, record)
    assert all(a <= b for a, b in zip(traj, traj[1:]))
    for k in sorted({3, 4, max(3, n // 2), n}):
        g = back_to_graph(back[: k + 1], "UA", 2)
        assert traj[k - 3] == count_diamonds(g)
        if k >= 4:
            assert traj[k - 3] <= g_diamond(k)


@given(st.integers(2, 5), st.integers(0, 60), st.integers(0, 2**32))
def test_clique_trajectory_matches_recount(m, extra, seed):
    n = m + 1 + extra
    back = ua_back(n, m, np.random.default_rng(seed))
    traj = clique_counts(back, [m + 1, n])
    g = back_to_graph(back, "UA", m)
    assert traj[0] == 1
    assert traj[1] == count_cliques(g, m + 1)
    if n > m + 1:
        assert traj[1] <= g_clique(n, m)


def test_witness_attains_maxima():
    k = 9
    fan = LabeledGraph.from_edges(k, [(1, 2), *[(x, w) for w in range(3, k + 1) for x in (1, 2)]])
    assert count_diamonds(fan) == g_diamond(k) == math.comb(k - 2, 2)
    m = 3
    edges = [(a, b) for a in range(1, m + 2) for b in range(a + 1, m + 2)]
    edges += [(x, w) for w in range(m + 2, k + 1) for x in range(1, m + 1)]
    assert count_cliques(LabeledGraph.from_edges(k, edges), m + 1) == g_clique(k, m)


def test_diamond_trajectory_requires_m_two():
    back = ua_back(10, 3, np.random.default_rng(0))
    with pytest.raises(DomainError):
        diamond_counts(back, [10])
