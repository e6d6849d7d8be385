import itertools
from collections import defaultdict

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_isomorphic, graphs, parent_arrays
from rrtlab.errors import DomainError, NotATree
from rrtlab.graphcore import (
    LabeledGraph,
    RootedPattern,
    RootedTree,
    canonical_code,
    code_key,
    code_to_int,
    make_pattern,
    rooted_isomorphic,
)

# rooted trees (unlabelled) on v vertices, v = 1..7
ROOTED_TREE_COUNTS = [1, 1, 2, 4, 9, 20, 48]


def all_parent_arrays(v):
    return itertools.product(*[range(1, s) for s in range(2, v + 1)])


def test_graph_validation():
    with pytest.raises(DomainError):
        LabeledGraph(0, frozenset())
    with pytest.raises(DomainError):
        LabeledGraph(3, frozenset({(2, 1)}))
    with pytest.raises(DomainError):
        LabeledGraph.from_edges(3, [(2, 2)])
    with pytest.raises(DomainError):
        LabeledGraph(3, frozenset(), model_tag="BA")
    g = LabeledGraph.from_edges(3, [(2, 1), (1, 2), (3, 2)])
    assert g.edges == {(1, 2), (2, 3)}
    with pytest.raises(DomainError):
        g.neighbors(4)


@given(graphs(max_n=9))
def test_text_round_trip(g):
    assert LabeledGraph.from_text(g.to_text()) == g


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 1\n", "3 1\n2 1\n", "3 1\n1 4\n", "3 2\n1 2\n1 2\n", "3 1\n1 2 3\n"],
)
def test_text_rejects_malformed(text):
    with pytest.raises(ValueError):
        LabeledGraph.from_text(text)


def test_tree_predicates():
    path = LabeledGraph.from_edges(4, [(1, 2), (2, 3), (3, 4)])
    assert path.is_tree() and path.is_connected()
    assert not LabeledGraph.from_edges(4, [(1, 2), (3, 4)]).is_connected()
    assert not LabeledGraph.from_edges(3, [(1, 2), (2, 3), (1, 3)]).is_tree()
    assert LabeledGraph(1, frozenset()).is_tree()


def test_rooted_tree_validation():
    with pytest.raises(DomainError):
        RootedTree(1, {2: 3, 3: 2})
    with pytest.raises(DomainError):
        RootedTree(1, {2: 5})
    with pytest.raises(DomainError):
        RootedTree(1, {1: 2})
    with pytest.raises(DomainError):
        RootedTree.parse("0 2")
    with pytest.raises(DomainError):
        RootedTree.parse("1 1")
    with pytest.raises(NotATree):
        RootedTree.from_graph(LabeledGraph.from_edges(3, [(1, 2)]), 1)


def test_single_vertex_code():
    code = canonical_code(RootedTree(1))
    assert code == "()"
    assert len(code) == 2


def test_path_rooted_at_end_vs_middle():
    end = RootedTree("a", {"b": "a", "c": "b"})
    mid = RootedTree("b", {"a": "b", "c": "b"})
    assert canonical_code(end) != canonical_code(mid)
    assert not brute_isomorphic("a", dict(end.parent), "b", dict(mid.parent))


def test_star_code_ignores_child_order():
    a = RootedTree(0, {1: 0, 2: 0, 3: 0})
    b = RootedTree(0, {3: 0, 1: 0, 2: 0})
    c = RootedTree(9, {7: 9, 8: 9, 6: 9})
    assert canonical_code(a) == canonical_code(b) == canonical_code(c)


def test_rooted_isomorphic_examples():
    assert rooted_isomorphic(RootedTree(1), RootedTree("x"))
    path = RootedTree.parse("0 1 2")
    cherry = RootedTree.parse("0 1 1")
    assert not rooted_isomorphic(path, cherry)
    relabelled = RootedTree("r", {"q": "r", "z": "q"})
    assert rooted_isomorphic(path, relabelled)


@pytest.mark.slow
def test_codes_match_bijection_isomorphism_up_to_seven_vertices():
    for v in range(1, 8):
        classes = defaultdict(list)
        for tail in all_parent_arrays(v):
            t = RootedTree.from_parent_array((0,) + tail)
            code = canonical_code(t)
            assert len(code) == 2 * v
            classes[code].append(t)
        assert len(classes) == ROOTED_TREE_COUNTS[v - 1]
        reps = [members[0] for members in classes.values()]
        for members in classes.values():
            rep = members[0]
            for t in members[1:]:
                assert brute_isomorphic(rep.root, rep.parent, t.root, t.parent)
        for a, b in itertools.combinations(reps, 2):
            assert not brute_isomorphic(a.root, a.parent, b.root, b.parent)


@given(parent_arrays(max_v=30), st.randoms(use_true_random=False))
def test_code_invariant_under_relabelling(parents, rnd):
    t = RootedTree.from_parent_array(parents)
    labels = list(range(100, 100 + t.order))
    rnd.shuffle(labels)
    f = dict(zip(t.vertices, labels))
    u = RootedTree(f[t.root], {f[c]: f[p] for c, p in t.parent.items()})
    assert canonical_code(u) == canonical_code(t)


@given(parent_arrays(max_v=20), parent_arrays(max_v=20))
def test_code_order_matches_integer_order(a, b):
    ca = canonical_code(RootedTree.from_parent_array(a))
    cb = canonical_code(RootedTree.from_parent_array(b))
    assert (code_key(ca) < code_key(cb)) == (code_to_int(ca) < code_to_int(cb))


def test_pattern_weights_hand_examples():
    single = make_pattern(RootedTree(1))
    assert single.weights == () and single.D == 1
    path = RootedPattern.parse("0 1 2")
    assert path.weights == (1, 1) and path.D == 1
    star = RootedPattern.parse("0 1 1")
    assert star.weights == (1, 2) and star.D == 2
    assert star.parent_index == (0, 0, 1, 1)


def _admissible(p: RootedPattern) -> bool:
    t = p.tree
    seen = {p.labelling[0]}
    for x in p.labelling[1:]:
        if t.parent[x] not in seen:
            return False
        seen.add(x)
    return p.labelling[0] == t.root


def _weights_by_definition(t: RootedTree, labelling) -> tuple:
    adj = defaultdict(set)
    for c, par in t.parent.items():
        adj[c].add(par)
        adj[par].add(c)
    out = []
    for ell in range(1, len(labelling)):
        earlier = set(labelling[:ell])
        (x,) = adj[labelling[ell]] & earlier
        out.append(len(adj[x] & earlier) + (1 if x == labelling[0] else 0))
    return tuple(out)


@given(parent_arrays(max_v=25), st.randoms(use_true_random=False))
def test_make_pattern_invariants(parents, rnd):
    # relabel so the BFS labelling is not simply 1..v
    t0 = RootedTree.from_parent_array(parents)
    labels = list(range(t0.order))
    rnd.shuffle(labels)
    f = dict(zip(t0.vertices, labels))
    t = RootedTree(f[t0.root], {f[c]: f[p] for c, p in t0.parent.items()})
    p = make_pattern(t)
    assert _admissible(p)
    assert p.weights == _weights_by_definition(t, p.labelling)
    assert p.D >= 1


def _admissible_labellings(t: RootedTree):
    kids = t.children

    def rec(prefix, frontier):
        if not frontier:
            yield tuple(prefix)
            return
        for x in sorted(frontier):
            yield from rec(prefix + [x], (frontier - {x}) | set(kids[x]))

    yield from rec([t.root], set(kids[t.root]))


@pytest.mark.slow
def test_D_independent_of_admissible_labelling():
    for v in range(1, 8):
        seen_codes = set()
        for tail in all_parent_arrays(v):
            t = RootedTree.from_parent_array((0,) + tail)
            code = canonical_code(t)
            if code in seen_codes:
                continue
            seen_codes.add(code)
            ds = {RootedPattern.from_labelling(t, lab).D for lab in _admissible_labellings(t)}
            assert len(ds) == 1, (code, ds)


def test_from_labelling_rejects_inadmissible():
    t = RootedTree.parse("0 1 2")
    with pytest.raises(DomainError):
        RootedPattern.from_labelling(t, (1, 3, 2))
    with pytest.raises(DomainError):
        RootedPattern.from_labelling(t, (2, 1, 3))
    with pytest.raises(DomainError):
        RootedPattern.from_labelling(t, (1, 2))
