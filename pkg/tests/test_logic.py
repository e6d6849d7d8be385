import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, naive_diamonds, random_graph, union_find_connected
from rrtlab.errors import BudgetExceeded
from rrtlab.graphcore import LabeledGraph
from rrtlab.logic import (
    Adj,
    And,
    Const,
    Eq,
    Exists,
    ExistsSet,
    Forall,
    ForallSet,
    Iff,
    Implies,
    LogicSyntaxError,
    Mem,
    Not,
    Or,
    build_at_least_diamonds,
    build_complete,
    build_disconnected,
    estimate_cost,
    evaluate,
    miniscope,
    parse_sentence,
    to_text,
)
from rrtlab.subgraph import count_diamonds
from rrtlab.treegen import GrowthConfig, generate

COMPLETE = "forall x forall y (!(x = y) -> x ~ y)"
DISCONNECTED = "exists X (exists x X(x) & exists x !X(x) & forall x forall y ((X(x) & !X(y)) -> !(x ~ y)))"

K3 = LabeledGraph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
P3 = LabeledGraph.from_edges(3, [(1, 2), (2, 3)])


def reference_eval(f, g, env=None):
    """Textbook recursive semantics, no rewriting and no compilation."""
    env = env or {}
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Adj):
        return g.has_edge(env[f.x], env[f.y]) if env[f.x] != env[f.y] else False
    if isinstance(f, Eq):
        return env[f.x] == env[f.y]
    if isinstance(f, Mem):
        return env[f.x] in env[f.X]
    if isinstance(f, Not):
        return not reference_eval(f.body, g, env)
    if isinstance(f, And):
        return all(reference_eval(p, g, env) for p in f.parts)
    if isinstance(f, Or):
        return any(reference_eval(p, g, env) for p in f.parts)
    if isinstance(f, Implies):
        return not reference_eval(f.left, g, env) or reference_eval(f.right, g, env)
    if isinstance(f, Iff):
        return reference_eval(f.left, g, env) == reference_eval(f.right, g, env)
    verts = range(1, g.n + 1)
    if isinstance(f, (Exists, Forall)):
        dom = verts
    else:
        dom = [frozenset(c) for k in range(g.n + 1) for c in itertools.combinations(verts, k)]
    vals = (reference_eval(f.body, g, {**env, f.var: d}) for d in dom)
    return any(vals) if isinstance(f, (Exists, ExistsSet)) else all(vals)


# random well-scoped sentences over x, y, z and the set variable X

FO_VARS = ("x", "y", "z")


def _formulas(bound):
    fo = [v for v in FO_VARS if v in bound]
    leaves = [st.builds(Const, st.booleans())]
    if fo:
        leaves.append(st.builds(Adj, st.sampled_from(fo), st.sampled_from(fo)))
        leaves.append(st.builds(Eq, st.sampled_from(fo), st.sampled_from(fo)))
        if "X" in bound:
            leaves.append(st.builds(Mem, st.just("X"), st.sampled_from(fo)))
    return st.one_of(*leaves)


@st.composite
def formula(draw, bound=frozenset(), depth=0):
    if depth >= 4 or draw(st.integers(0, 3)) == 0:
        return draw(_formulas(bound))
    kind = draw(st.sampled_from(["not", "and", "or", "imp", "iff", "q", "q", "Q"]))
    sub = lambda b=bound: formula(b, depth + 1)  # noqa: E731
    if kind == "not":
        return Not(draw(sub()))
    if kind in ("and", "or"):
        parts = tuple(draw(sub()) for _ in range(draw(st.integers(2, 3))))
        return And(parts) if kind == "and" else Or(parts)
    if kind == "imp":
        return Implies(draw(sub()), draw(sub()))
    if kind == "iff":
        return Iff(draw(sub()), draw(sub()))
    if kind == "Q":
        if "X" in bound:
            return draw(_formulas(bound))
        q = draw(st.sampled_from([ExistsSet, ForallSet]))
        return q("X", draw(sub(bound | {"X"})))
    var = draw(st.sampled_from(FO_VARS))
    q = draw(st.sampled_from([Exists, Forall]))
    return q(var, draw(sub(bound | {var})))


sentences = formula()


# --- parser ----------------------------------------------------------------


def test_parse_examples():
    assert parse_sentence(COMPLETE) == build_complete()
    assert parse_sentence(DISCONNECTED) == build_disconnected()
    assert parse_sentence("existsSet Y forallSet Z exists x (Y(x) <-> Z(x))") == ExistsSet(
        "Y", ForallSet("Z", Exists("x", Iff(Mem("Y", "x"), Mem("Z", "x"))))
    )
    # quantifiers bind a single unary formula
    assert parse_sentence("exists x x = x & true") == And((Exists("x", Eq("x", "x")), Const(True)))
    # implication associates to the right
    assert parse_sentence("true -> false -> true") == Implies(Const(True), Implies(Const(False), Const(True)))


@pytest.mark.parametrize(
    "text,pos",
    [
        ("exists x x ~ y", 13),
        ("forall x (x ~ x", 15),
        ("exists x x # x", 11),
        ("exists x x ~ X", 13),
        ("exists X X ~ X", 11),
        ("forall x", 8),
        ("exists x x = x)", 14),
    ],
)
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(LogicSyntaxError) as info:
        parse_sentence(text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


@given(sentences)
def test_print_parse_round_trip(s):
    assert parse_sentence(to_text(s)) == s


def test_builders_print_back_to_source():
    assert parse_sentence(to_text(build_at_least_diamonds(2))) == build_at_least_diamonds(2)
    with pytest.raises(ValueError):
        build_at_least_diamonds(0)


# --- evaluation -----------------------------------------------------------


def test_evaluate_examples(diamond_graph):
    assert evaluate(build_complete(), K3)
    assert not evaluate(build_complete(), P3)
    two_plus_one = LabeledGraph.from_edges(3, [(1, 2)])
    assert evaluate(build_disconnected(), two_plus_one)
    assert not evaluate(build_disconnected(), LabeledGraph.from_edges(1, []))
    for seed in range(5):
        assert not evaluate(build_disconnected(), generate(GrowthConfig(n=12, seed=seed)))
    assert evaluate(build_at_least_diamonds(1), diamond_graph)
    assert not evaluate(build_at_least_diamonds(2), diamond_graph)
    assert not evaluate(build_at_least_diamonds(1), K3)
    for seed in range(5):
        assert evaluate(build_at_least_diamonds(1), generate(GrowthConfig(n=6, m=2, seed=seed)))


@given(graphs(max_n=8))
def test_complete_matches_edge_count(g):
    assert evaluate(build_complete(), g) == (len(g.edges) == g.n * (g.n - 1) // 2)


@given(graphs(max_n=10))
def test_disconnected_matches_union_find(g):
    assert evaluate(build_disconnected(), g) == (not union_find_connected(g))


@given(graphs(max_n=8), st.integers(1, 2))
def test_at_least_diamonds_matches_counter(g, c):
    got = evaluate(build_at_least_diamonds(c), g, max_assignments=8**8)
    assert got == (count_diamonds(g) >= c) == (naive_diamonds(g) >= c)


def test_at_least_two_diamonds_on_six_vertices():
    rng = np.random.default_rng(11)
    for _ in range(120):
        g = random_graph(rng, 6, float(rng.uniform(0.3, 0.9)))
        assert evaluate(build_at_least_diamonds(2), g) == (count_diamonds(g) >= 2)


@given(sentences, graphs(max_n=4))
def test_evaluator_matches_reference_semantics(s, g):
    assert evaluate(s, g) == reference_eval(s, g)


@given(sentences, graphs(max_n=4))
def test_miniscope_preserves_truth(s, g):
    assert reference_eval(miniscope(s), g) == reference_eval(s, g)


def test_budget_refusal_reports_estimate():
    g = LabeledGraph.from_edges(30, [])
    assert estimate_cost(build_disconnected(), 30) == 30**2 * 2**30
    with pytest.raises(BudgetExceeded) as info:
        evaluate(build_disconnected(), g)
    assert str(30**2 * 2**30) in str(info.value)
    assert evaluate(build_complete(), LabeledGraph.from_edges(2, [(1, 2)]), max_assignments=4)
    with pytest.raises(BudgetExceeded):
        evaluate(build_complete(), K3, max_assignments=8)


def test_evaluate_rejects_open_formula():
    with pytest.raises(LogicSyntaxError):
        evaluate(Exists("x", Adj("x", "y")), K3)
