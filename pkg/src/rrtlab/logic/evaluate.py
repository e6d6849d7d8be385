"""Brute-force model checking of FO/MSO sentences on finite graphs.

Sentences are first miniscoped (conjuncts that do not mention a bound
variable move out of its existential quantifier, dually for universals) and
then compiled to nested closures.  Vertices are 0..n-1 internally, adjacency
rows and set values are int bitmasks.
"""
from __future__ import annotations

from ..errors import BudgetExceeded
from ..graphcore import LabeledGraph
from .syntax import (
    QUANTIFIERS,
    Adj,
    And,
    Const,
    Eq,
    Exists,
    ExistsSet,
    Forall,
    ForallSet,
    Formula,
    Iff,
    Implies,
    Mem,
    Not,
    Or,
    check_sentence,
    free_variables,
)

DEFAULT_MAX_ASSIGNMENTS = 2**22


def quantifier_depths(f: Formula) -> tuple[int, int]:
    """(deepest nesting of vertex quantifiers, of set quantifiers)."""
    if isinstance(f, (Const, Adj, Eq, Mem)):
        return 0, 0
    if isinstance(f, Not):
        return quantifier_depths(f.body)
    if isinstance(f, (And, Or)):
        ds = [quantifier_depths(p) for p in f.parts]
        return max(d[0] for d in ds), max(d[1] for d in ds)
    if isinstance(f, (Implies, Iff)):
        a, b = quantifier_depths(f.left), quantifier_depths(f.right)
        return max(a[0], b[0]), max(a[1], b[1])
    fo, so = quantifier_depths(f.body)
    if isinstance(f, (Exists, Forall)):
        return fo + 1, so
    return fo, so + 1


def estimate_cost(f: Formula, n: int) -> int:
    """Worst-case assignment count n^(FO depth) * 2^(n * MSO depth)."""
    fo, so = quantifier_depths(f)
    return n**fo * 2 ** (n * so)


def _conj(parts: list) -> Formula:
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    if not flat:
        return Const(True)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def _disj(parts: list) -> Formula:
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    if not flat:
        return Const(False)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def _cost_rank(f: Formula) -> int:
    return 1 if isinstance(f, QUANTIFIERS) else 0


def miniscope(f: Formula) -> Formula:
    """Equivalent formula with quantifier scopes shrunk (domains are non-empty)."""
    if isinstance(f, (Const, Adj, Eq, Mem)):
        return f
    if isinstance(f, Not):
        return Not(miniscope(f.body))
    if isinstance(f, And):
        return _conj(sorted((miniscope(p) for p in f.parts), key=_cost_rank))
    if isinstance(f, Or):
        return _disj(sorted((miniscope(p) for p in f.parts), key=_cost_rank))
    if isinstance(f, Implies):
        return Implies(miniscope(f.left), miniscope(f.right))
    if isinstance(f, Iff):
        return Iff(miniscope(f.left), miniscope(f.right))
    body = miniscope(f.body)
    var = f.var
    kind = type(f)
    if var not in free_variables(body):
        return body
    if kind in (Exists, ExistsSet) and isinstance(body, And):
        inner = [p for p in body.parts if var in free_variables(p)]
        outer = [p for p in body.parts if var not in free_variables(p)]
        if outer:
            return _conj(sorted(outer + [kind(var, _conj(inner))], key=_cost_rank))
    if kind in (Forall, ForallSet):
        if isinstance(body, And):
            return _conj([miniscope(kind(var, p)) for p in body.parts])
        if isinstance(body, Or):
            inner = [p for p in body.parts if var in free_variables(p)]
            outer = [p for p in body.parts if var not in free_variables(p)]
            if outer:
                return _disj(sorted(outer + [kind(var, _disj(inner))], key=_cost_rank))
        if isinstance(body, Implies) and var not in free_variables(body.left):
            return Implies(body.left, miniscope(kind(var, body.right)))
    return kind(var, body)


class _Compiler:
    def __init__(self, g: LabeledGraph):
        self.n = g.n
        adj = [0] * g.n
        for u, v in g.edges:
            adj[u - 1] |= 1 << (v - 1)
            adj[v - 1] |= 1 << (u - 1)
        self.adj = adj
        self.slots = 0

    def compile(self, f: Formula, scope: dict):
        if isinstance(f, Const):
            val = f.value
            return lambda env: val
        if isinstance(f, Adj):
            i, j, adj = scope[f.x], scope[f.y], self.adj
            return lambda env: (adj[env[i]] >> env[j]) & 1 == 1
        if isinstance(f, Eq):
            i, j = scope[f.x], scope[f.y]
            return lambda env: env[i] == env[j]
        if isinstance(f, Mem):
            s, i = scope[f.X], scope[f.x]
            return lambda env: (env[s] >> env[i]) & 1 == 1
        if isinstance(f, Not):
            b = self.compile(f.body, scope)
            return lambda env: not b(env)
        if isinstance(f, And):
            ps = [self.compile(p, scope) for p in f.parts]
            return lambda env: all(p(env) for p in ps)
        if isinstance(f, Or):
            ps = [self.compile(p, scope) for p in f.parts]
            return lambda env: any(p(env) for p in ps)
        if isinstance(f, Implies):
            a, b = self.compile(f.left, scope), self.compile(f.right, scope)
            return lambda env: (not a(env)) or b(env)
        if isinstance(f, Iff):
            a, b = self.compile(f.left, scope), self.compile(f.right, scope)
            return lambda env: a(env) == b(env)
        slot = self.slots
        self.slots += 1
        body = self.compile(f.body, {**scope, f.var: slot})
        domain = range(self.n) if isinstance(f, (Exists, Forall)) else range(1 << self.n)
        if isinstance(f, (Exists, ExistsSet)):

            def exists(env):
                for x in domain:
                    env[slot] = x
                    if body(env):
                        return True
                return False

            return exists

        def forall(env):
            for x in domain:
                env[slot] = x
                if not body(env):
                    return False
            return True

        return forall


def evaluate(s: Formula, g: LabeledGraph, max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> bool:
    """Truth of the sentence ``s`` in ``g`` (G |= s) by exhaustive search."""
    check_sentence(s)
    cost = estimate_cost(s, g.n)
    if cost > max_assignments:
        raise BudgetExceeded("sentence evaluation", cost, max_assignments)
    comp = _Compiler(g)
    fn = comp.compile(miniscope(s), {})
    return bool(fn([0] * max(comp.slots, 1)))
