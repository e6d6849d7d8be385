"""Sentences used in the experiments: completeness, disconnectedness, and
"at least c diamonds"."""
from __future__ import annotations

import itertools

from .syntax import Adj, And, Eq, Exists, ExistsSet, Forall, Implies, Mem, Not, Or


def build_complete():
    """forall x forall y (!(x = y) -> x ~ y)"""
    return Forall("x", Forall("y", Implies(Not(Eq("x", "y")), Adj("x", "y"))))


def build_disconnected():
    """exists X (exists x X(x) & exists x !X(x)
                 & forall x forall y ((X(x) & !X(y)) -> !(x ~ y)))"""
    return ExistsSet(
        "X",
        And(
            (
                Exists("x", Mem("X", "x")),
                Exists("x", Not(Mem("X", "x"))),
                Forall("x", Forall("y", Implies(And((Mem("X", "x"), Not(Mem("X", "y")))), Not(Adj("x", "y"))))),
            )
        ),
    )


def _diamond(a: str, b: str, c: str, d: str) -> list:
    # a, b are the adjacent degree-3 pair; c, d the non-adjacent pair
    return [
        Adj(a, b),
        Adj(a, c),
        Adj(b, c),
        Adj(a, d),
        Adj(b, d),
        Not(Eq(c, d)),
        Not(Adj(c, d)),
    ]


def build_at_least_diamonds(c: int):
    """FO sentence: there are c distinct 4-sets each inducing exactly 5 edges.

    Two copies differ when some vertex of the first is none of the second.
    Uses 4c existential variables.
    """
    if c < 1:
        raise ValueError(f"need c >= 1, got {c}")
    names = [[f"x{p}_{q}" for q in range(1, 5)] for p in range(1, c + 1)]
    parts = []
    for quad in names:
        parts.extend(_diamond(*quad))
    for first, second in itertools.combinations(names, 2):
        parts.append(Or(tuple(And(tuple(Not(Eq(a, b)) for b in second)) for a in first)))
    body = And(tuple(parts))
    for name in reversed([x for quad in names for x in quad]):
        body = Exists(name, body)
    return body
