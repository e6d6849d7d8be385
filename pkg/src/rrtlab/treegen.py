"""Uniform and preferential attachment growth, seeded sampling and exhaustive
history enumeration.

Sampling goes through the compiled kernels in :mod:`rrtlab.kernels`; each call
draws its uniforms from a ``numpy.random.Generator`` so the compiled and
fallback paths produce the same graph for the same seed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .errors import BudgetExceeded, DomainError
from .graphcore import LabeledGraph

MODELS = ("UA", "PA")
CONVENTIONS = ("normalized", "paper_denominator")
DEFAULT_HISTORY_BUDGET = 10**7

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective 64-bit avalanche mix."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_seed(seed: int, trial: int) -> int:
    """Seed of trial ``trial``: splitmix64(splitmix64(seed) xor trial)."""
    return splitmix64(splitmix64(seed & _MASK64) ^ (trial & _MASK64))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed(seed, trial))


@dataclass(frozen=True)
class GrowthConfig:
    n: int
    m: int = 1
    model: str = "UA"
    pa_convention: str = "normalized"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", self.model.upper())
        if self.model not in MODELS:
            raise DomainError(f"model must be UA or PA, got {self.model!r}")
        if self.pa_convention not in CONVENTIONS:
            raise DomainError(f"unknown PA convention {self.pa_convention!r}")
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        if self.n < self.m + 1:
            raise DomainError(f"n must be >= m + 1 = {self.m + 1}, got {self.n}")


# ----------------------------------------------------------------------------
# array-level sampling (used by the experiment harness)


def ua_back(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Back-neighbour array (n+1, m) of one UA(n, m) history."""
    return kernels.ua_attach(rng.random((n + 1, m)), m)


def pa_back(n: int, m: int, rng: np.random.Generator, convention: str = "normalized") -> np.ndarray:
    """Back-neighbour array of one PA(n, m) history; 0 entries are self-loops."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown PA convention {convention!r}")
    return kernels.pa_attach(rng.random((n + 1, m)), m, convention == "paper_denominator")


def tree_parents(n: int, model: str, rng: np.random.Generator, convention: str = "normalized") -> np.ndarray:
    """1-based parent array of a UA(n, 1) or PA(n, 1) tree."""
    if model.upper() == "UA":
        back = ua_back(n, 1, rng)
    else:
        back = pa_back(n, 1, rng, convention)
    return np.ascontiguousarray(back[:, 0])


def back_to_graph(back: np.ndarray, model: str, m: int) -> LabeledGraph:
    n = back.shape[0] - 1
    edges = {(int(a), w) for w in range(2, n + 1) for a in back[w] if a > 0}
    return LabeledGraph(n, frozenset(edges), model_tag=model, m=m)


def generate_ua(cfg: GrowthConfig) -> LabeledGraph:
    if cfg.model != "UA":
        raise DomainError("generate_ua needs a UA config")
    back = ua_back(cfg.n, cfg.m, np.random.default_rng(cfg.seed))
    return back_to_graph(back, "UA", cfg.m)


def generate_pa(cfg: GrowthConfig) -> LabeledGraph:
    """PA graph with repeated edges collapsed; self-loops are dropped."""
    if cfg.model != "PA":
        raise DomainError("generate_pa needs a PA config")
    back = pa_back(cfg.n, cfg.m, np.random.default_rng(cfg.seed), cfg.pa_convention)
    return back_to_graph(back, "PA", cfg.m)


def generate(cfg: GrowthConfig) -> LabeledGraph:
    return generate_ua(cfg) if cfg.model == "UA" else generate_pa(cfg)


# ----------------------------------------------------------------------------
# exhaustive enumeration


@dataclass(frozen=True)
class GrowthHistory:
    """Neighbour multiset chosen by each arrival m+2..n (0 = self-loop)."""

    n: int
    m: int
    model: str
    records: tuple
    weight: Fraction


def history_count(n: int, m: int, model: str, convention: str = "normalized") -> int:
    model = model.upper()
    total = 1
    for t in range(m + 1, n):
        if model == "UA":
            total *= math.comb(t, m)
        else:
            choices = t + (1 if convention == "paper_denominator" else 0)
            total *= math.comb(choices + m - 1, m)
    return total


def _multinomial(counts) -> int:
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def enumerate_histories(
    n: int,
    m: int,
    model: str,
    convention: str = "normalized",
    budget: int = DEFAULT_HISTORY_BUDGET,
) -> Iterator[tuple[GrowthHistory, LabeledGraph, Fraction]]:
    """Yield every growth history with its exact probability.

    UA steps choose an m-subset uniformly.  PA steps choose a multiset of m
    endpoints (independent draws, so multinomial weights) using degrees before
    the step, with multi-edges counted in degrees; under the ``paper_denominator`` convention
    the endpoint law is deg/(2 m t) and the leftover mass is the self-loop 0.
    """
    model = model.upper()
    GrowthConfig(n, m, model, convention)
    required = history_count(n, m, model, convention)
    if required > budget:
        raise BudgetExceeded("history enumeration", required, budget)

    seed_edges = [(i, j) for j in range(2, m + 2) for i in range(1, j)]
    deg = [0] * (n + 1)
    for i, j in seed_edges:
        deg[i] += 1
        deg[j] += 1

    def steps(t: int) -> list[tuple[tuple, Fraction]]:
        # options for arrival t+1 given degrees of [t]
        if model == "UA":
            p = Fraction(1, math.comb(t, m))
            return [(c, p) for c in itertools.combinations(range(1, t + 1), m)]
        live = sum(deg[1 : t + 1])
        denom = 2 * m * t if convention == "paper_denominator" else live
        prob = {v: Fraction(deg[v], denom) for v in range(1, t + 1)}
        if convention == "paper_denominator":
            prob[0] = 1 - Fraction(live, denom)
        out = []
        for combo in itertools.combinations_with_replacement(sorted(prob), m):
            counts = [combo.count(x) for x in set(combo)]
            w = Fraction(_multinomial(counts))
            for x in combo:
                w *= prob[x]
            if w:
                out.append((combo, w))
        return out

    records: list[tuple] = []
    edges: list[tuple[int, int]] = list(seed_edges)

    def rec(t: int, weight: Fraction):
        if t == n:
            g = LabeledGraph(n, frozenset(edges), model_tag=model, m=m)
            yield GrowthHistory(n, m, model, tuple(records), weight), g, weight
            return
        w_new = t + 1
        for combo, p in steps(t):
            added = []
            for x in combo:
                if x > 0:
                    deg[x] += 1
                    deg[w_new] += 1
            for x in sorted(set(combo)):
                if x > 0:
                    added.append((x, w_new))
            records.append(combo)
            edges.extend(added)
            yield from rec(t + 1, weight * p)
            del edges[len(edges) - len(added) :]
            records.pop()
            for x in combo:
                if x > 0:
                    deg[x] -= 1
                    deg[w_new] -= 1

    yield from rec(m + 1, Fraction(1))


def exact_expectation(statistic, n: int, m: int, model: str, convention: str = "normalized", budget: int = DEFAULT_HISTORY_BUDGET) -> Fraction:
    """E[statistic(G)] over all histories, as an exact rational."""
    return sum((w * statistic(g) for _, g, w in enumerate_histories(n, m, model, convention, budget)), Fraction(0))
