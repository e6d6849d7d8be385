"""Exact rational evaluation of the probability, expectation and extremal
formulas for uniform and preferential attachment graphs.

Everything returns :class:`fractions.Fraction` except the explicitly
asymptotic expressions, which return floats.  Product forms and closed forms
are kept as separate code paths so each can check the other.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, DomainError
from .graphcore import RootedPattern
from .subgraph import g_clique, g_diamond

Rational = Fraction

DEFAULT_TUPLE_BUDGET = 25_000_000


def _binom(i: int, j: int) -> int:
    """C(i, j) with the convention C(i, j) = 1 for 0 <= i < j."""
    if 0 <= i < j:
        return 1
    return math.comb(i, j)


def falling(n: int, k: int) -> int:
    """(n-k)(n-k+1)...(n-1)."""
    return math.prod(range(n - k, n))


def odd_double_factorial(k: int) -> int:
    """k!! for odd k >= -1 (product of odd numbers up to k; (-1)!! = 1)."""
    if k < -1 or k % 2 == 0:
        raise DomainError(f"odd double factorial needs odd k >= -1, got {k}")
    return math.prod(range(1, k + 1, 2))


@dataclass(frozen=True)
class SlotTuple:
    """Vertex tuple(s) i_1 < ... < i_v at horizon n, with optional window."""

    i: tuple
    n: int
    n0: int | None = None
    r: int | None = None
    ell: int | None = None
    itilde: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "i", tuple(int(x) for x in self.i))
        if self.itilde is not None:
            object.__setattr__(self, "itilde", tuple(int(x) for x in self.itilde))
        for tup in (self.i, self.itilde):
            if tup is None:
                continue
            if not tup:
                raise DomainError("empty vertex tuple")
            if any(a >= b for a, b in zip(tup, tup[1:])):
                raise DomainError(f"tuple must be strictly increasing: {tup}")
            if tup[-1] > self.n:
                raise DomainError(f"tuple {tup} exceeds n = {self.n}")
        if self.itilde is not None and len(self.itilde) != len(self.i):
            raise DomainError("both tuples must have the same length")
        if self.n0 is not None or self.r is not None:
            if self.n0 is None or self.r is None or self.n0 < 1 or self.r < 1:
                raise DomainError("a window needs n0 >= 1 and r >= 1")
            if self.n0 + self.r + len(self.i) > self.n:
                raise DomainError("window needs n0 + r + v <= n")
            if self.i[0] <= self.n0 + self.r:
                raise DomainError("window needs i_1 > n0 + r")
            if self.ell is not None and not 0 <= self.ell < self.r:
                raise DomainError("window offset must satisfy 0 <= ell < r")

    @property
    def v(self) -> int:
        return len(self.i)


@dataclass(frozen=True)
class LimitEstimate:
    """The limit lies in [value, value + tail_bound]."""

    value: Fraction
    tail_bound: Fraction
    symbol: str = "beta"
    terms: int = 0

    @property
    def upper(self) -> Fraction:
        return self.value + self.tail_bound


# ----------------------------------------------------------------------------
# diamonds in UA(n, 2)


def ua_diamond_term(u3: int, u4: int) -> Fraction:
    """P(some u1 < u2 < u3 complete a diamond on u3 < u4) in UA(u4, 2)."""
    if not 3 <= u3 < u4:
        raise DomainError(f"need 3 <= u3 < u4, got u3={u3}, u4={u4}")
    return Fraction(3 * (2 * u3 - 5), math.comb(u3 - 1, 2) * math.comb(u4 - 1, 2))


def ua_diamond_expectation(n: int) -> Fraction:
    """E X_n, summing the u4 range in closed form:
    sum_{u4=u3+1}^{n} 1/((u4-1)(u4-2)) = 1/(u3-1) - 1/(n-1)."""
    if n < 4:
        raise DomainError(f"need n >= 4, got {n}")
    total = Fraction(0)
    tail = Fraction(1, n - 1)
    for u3 in range(3, n):
        a = Fraction(12 * (2 * u3 - 5), (u3 - 1) * (u3 - 2))
        total += a * (Fraction(1, u3 - 1) - tail)
    return total


def ua_diamond_expectations(n_max: int) -> list[Fraction]:
    """[E X_4, ..., E X_{n_max}] using E X_n - E X_{n-1} = sum_{u3<n} term(u3, n)."""
    if n_max < 4:
        raise DomainError(f"need n_max >= 4, got {n_max}")
    out = []
    inner = Fraction(0)  # sum_{u3 <= n-1} (2 u3 - 5) / C(u3 - 1, 2)
    value = Fraction(0)
    for n in range(4, n_max + 1):
        u3 = n - 1
        inner += Fraction(2 * u3 - 5, math.comb(u3 - 1, 2))
        value += 3 * inner / math.comb(n - 1, 2)
        out.append(value)
    return out


def ua_diamond_limit(tail_eps: Fraction) -> LimitEstimate:
    """Bracket for beta = lim E X_n.

    Summing u4 to infinity gives beta = sum_{u>=3} 12(2u-5)/((u-1)^2 (u-2)).
    The partial sum up to N is a lower bound; each later term is at most
    24/((u-1)(u-2)), so the tail is at most 24/(N-1).
    """
    tail_eps = Fraction(tail_eps)
    if tail_eps <= 0:
        raise DomainError("tail_eps must be positive")
    big_n = max(4, math.ceil(24 / tail_eps) + 1)
    value = Fraction(0)
    for u in range(3, big_n + 1):
        value += Fraction(12 * (2 * u - 5), (u - 1) ** 2 * (u - 2))
    return LimitEstimate(value, Fraction(24, big_n - 1), "beta", big_n)


# ----------------------------------------------------------------------------
# cliques in UA(n, m)


def ua_clique_prob(u: Sequence[int], m: int) -> Fraction:
    """P(u_1 < ... < u_{m+1} span a clique in UA(n, m))."""
    u = tuple(u)
    if m < 3:
        raise DomainError(f"clique formula needs m >= 3, got {m}")
    if len(u) != m + 1 or u[0] < 1 or any(a >= b for a, b in zip(u, u[1:])):
        raise DomainError(f"need an increasing (m+1)-tuple of vertices, got {u}")
    num = den = 1
    for j in range(1, m + 1):
        x = u[j]
        num *= _binom(x - 1 - j, m - j)
        den *= _binom(x - 1, m)
    return Fraction(num, den)


def _check_tuples(count: int, budget: int, what: str):
    if count > budget:
        raise BudgetExceeded(what, count, budget)


def ua_clique_expectation(n: int, m: int, max_tuples: int = 2_000_000) -> Fraction:
    if n < m + 1:
        raise DomainError(f"need n >= m + 1, got n={n}, m={m}")
    _check_tuples(math.comb(n, m + 1), max_tuples, "clique tuple sum")
    return sum((ua_clique_prob(u, m) for u in itertools.combinations(range(1, n + 1), m + 1)), Fraction(0))


def ua_clique_upper(n: int, m: int, max_tuples: int = 2_000_000) -> Fraction:
    """Term-wise majorant m^j/(u_{j+1}-j)^j, split by how many u's lie in [m]."""
    if m < 3:
        raise DomainError(f"clique formula needs m >= 3, got {m}")
    if n < m + 1:
        raise DomainError(f"need n >= m + 1, got n={n}, m={m}")
    _check_tuples(math.comb(n, m + 1), max_tuples, "clique majorant sum")
    high = range(m + 1, n + 1)

    def majorant(tail: tuple, first_j: int) -> Fraction:
        # tail = (u_{first_j+1}, ..., u_{m+1})
        out = Fraction(1)
        for j, x in enumerate(tail, start=first_j):
            out *= Fraction(m**j, (x - j) ** j)
        return out

    total = Fraction(0)
    for k in range(1, m + 1):
        part = sum((majorant(tail, k) for tail in itertools.combinations(high, m + 1 - k)), Fraction(0))
        total += math.comb(m, k) * part
    total += sum((majorant(tail[1:], 1) for tail in itertools.combinations(high, m + 1)), Fraction(0))
    return total


def markov_threshold(beta_upper: Fraction, eps: Fraction, statistic: str = "diamond", m: int | None = None) -> int:
    """Smallest k with beta_upper / g(k) < 1 - eps."""
    beta_upper, eps = Fraction(beta_upper), Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    if statistic == "diamond":
        g, k = g_diamond, 4
    elif statistic == "clique":
        if m is None:
            raise DomainError("clique threshold needs m")
        g, k = (lambda kk: g_clique(kk, m)), m + 2
    else:
        raise DomainError(f"unknown statistic {statistic!r}")
    while not beta_upper / g(k) < 1 - eps:
        k += 1
    return k


# ----------------------------------------------------------------------------
# pendants in UA(n, 1)


def ua_pendant_prob_product(slots: SlotTuple) -> Fraction:
    """prod_s 1/(i_s - 1) prod_{i_s < t < i_{s+1}} (1 - s/(t-1)), i_{v+1} = n+1."""
    i, n = slots.i, slots.n
    if i[0] < 2:
        raise DomainError("i_1 must be at least 2")
    bounds = i + (n + 1,)
    num = den = 1
    for s in range(1, len(i) + 1):
        den *= bounds[s - 1] - 1
        for t in range(bounds[s - 1] + 1, bounds[s]):
            num *= t - 1 - s
            den *= t - 1
    return Fraction(num, den)


def ua_pendant_prob_closed(v: int, n: int) -> Fraction:
    """1 / ((n-v)(n-v+1)...(n-1))."""
    if not n > v >= 1:
        raise DomainError(f"need n > v >= 1, got v={v}, n={n}")
    return Fraction(1, falling(n, v))


def ua_windowed_prob(v: int, n: int, r: int) -> Fraction:
    """P(B~) = r / ((n-v)...(n-1)): the r window offsets are disjoint events."""
    return r * ua_pendant_prob_closed(v, n)


def ua_windowed_expectation(n0: int, r: int, v: int, n: int) -> Fraction:
    """E X(n0, n, r) = C(n-n0-r, v) r / ((n-v)...(n-1))."""
    if n0 < 1 or r < 1 or v < 1 or n < n0 + r + v:
        raise DomainError(f"need n >= n0 + r + v with positive parameters, got n0={n0}, r={r}, v={v}, n={n}")
    return math.comb(n - n0 - r, v) * ua_windowed_prob(v, n, r)


def ua_windowed_limit(r: int, v: int) -> Fraction:
    return Fraction(r, math.factorial(v))


def ua_joint_prob(v: int, n: int, r: int) -> Fraction:
    """P(B~_i and B~_i') for disjoint tuples: r^2 / ((n-2v)...(n-1))."""
    if not n > 2 * v or v < 1 or r < 1:
        raise DomainError(f"need n > 2v and v, r >= 1, got v={v}, n={n}, r={r}")
    return Fraction(r * r, falling(n, 2 * v))


def ua_chebyshev_bound(n0: int, r: int, v: int, n: int) -> Fraction:
    """Var X / (E X)^2 with Var X bounded as in the second-moment argument."""
    mean = ua_windowed_expectation(n0, r, v, n)
    p = ua_windowed_prob(v, n, r)
    c1 = math.comb(n - n0 - r, v)
    c2 = math.comb(n - n0 - r - v, v)
    var = c1 * (p - p * p) + c1 * c2 * (ua_joint_prob(v, n, r) - p * p)
    return var / (mean * mean)


# ----------------------------------------------------------------------------
# pendants in PA(n, 1)


def _check_pa_tuple(p: RootedPattern, i: tuple, n: int):
    if len(i) != p.v:
        raise DomainError(f"tuple length {len(i)} does not match pattern order {p.v}")
    if i[0] < 2:
        raise DomainError("i_1 must be at least 2")
    if i[-1] > n:
        raise DomainError("tuple exceeds n")


def pa_pendant_prob_product(p: RootedPattern, slots: SlotTuple) -> Fraction:
    """D-weighted product of attachment factors d_l/(2(i_l-1)) and avoidance
    factors 1 - (2l-1)/(2(t-1)) between consecutive tuple entries."""
    i, n = slots.i, slots.n
    _check_pa_tuple(p, i, n)
    bounds = i + (n + 1,)
    num, den = p.D, 1
    for ell in range(1, p.v + 1):
        if ell >= 2:
            den *= 2 * (bounds[ell - 1] - 1)
        for t in range(bounds[ell - 1] + 1, bounds[ell]):
            num *= 2 * t - 2 * ell - 1
            den *= 2 * (t - 1)
    return Fraction(num, den)


def pa_pendant_prob_closed(p: RootedPattern, i1: int, n: int) -> Fraction:
    """D [2(n-v)-1]!! / [2(i_1-1)-1]!! / (2^{n-i_1} (n-1)!/(i_1-1)!)."""
    v = p.v
    if not 2 <= i1 <= n - v + 1:
        raise DomainError(f"need 2 <= i1 <= n - v + 1, got i1={i1}, n={n}, v={v}")
    num = p.D * odd_double_factorial(2 * (n - v) - 1) * math.factorial(i1 - 1)
    den = odd_double_factorial(2 * (i1 - 1) - 1) * 2 ** (n - i1) * math.factorial(n - 1)
    return Fraction(num, den)


def pa_pendant_prob_asymptotic(p: RootedPattern, i1: int, n: int) -> float:
    """Leading term D / 2^{v-1} sqrt(i_1 / n^{2v-1})."""
    v = p.v
    if not 1 <= i1 <= n:
        raise DomainError(f"need 1 <= i1 <= n, got i1={i1}, n={n}")
    return p.D / 2 ** (v - 1) * math.sqrt(i1 / n ** (2 * v - 1))


def pa_expectation_asymptotic(p: RootedPattern, n: int) -> float:
    """2 D n / (2v+1)!!."""
    return 2 * p.D * n / odd_double_factorial(2 * p.v + 1)


def pa_expectation_exact(p: RootedPattern, n: int, max_tuples: int = DEFAULT_TUPLE_BUDGET) -> Fraction:
    """Sum of P(B_{i_1..i_v}(n)) over 2 <= i_1 < ... < i_v <= n.

    The tuple probability depends on i_1 only, so tuples are grouped by i_1
    (C(n - i_1, v - 1) of them each).
    """
    v = p.v
    if n < v + 1:
        raise DomainError(f"need n >= v + 1, got n={n}, v={v}")
    _check_tuples(math.comb(n - 1, v), max_tuples, "PA pendant tuple sum")
    return sum(
        (math.comb(n - i1, v - 1) * pa_pendant_prob_closed(p, i1, n) for i1 in range(2, n - v + 2)),
        Fraction(0),
    )


def pa_joint_prob(p: RootedPattern, slots: SlotTuple) -> Fraction:
    """Joint probability of two pendant events on disjoint tuples, i_1 < i~_1.

    Attachment factors for i_2..i_v and i~_2..i~_v, then avoidance factors
    over the merged order sigma: 1 - (2l-1)/(2(t-1)) while only the first copy
    has started (l <= mu), 1 - (2l-2)/(2(t-1)) afterwards.  Overlapping tuples
    give 0.
    """
    i, it, n = slots.i, slots.itilde, slots.n
    if it is None:
        raise DomainError("joint probability needs two tuples")
    if i[0] > it[0]:
        i, it = it, i
    _check_pa_tuple(p, i, n)
    _check_pa_tuple(p, it, n)
    if set(i) & set(it):
        return Fraction(0)
    sigma = sorted(i + it) + [n + 1]
    mu = sum(1 for x in i if x < it[0])
    num, den = p.D * p.D, 1
    for x in i[1:] + it[1:]:
        den *= 2 * (x - 1)
    for ell in range(1, 2 * p.v + 1):
        exposed = 2 * ell - 1 if ell <= mu else 2 * ell - 2
        for t in range(sigma[ell - 1] + 1, sigma[ell]):
            num *= 2 * (t - 1) - exposed
            den *= 2 * (t - 1)
    return Fraction(num, den)


def beta_three_halves(v: int) -> Fraction:
    """B(3/2, v) = 2^v (v-1)! / (2v+1)!!."""
    if v < 1:
        raise DomainError(f"need v >= 1, got {v}")
    return Fraction(2**v * math.factorial(v - 1), odd_double_factorial(2 * v + 1))
