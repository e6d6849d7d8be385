"""Graph and rooted-tree values, AHU canonical codes, and pattern weights."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import DomainError, NotATree

MODEL_TAGS = ("UA", "PA", "external")


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph on vertices 1..n.

    ``edges`` holds pairs ``(u, v)`` with ``u < v``.  Generated graphs carry
    arrival order in their labels, the model tag and the attachment parameter.
    """

    n: int
    edges: frozenset
    model_tag: str = "external"
    m: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"vertex count must be >= 1, got {self.n}")
        if self.model_tag not in MODEL_TAGS:
            raise DomainError(f"unknown model tag {self.model_tag!r}")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise DomainError(f"bad edge ({u}, {v}) for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "LabeledGraph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at {u}")
            norm.add((u, v) if u < v else (v, u))
        return cls(n, frozenset(norm), **kw)

    @classmethod
    def from_parents(cls, parent: Sequence[int], **kw) -> "LabeledGraph":
        """Tree or forest from a 1-based parent array (slot 0 unused, 0 = none)."""
        n = len(parent) - 1
        return cls.from_edges(n, ((int(parent[t]), t) for t in range(2, n + 1) if parent[t] > 0), **kw)

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nbrs: list[set] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> frozenset:
        if not 1 <= v <= self.n:
            raise DomainError(f"vertex {v} out of range 1..{self.n}")
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def is_connected(self) -> bool:
        seen = {1}
        todo = [1]
        while todo:
            x = todo.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def bfs_parents(self, root: int = 1) -> tuple[list[int], list[int]]:
        """BFS order from ``root`` and parent (by vertex label) of each vertex."""
        parent = [0] * (self.n + 1)
        order = [root]
        seen = [False] * (self.n + 1)
        seen[root] = True
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for y in sorted(self.adjacency[x]):
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    order.append(y)
        return order, parent

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines.extend(f"{u} {v}" for u, v in sorted(self.edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LabeledGraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise ValueError("graph file must start with a header line 'n e'")
        n, e = int(rows[0][0]), int(rows[0][1])
        body = rows[1:]
        if len(body) != e:
            raise ValueError(f"header announces {e} edges, found {len(body)}")
        edges = []
        for row in body:
            if len(row) != 2:
                raise ValueError(f"bad edge line: {' '.join(row)!r}")
            u, v = int(row[0]), int(row[1])
            if not 1 <= u < v <= n:
                raise ValueError(f"edge line must satisfy 1 <= u < v <= n: {u} {v}")
            edges.append((u, v))
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edge in graph file")
        return cls(n, frozenset(edges))


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree given by its root and a child -> parent mapping."""

    root: Hashable
    parent: Mapping = field(default_factory=dict)

    def __post_init__(self):
        parent = dict(self.parent)
        if self.root in parent:
            raise DomainError("root cannot have a parent")
        for x in parent:
            seen = {x}
            y = parent[x]
            while y != self.root:
                if y not in parent:
                    raise DomainError(f"vertex {y!r} is not connected to the root")
                if y in seen:
                    raise DomainError("parent mapping contains a cycle")
                seen.add(y)
                y = parent[y]
        object.__setattr__(self, "parent", parent)

    def __hash__(self):
        return hash((self.root, frozenset(self.parent.items())))

    @property
    def order(self) -> int:
        return 1 + len(self.parent)

    @property
    def vertices(self) -> list:
        return [self.root, *self.parent]

    @cached_property
    def children(self) -> dict:
        kids: dict = {v: [] for v in self.vertices}
        for c, p in self.parent.items():
            kids[p].append(c)
        return kids

    @classmethod
    def from_parent_array(cls, parents: Sequence[int]) -> "RootedTree":
        """Parse ``p_1 .. p_v`` with ``p_1 = 0`` and ``p_s < s``; vertices are 1..v."""
        parents = [int(p) for p in parents]
        if not parents or parents[0] != 0:
            raise DomainError("parent array must start with 0 (the root)")
        for s, p in enumerate(parents[1:], start=2):
            if not 1 <= p < s:
                raise DomainError(f"vertex {s} needs a parent in 1..{s - 1}, got {p}")
        return cls(1, {s: p for s, p in enumerate(parents[1:], start=2)})

    @classmethod
    def parse(cls, text: str) -> "RootedTree":
        return cls.from_parent_array(text.split())

    @classmethod
    def from_graph(cls, g: LabeledGraph, root: int) -> "RootedTree":
        if not g.is_tree():
            raise NotATree("graph is not a tree")
        _, parent = g.bfs_parents(root)
        return cls(root, {v: parent[v] for v in range(1, g.n + 1) if v != root})


_BITS = str.maketrans("()", "10")


def code_key(code: str) -> tuple[int, str]:
    """Order on codes: shorter first, then '(' above ')'.

    Equal to numeric order of the codes read as bits, which the compiled
    kernels use.
    """
    return len(code), code.translate(_BITS)


def code_to_int(code: str) -> int:
    return int(code.translate(_BITS), 2)


def canonical_code(t: RootedTree) -> str:
    """AHU balanced-parenthesis code; equal codes iff rooted-isomorphic."""
    kids = t.children
    codes: dict = {}
    stack = [(t.root, False)]
    while stack:
        x, done = stack.pop()
        if done:
            inner = sorted((codes.pop(c) for c in kids[x]), key=code_key)
            codes[x] = "(" + "".join(inner) + ")"
        else:
            stack.append((x, True))
            stack.extend((c, False) for c in kids[x])
    return codes[t.root]


def rooted_isomorphic(a: RootedTree, b: RootedTree) -> bool:
    return a.order == b.order and canonical_code(a) == canonical_code(b)


@dataclass(frozen=True)
class RootedPattern:
    """Target rooted tree with an admissible labelling j_1 = R, ..., j_v.

    ``weights[l - 2]`` is d_l: the degree of x_l (the earlier neighbour of j_l)
    inside the tree induced on j_1..j_{l-1}, plus one when x_l is the root.
    """

    tree: RootedTree
    labelling: tuple
    weights: tuple
    D: int

    @property
    def v(self) -> int:
        return self.tree.order

    @cached_property
    def parent_index(self) -> tuple[int, ...]:
        """Parent positions of the labelled pattern, 1-based with slot 0 unused:
        (0, 0, p_2, ..., p_v)."""
        pos = {x: s for s, x in enumerate(self.labelling, start=1)}
        return (0, 0) + tuple(pos[self.tree.parent[x]] for x in self.labelling[1:])

    @cached_property
    def code(self) -> str:
        return canonical_code(self.tree)

    @classmethod
    def from_labelling(cls, tree: RootedTree, labelling: Sequence) -> "RootedPattern":
        labelling = tuple(labelling)
        if set(labelling) != set(tree.vertices) or len(labelling) != tree.order:
            raise DomainError("labelling must list every tree vertex exactly once")
        if labelling[0] != tree.root:
            raise DomainError("labelling must start at the root")
        pos = {x: s for s, x in enumerate(labelling)}
        adj: dict = {x: set() for x in labelling}
        for c, p in tree.parent.items():
            adj[c].add(p)
            adj[p].add(c)
        weights = []
        for s in range(1, len(labelling)):
            x = labelling[s]
            earlier = [y for y in adj[x] if pos[y] < s]
            if len(earlier) != 1:
                raise DomainError(f"labelling is not admissible at position {s + 1}")
            (xl,) = earlier
            deg = sum(1 for y in adj[xl] if pos[y] < s)
            weights.append(deg + (1 if xl == tree.root else 0))
        return cls(tree, labelling, tuple(weights), math.prod(weights))

    @classmethod
    def from_parent_array(cls, parents: Sequence[int]) -> "RootedPattern":
        tree = RootedTree.from_parent_array(parents)
        return cls.from_labelling(tree, range(1, tree.order + 1))

    @classmethod
    def parse(cls, text: str) -> "RootedPattern":
        return cls.from_parent_array(text.split())


def _label_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, repr(x))


def make_pattern(t: RootedTree) -> RootedPattern:
    """Breadth-first admissible labelling (children in label order) and weights."""
    order = [t.root]
    queue = deque([t.root])
    kids = t.children
    while queue:
        x = queue.popleft()
        for c in sorted(kids[x], key=_label_key):
            order.append(c)
            queue.append(c)
    return RootedPattern.from_labelling(t, order)
