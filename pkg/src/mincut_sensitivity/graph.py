"""Undirected multigraphs with stable edge ids, quotients, and unit-capacity max flow.

Vertices are integers. A vertex of a quotient graph is named after the smallest
original vertex it contains, so names stay unique and tie-breaking by "smallest
contained original vertex" is just ordering by name.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class InvalidArgument(ValueError):
    """Raised when an operation is called outside its precondition."""


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (edge id, u, v)
    origin: Mapping[int, frozenset[int]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InvalidArgument("duplicate vertex")
        seen = set()
        for eid, u, v in self.edges:
            if u == v:
                raise InvalidArgument(f"self-loop on vertex {u}")
            if u not in vs or v not in vs:
                raise InvalidArgument(f"edge {eid} has an unknown endpoint")
            if eid in seen:
                raise InvalidArgument(f"duplicate edge id {eid}")
            seen.add(eid)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Multigraph":
        """Graph on vertices 0..n-1; edge ids follow the order of `pairs`."""
        edges = tuple((i, u, v) for i, (u, v) in enumerate(pairs))
        return cls(tuple(range(n)), edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def endpoints(self) -> dict[int, tuple[int, int]]:
        return {eid: (u, v) for eid, u, v in self.edges}

    @cached_property
    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """vertex -> [(edge id, other endpoint)] sorted by edge id."""
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for eid, u, v in sorted(self.edges):
            adj[u].append((eid, v))
            adj[v].append((eid, u))
        return adj

    def origin_of(self, v: int) -> frozenset[int]:
        return self.origin.get(v, frozenset((v,)))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def other(self, eid: int, v: int) -> int:
        a, b = self.endpoints[eid]
        return b if a == v else a

    def without_edge(self, eid: int) -> "Multigraph":
        return Multigraph(self.vertices, tuple(e for e in self.edges if e[0] != eid), self.origin)

    def with_edge(self, u: int, v: int) -> "Multigraph":
        new_id = max((e[0] for e in self.edges), default=-1) + 1
        return Multigraph(self.vertices, self.edges + ((new_id, u, v),), self.origin)

    def expand(self, side: Iterable[int]) -> frozenset[int]:
        """Original vertices behind a set of (possibly contracted) vertices."""
        out: set[int] = set()
        for v in side:
            out |= self.origin_of(v)
        return frozenset(out)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for _, y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n


@dataclass(frozen=True)
class Cut:
    side: frozenset[int]
    value: int

    def separates(self, a: int, b: int) -> bool:
        return (a in self.side) != (b in self.side)

    def contains_edge(self, g: Multigraph, eid: int) -> bool:
        u, v = g.endpoints[eid]
        return self.separates(u, v)


def _check_side(g: Multigraph, side) -> frozenset[int]:
    side = frozenset(side)
    if not side or not side <= set(g.vertices) or len(side) == g.n:
        raise InvalidArgument("cut side must be a nonempty proper vertex subset")
    return side


def cut_value(g: Multigraph, side: Iterable[int]) -> int:
    side = _check_side(g, side)
    return sum(1 for _, u, v in g.edges if (u in side) != (v in side))


def make_cut(g: Multigraph, side: Iterable[int]) -> Cut:
    side = _check_side(g, side)
    return Cut(side, cut_value(g, side))


def contract(g: Multigraph, groups: Iterable[Iterable[int]]) -> Multigraph:
    """Quotient graph: each group becomes one vertex, internal edges are dropped."""
    rename: dict[int, int] = {}
    for grp in groups:
        grp = set(grp)
        if not grp:
            continue
        name = min(grp)
        for v in grp:
            if v in rename:
                raise InvalidArgument(f"vertex {v} appears in two groups")
            if v not in g.adjacency:
                raise InvalidArgument(f"unknown vertex {v}")
            rename[v] = name
    if not rename:
        return g
    vertices = tuple(sorted({rename.get(v, v) for v in g.vertices}))
    origin: dict[int, set[int]] = {}
    for v in g.vertices:
        origin.setdefault(rename.get(v, v), set()).update(g.origin_of(v))
    edges = []
    for eid, u, v in g.edges:
        a, b = rename.get(u, u), rename.get(v, v)
        if a != b:
            edges.append((eid, a, b))
    return Multigraph(vertices, tuple(edges), {k: frozenset(s) for k, s in origin.items()})


@dataclass
class FlowResult:
    value: int
    flow: dict[int, int]  # edge id -> +1 (u to v), -1 (v to u), 0

    def residual(self, g: Multigraph, a: int, eid: int) -> int:
        """Residual capacity of edge `eid` when traversed out of `a`."""
        u, _ = g.endpoints[eid]
        f = self.flow[eid]
        return 1 - f if a == u else 1 + f


def max_flow(g: Multigraph, s: int, t: int) -> FlowResult:
    """Edge-disjoint s-t paths by shortest augmenting paths (unit capacities)."""
    if s == t:
        raise InvalidArgument("s and t must differ")
    adj = g.adjacency
    ends = g.endpoints
    flow = {eid: 0 for eid, _, _ in g.edges}
    value = 0
    while True:
        parent: dict[int, tuple[int, int]] = {s: (-1, -1)}
        queue = deque([s])
        while queue and t not in parent:
            a = queue.popleft()
            for eid, b in adj[a]:
                if b in parent:
                    continue
                f = flow[eid]
                cap = 1 - f if ends[eid][0] == a else 1 + f
                if cap > 0:
                    parent[b] = (a, eid)
                    queue.append(b)
        if t not in parent:
            return FlowResult(value, flow)
        b = t
        while b != s:
            a, eid = parent[b]
            flow[eid] += 1 if ends[eid][0] == a else -1
            b = a
        value += 1


def max_flow_value(g: Multigraph, s: int, t: int) -> int:
    return max_flow(g, s, t).value
