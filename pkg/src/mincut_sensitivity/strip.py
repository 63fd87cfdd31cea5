"""The strip: a DAG over vertex classes that stores every (s,t)-mincut.

Nodes are classes of vertices that no (s,t)-mincut separates. Every edge between
two distinct nodes lies in some mincut and carries one unit of any maximum flow;
that flow direction orients the DAG from the source node toward the sink node.
A non-terminal node splits its inter-node edges into the side facing the source
(flow enters) and the side facing the sink (flow leaves).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .graph import Cut, InvalidArgument, Multigraph, max_flow

TOWARD_S = "s"
TOWARD_T = "t"


@dataclass(frozen=True, eq=False)
class Strip:
    graph: Multigraph
    nodes: tuple[frozenset[int], ...]  # sorted by smallest vertex
    node_of: dict[int, int]
    source: int
    sink: int
    side_s: dict[int, frozenset[int]]  # non-terminal node -> edge ids facing the source
    side_t: dict[int, frozenset[int]]
    value: int
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def non_terminals(self) -> list[int]:
        return [i for i in range(len(self.nodes)) if i not in (self.source, self.sink)]

    def is_terminal(self, x: int) -> bool:
        return x == self.source or x == self.sink

    def edge_nodes(self, eid: int) -> tuple[int, int]:
        u, v = self.graph.endpoints[eid]
        return self.node_of[u], self.node_of[v]

    @cached_property
    def _dag(self) -> tuple[dict[int, frozenset[int]], dict[int, frozenset[int]]]:
        down: dict[int, set[int]] = {i: set() for i in range(len(self.nodes))}
        up: dict[int, set[int]] = {i: set() for i in range(len(self.nodes))}
        for a, b in self._arcs():
            up[a].add(b)
            down[b].add(a)
        freeze = lambda d: {k: frozenset(v) for k, v in d.items()}
        return freeze(down), freeze(up)

    @property
    def lower(self) -> dict[int, frozenset[int]]:
        """node -> nodes one step closer to the source."""
        return self._dag[0]

    @property
    def upper(self) -> dict[int, frozenset[int]]:
        return self._dag[1]

    def _arcs(self):
        for eid, u, v in self.graph.edges:
            a, b = self.node_of[u], self.node_of[v]
            if a == b:
                continue
            if self._edge_points_up(eid, a, b):
                yield a, b
            else:
                yield b, a

    def _edge_points_up(self, eid: int, a: int, b: int) -> bool:
        """True when the edge runs from node a (closer to source) to node b."""
        if a == self.source or b == self.sink:
            return True
        if a == self.sink or b == self.source:
            return False
        return eid in self.side_t[a]

    def canonical(self):
        """Hashable form independent of node numbering."""
        inner = frozenset(
            (self.nodes[x], self.side_s[x], self.side_t[x]) for x in self.non_terminals
        )
        return self.nodes[self.source], self.nodes[self.sink], inner

    def side_of(self, node_set: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for x in node_set:
            out |= self.nodes[x]
        return frozenset(out)


def _residual_arcs(g: Multigraph, flow) -> dict[int, list[int]]:
    arcs: dict[int, list[int]] = {v: [] for v in g.vertices}
    for eid, u, v in g.edges:
        f = flow[eid]
        if f < 1:
            arcs[u].append(v)
        if f > -1:
            arcs[v].append(u)
    return arcs


def _reach(start: int, arcs: dict[int, list[int]], allowed=None) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        a = stack.pop()
        for b in arcs[a]:
            if b not in seen and (allowed is None or b in allowed):
                seen.add(b)
                stack.append(b)
    return seen


def _strong_components(vertices: list[int], arcs: dict[int, list[int]]) -> list[set[int]]:
    """Iterative Tarjan restricted to `vertices`."""
    allowed = set(vertices)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[set[int]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(arcs[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in allowed:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(arcs[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def build_strip(g: Multigraph, s: int, t: int) -> Strip:
    res = max_flow(g, s, t)
    arcs = _residual_arcs(g, res.flow)
    rev: dict[int, list[int]] = {v: [] for v in g.vertices}
    for a, outs in arcs.items():
        for b in outs:
            rev[b].append(a)
    src = _reach(s, arcs)
    snk = _reach(t, rev)
    rest = [v for v in g.vertices if v not in src and v not in snk]
    classes = [frozenset(src), frozenset(snk)] + [frozenset(c) for c in _strong_components(rest, arcs)]
    return strip_from_partition(g, classes, s, t, res.value, res.flow)


def strip_from_partition(g: Multigraph, classes, s: int, t: int, value: int, flow) -> Strip:
    """Assemble a Strip from node classes and a flow orienting the inter-node edges."""
    classes = sorted(classes, key=min)
    node_of = {v: i for i, c in enumerate(classes) for v in c}
    source, sink = node_of[s], node_of[t]
    side_s: dict[int, set[int]] = {}
    side_t: dict[int, set[int]] = {}
    for i in range(len(classes)):
        if i != source and i != sink:
            side_s[i], side_t[i] = set(), set()
    for eid, u, v in g.edges:
        a, b = node_of[u], node_of[v]
        if a == b:
            continue
        f = flow[eid]
        if f == 0:
            raise AssertionError(f"edge {eid} between strip nodes carries no flow")
        tail, head = (a, b) if f > 0 else (b, a)
        if tail in side_t:
            side_t[tail].add(eid)
        if head in side_s:
            side_s[head].add(eid)
    return Strip(
        g,
        tuple(classes),
        node_of,
        source,
        sink,
        {k: frozenset(v) for k, v in side_s.items()},
        {k: frozenset(v) for k, v in side_t.items()},
        value,
    )


def is_transversal(strip: Strip, side: Iterable[int]) -> bool:
    side = set(side)
    if strip.source not in side or strip.sink in side:
        raise InvalidArgument("side must contain the source node and exclude the sink node")
    lower = strip.lower
    return all(lower[x] <= side for x in side)


def reachability_cone(strip: Strip, x: int, direction: str = TOWARD_S) -> frozenset[int]:
    if strip.is_terminal(x):
        raise InvalidArgument("reachability cones are defined for non-terminal nodes")
    step = strip.lower if direction == TOWARD_S else strip.upper
    return frozenset(_reach(x, step))


def topological_order(strip: Strip) -> dict[int, int]:
    """Kahn's algorithm; among ready nodes the one with the smallest vertex goes first."""
    indeg = {x: len(strip.lower[x]) for x in range(len(strip.nodes))}
    ready = [(min(strip.nodes[x]), x) for x, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    rank: dict[int, int] = {}
    while ready:
        _, x = heapq.heappop(ready)
        rank[x] = len(rank)
        for y in strip.upper[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(ready, (min(strip.nodes[y]), y))
    assert rank[strip.source] == 0 and rank[strip.sink] == len(rank) - 1
    return rank


def cut_from_prefix(strip: Strip, x: int, tau: dict[int, int]) -> Cut:
    if x == strip.sink:
        raise InvalidArgument("the sink node has no proper prefix cut")
    bound = tau[x]
    side = strip.side_of(y for y, r in tau.items() if r <= bound)
    return Cut(side, strip.value)
