"""Gomory-Hu trees and the connectivity hierarchy built from them.

The hierarchy has one leaf per vertex. An internal node holds the Steiner set of
the leaves below it and its Steiner mincut value; children are the maximal
subsets with strictly larger connectivity, so the value at LCA(s, t) is the
(s,t)-mincut value.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import InvalidArgument, Multigraph, max_flow
from .strip import _reach, _residual_arcs
from .trees import OpCounter, RootedTree


@dataclass(frozen=True)
class GomoryHuTree:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, weight)

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def path_minimum(self, s: int, t: int) -> int:
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        best = {s: float("inf")}
        stack = [s]
        while stack:
            a = stack.pop()
            for b, w in adj[a]:
                if b not in best:
                    best[b] = min(best[a], w)
                    stack.append(b)
        return int(best[t])


def build_gomory_hu(g: Multigraph) -> GomoryHuTree:
    """Gusfield's variant: n-1 max flows on the original graph, no contraction."""
    if not g.is_connected():
        raise InvalidArgument("the graph must be connected")
    vs = list(g.vertices)
    if len(vs) == 1:
        return GomoryHuTree(tuple(vs), ())
    parent = {v: vs[0] for v in vs}
    weight = {v: 0 for v in vs}
    for i, s in enumerate(vs[1:], start=1):
        t = parent[s]
        res = max_flow(g, s, t)
        side = _reach(s, _residual_arcs(g, res.flow))
        weight[s] = res.value
        for v in vs[i + 1:]:
            if v in side and parent[v] == t:
                parent[v] = s
        if parent[t] in side:
            parent[s] = parent[t]
            parent[t] = s
            weight[s], weight[t] = weight[t], res.value
    edges = tuple((v, parent[v], weight[v]) for v in vs if v != vs[0])
    return GomoryHuTree(tuple(vs), edges)


@dataclass
class HierarchyNode:
    id: int
    parent: int  # -1 at the root
    steiner: frozenset[int]
    value: int | None  # None for leaves
    children: list[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class HierarchyTree:
    def __init__(self, nodes: list[HierarchyNode], counter: OpCounter | None = None):
        self.nodes = nodes
        self.leaf = {next(iter(nd.steiner)): nd.id for nd in nodes if nd.is_leaf}
        self.tree = RootedTree([nd.parent for nd in nodes], counter)
        self.root = self.tree.root

    def __getitem__(self, i: int) -> HierarchyNode:
        return self.nodes[i]

    def internal(self) -> list[HierarchyNode]:
        return [nd for nd in self.nodes if not nd.is_leaf]

    def lca_of(self, s: int, t: int) -> int:
        return self.tree.lca(self.leaf[s], self.leaf[t])

    def child_toward(self, node: int, v: int) -> int:
        """Child of `node` whose Steiner set contains vertex v."""
        return self.tree.ancestor(self.leaf[v], self.tree.depth[node] + 1)

    def child_containing(self, node: int, v: int) -> int:
        """Same as child_toward, by scanning the children (no level-ancestor index)."""
        for c in self.nodes[node].children:
            if v in self.nodes[c].steiner:
                return c
        raise KeyError(v)

    def parent_value_sum(self) -> int:
        return sum(self.nodes[nd.parent].value for nd in self.nodes if nd.parent >= 0)


def build_hierarchy(ght: GomoryHuTree, counter: OpCounter | None = None) -> HierarchyTree:
    """Repeatedly delete every minimum-weight edge of a component and recurse."""
    nodes: list[HierarchyNode] = []
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in ght.vertices}
    for u, v, w in ght.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))

    def component(start: int, floor: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b, w in adj[a]:
                if w > floor and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen

    # work items: (vertex set, parent id, floor weight already removed)
    work = [(frozenset(ght.vertices), -1, 0)]
    while work:
        verts, parent, floor = work.pop()
        nid = len(nodes)
        if len(verts) == 1:
            nodes.append(HierarchyNode(nid, parent, verts, None))
        else:
            cmin = min(w for u, v, w in ght.edges if u in verts and v in verts and w > floor)
            nodes.append(HierarchyNode(nid, parent, verts, cmin))
            left = set(verts)
            parts = []
            for v in sorted(verts):
                if v in left:
                    comp = component(v, cmin)
                    left -= comp
                    parts.append(frozenset(comp))
            for comp in reversed(parts):
                work.append((comp, nid, cmin))
        if parent >= 0:
            nodes[parent].children.append(nid)
    return HierarchyTree(nodes, counter)


def lookup_mincut_value(h: HierarchyTree, s: int, t: int) -> int:
    if s == t:
        raise InvalidArgument("s and t must differ")
    return h[h.lca_of(s, t)].value
