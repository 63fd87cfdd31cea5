"""Moving an edge-containment question across a fixed mincut.

Setting: A is an (s,t)-mincut side holding s and r, with c(s,r) >= c(s,t), and E_y
is a bundle of edges at a vertex y outside A. The strip of all (s,t)-mincuts
enclosing A (source node exactly A) decides whether some (r,s)-mincut can cut
every edge of E_y, and turns the bundle into an equivalent one whose edges all
touch A. That second bundle survives contracting the complement of A.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .graph import Cut, InvalidArgument, Multigraph, contract, cut_value, max_flow_value
from .strip import Strip, TOWARD_S, build_strip, reachability_cone


@dataclass(frozen=True)
class EdgeBundle:
    """Edges sharing the endpoint `anchor`.

    Bundles built internally may instead collect edges around the whole strip
    node holding the anchor; every computation below only looks at which
    endpoint lies in that node.
    """

    anchor: int
    edges: frozenset[int]

    @classmethod
    def make(cls, g: Multigraph, anchor: int, edges: Iterable[int]) -> "EdgeBundle":
        edges = frozenset(edges)
        if not edges:
            raise InvalidArgument("an edge bundle needs at least one edge")
        ends = g.endpoints
        for eid in edges:
            if eid not in ends:
                raise InvalidArgument(f"unknown edge {eid}")
            if anchor not in ends[eid]:
                raise InvalidArgument(f"edge {eid} does not touch vertex {anchor}")
        return cls(anchor, edges)

    @classmethod
    def all_edges(cls, g: Multigraph, anchor: int) -> "EdgeBundle":
        return cls.make(g, anchor, (eid for eid, _ in g.adjacency[anchor]))


@dataclass(frozen=True)
class Infeasible:
    """No (r,s)-mincut can cut the whole bundle."""

    reason: str


def build_strip_above(g: Multigraph, A: Iterable[int], t: int) -> Strip:
    """Strip of all mincuts between A and t, with A as its source node."""
    from .carcass import _lift_strip

    A = frozenset(A)
    if t in A or not A:
        raise InvalidArgument("A must be a nonempty set avoiding t")
    q = contract(g, [A])
    a = min(A)
    value = cut_value(g, A)
    if max_flow_value(q, a, t) != value:
        raise InvalidArgument("A is not a minimum cut side toward t")
    return _lift_strip(build_strip(q, a, t), g)


def _source_set(strip: Strip) -> frozenset[int]:
    return strip.nodes[strip.source]


def far_nodes(strip: Strip, bundle: EdgeBundle) -> dict[int, int] | Infeasible:
    """Edge id -> strip node at its far end, seen from the anchor's node."""
    y_node = strip.node_of[bundle.anchor]
    out = {}
    for eid in bundle.edges:
        a, b = strip.edge_nodes(eid)
        if a == b == y_node:
            return Infeasible("an edge lies inside the anchor's strip node")
        if a == y_node:
            out[eid] = b
        elif b == y_node:
            out[eid] = a
        else:
            raise InvalidArgument(f"edge {eid} does not touch the anchor's strip node")
    return out


def bundle_side(strip: Strip, bundle: EdgeBundle) -> str | Infeasible:
    """Which side of its strip node the bundle lies on: "s", "t", or infeasible.

    A bundle at a vertex of the sink node faces the source by construction.
    """
    if bundle.anchor in _source_set(strip):
        raise InvalidArgument("the bundle anchor lies inside A")
    y_node = strip.node_of[bundle.anchor]
    far = far_nodes(strip, bundle)
    if isinstance(far, Infeasible):
        return far
    if y_node == strip.sink:
        return "s"
    if bundle.edges <= strip.side_s[y_node]:
        return "s"
    if bundle.edges <= strip.side_t[y_node]:
        return "t"
    return Infeasible("the bundle spans both sides of the anchor's strip node")


def cone_above(strip: Strip, bundle: EdgeBundle, side: str) -> frozenset[int]:
    """Vertices that must follow the bundle across any (r,s)-mincut cutting it.

    Facing the source: the cones of the far endpoints. Facing the sink: the cone
    of the anchor's own node. The source node is never included.
    """
    nodes: set[int] = set()
    if side == "s":
        for x in far_nodes(strip, bundle).values():
            if x != strip.source:
                nodes |= reachability_cone(strip, x, TOWARD_S)
    else:
        nodes |= reachability_cone(strip, strip.node_of[bundle.anchor], TOWARD_S)
    nodes.discard(strip.source)
    return strip.side_of(nodes)


def transform_edge_bundle(strip: Strip, bundle: EdgeBundle) -> EdgeBundle | Infeasible:
    """Equivalent bundle made of edges of the cut around A.

    Some (r,s)-mincut cuts all of `bundle` iff some (r,s)-mincut cuts all of the
    result. The result's anchor is the vertex the complement of A contracts to.
    """
    side = bundle_side(strip, bundle)
    if isinstance(side, Infeasible):
        return side
    A = _source_set(strip)
    R = cone_above(strip, bundle, side)
    g = strip.graph
    edges = set()
    for v in R:
        for eid, w in g.adjacency[v]:
            if w in A:
                edges.add(eid)
    for eid, x in far_nodes(strip, bundle).items():
        if x == strip.source:
            edges.add(eid)
    outside = [v for v in g.vertices if v not in A]
    return EdgeBundle(min(outside), frozenset(edges))


def lift_cut(strip: Strip, cut: Cut, bundle: EdgeBundle) -> Cut:
    """Turn a mincut cutting the transformed bundle into one cutting `bundle`.

    With the cut's side B taken away from t, no edge joins the part of B outside
    A to the part of A outside B, so A & B is still a mincut cutting the
    transformed bundle. The part R of the strip above the bundle then joins it.
    The result keeps the orientation of `cut`.
    """
    target = transform_edge_bundle(strip, bundle)
    if isinstance(target, Infeasible):
        raise InvalidArgument(f"bundle cannot be lifted: {target.reason}")
    g = strip.graph
    for eid in target.edges:
        if not cut.contains_edge(g, eid):
            raise InvalidArgument(f"cut misses edge {eid} of the transformed bundle")
    R = cone_above(strip, bundle, bundle_side(strip, bundle))
    V = frozenset(g.vertices)
    t = min(strip.nodes[strip.sink])
    flip = t in cut.side
    side = V - cut.side if flip else cut.side
    new = (side & _source_set(strip)) | R
    return Cut(V - new if flip else new, cut.value)


def nearest_edge_set(strip: Strip, y: int) -> frozenset[int]:
    """Edges whose joint containment in an (s,r)-mincut would pull y off s's nearest side.

    For y in a non-terminal node these are the node's edges facing the source;
    for y in the sink node, every edge leaving the sink node (a set that
    transforms to the whole cut around A).
    """
    if y in _source_set(strip):
        raise InvalidArgument("y lies inside A")
    x = strip.node_of[y]
    if x != strip.sink:
        return strip.side_s[x]
    return frozenset(eid for eid, u, v in strip.graph.edges if (strip.node_of[u] == x) != (strip.node_of[v] == x))


def nearest_check_local(
    strip: Strip,
    y: int,
    quotient_nearest: bool,
    edges_contained: Callable[[frozenset[int]], bool],
) -> bool:
    """Is y on s's nearest (s,r)-mincut side.

    `quotient_nearest` tells whether the contracted complement of A is on that
    side in the quotient graph; `edges_contained` answers containment questions
    for (s,r)-mincuts of the strip's graph.
    """
    if y in _source_set(strip):
        return quotient_nearest
    if not quotient_nearest:
        return False
    return not edges_contained(nearest_edge_set(strip, y))
