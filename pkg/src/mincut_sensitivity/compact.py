"""Sensitivity oracle in linear space.

Each internal hierarchy node keeps a quotient graph of G holding its Steiner set
explicitly, plus the carcass of that Steiner set in the quotient. A child's
graph comes from its parent's by compressing, around the skeleton node of the
child's Steiner set, every neighbouring subcactus into one vertex. Queries walk
from the root to LCA(s, t), moving the edge bundle across each compression, and
answer on the small graph at the LCA; cuts are lifted back level by level.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field

from .carcass import Carcass, build_carcass, merged_strip, strip_between
from .graph import Cut, InvalidArgument, Multigraph, contract, cut_value
from .hierarchy import HierarchyTree, build_gomory_hu, build_hierarchy
from .quadratic import cut_keeping_together, nearest_at, value_increases_at
from .strip import Strip
from .transform import (
    EdgeBundle,
    Infeasible,
    bundle_side,
    far_nodes,
    lift_cut,
    nearest_edge_set,
    transform_edge_bundle,
)
from .trees import OpCounter

STRIP_CACHE_SIZE = 256


@dataclass(frozen=True)
class ContractedVertex:
    """A vertex of a child graph standing for a whole subcactus of the parent skeleton."""

    name: int
    members: frozenset[int]  # vertices of the parent graph
    structure: tuple  # ("tree", a, b) or ("cycle", index) at the child's skeleton node


@dataclass
class CompactNode:
    id: int
    graph: Multigraph
    carcass: Carcass
    contracted: dict[int, ContractedVertex] = field(default_factory=dict)
    swallow: dict[int, int] = field(default_factory=dict)  # parent vertex -> contracted vertex
    last: dict[int, int] = field(default_factory=dict)  # contracted vertex -> deepest node keeping it


def _order_key(c: Carcass, structure: tuple, nodes: set[int]) -> tuple:
    """Total order on the structures around a skeleton node.

    Smallest original vertex held by the subcactus first, then tree edges before
    cycles, then the structure itself.
    """
    g = c.graph
    smallest = min(
        (min(g.expand(c.units.units[u])) for u, nd in c.node_of_unit.items() if nd in nodes),
        default=float("inf"),
    )
    return (smallest, 0 if structure[0] == "tree" else 1, structure[1:])


def contraction_groups(c: Carcass, child_steiner) -> list[tuple[frozenset[int], tuple]]:
    """Vertex groups compressed when moving to the child holding `child_steiner`.

    One group per tree edge or cycle at the child's skeleton node: the terminal
    units of the subcactus beyond it, the stretched units ending inside it, and
    the stretched units assigned to it by the total order on structures.
    """
    sk = c.skeleton
    tr = sk.tree
    anchor = min(child_steiner)
    nu = c.vertex_ends(anchor)[0]
    for v in child_steiner:
        if c.vertex_ends(v) != (nu, nu):
            raise AssertionError("child Steiner set spans several skeleton nodes")
    neighbours = list(tr.children[nu])
    if tr.parent[nu] >= 0:
        neighbours.append(tr.parent[nu])
    structure = {}
    for w in neighbours:
        structure[w] = ("cycle", w - sk.n_nodes) if sk.is_cycle(w) else ("tree", min(nu, w), max(nu, w))
    side: dict[int, int] = {}  # cactus node -> neighbour of nu leading to it
    for x in range(sk.n_nodes):
        if x != nu:
            side[x] = tr.step_toward(nu, x)
    nodes_of = {w: {x for x, h in side.items() if h == w} for w in neighbours}
    key = {w: _order_key(c, structure[w], nodes_of[w]) for w in neighbours}
    members: dict[int, set[int]] = {w: set() for w in neighbours}
    for u, verts in enumerate(c.units.units):
        a, b = c.ends(u)
        if a == nu and b == nu:
            continue
        if a == nu:
            w = side[b]
        elif b == nu:
            w = side[a]
        elif side[a] == side[b]:
            w = side[a]
        else:
            w = min(side[a], side[b], key=key.__getitem__)
        members[w] |= verts
    out = []
    for w in sorted(neighbours, key=key.__getitem__):
        if not members[w]:
            raise AssertionError("an empty subcactus around the child's skeleton node")
        out.append((frozenset(members[w]), structure[w]))
    return out


@dataclass
class CompactOracle:
    graph: Multigraph
    hierarchy: HierarchyTree
    nodes: dict[int, CompactNode]  # internal hierarchy nodes only
    counter: OpCounter
    edge_of_pair: dict[tuple[int, int], int]
    _strips: OrderedDict = field(default_factory=OrderedDict, repr=False)

    def value(self, s: int, t: int) -> int:
        return self.hierarchy[self._lca(s, t)].value

    def _lca(self, s: int, t: int) -> int:
        for v in (s, t):
            if v not in self.hierarchy.leaf:
                raise InvalidArgument(f"unknown vertex {v}")
        if s == t:
            raise InvalidArgument("s and t must differ")
        return self.hierarchy.lca_of(s, t)

    def edge_id(self, x: int, y: int) -> int:
        try:
            return self.edge_of_pair[(min(x, y), max(x, y))]
        except KeyError:
            raise InvalidArgument(f"({x},{y}) is not an edge") from None

    def path(self, top: int, bottom: int) -> list[int]:
        """Hierarchy nodes from `top` down to its descendant `bottom`."""
        tr = self.hierarchy.tree
        return [tr.ancestor(bottom, d) for d in range(tr.depth[top], tr.depth[bottom] + 1)]

    def map_vertex(self, y: int, mu: int) -> int:
        """The vertex of G_mu that y is compressed into (y itself when explicit).

        Jumps from one compression to the next with level-ancestor queries: a
        vertex stays explicit along the path from where it appears down to its
        recorded last node, and is swallowed by the first child off that path.
        """
        h = self.hierarchy
        tr = h.tree
        cur = tr.lca(h.leaf[y], mu)
        name = y
        while cur != mu:
            child = tr.ancestor(mu, tr.depth[cur] + 1)
            name = self.nodes[child].swallow[name]
            cur = tr.lca(self.nodes[child].last[name], mu)
        return name

    def strip_above(self, mu: int, child: int, name: int) -> Strip:
        """Strip of all mincuts between the explicit side A and the contracted vertex's side.

        Built from the carcass at mu: the strip between a child Steiner vertex and
        the smallest Steiner vertex z behind the contracted vertex, with every node
        inside A merged into the source.
        """
        key = (mu, child, name)
        if key in self._strips:
            self._strips.move_to_end(key)
            return self._strips[key]
        c = self.nodes[mu].carcass
        behind = self.nodes[child].contracted[name].members
        z = min(v for v in behind if v in c.steiner)
        s0 = min(self.hierarchy[child].steiner)
        strip = strip_between(c, s0, z)
        inside = {x for x, nd in enumerate(strip.nodes) if not (nd & behind)}
        merged = merged_strip(strip, inside, {strip.sink})
        if merged.nodes[merged.source] != frozenset(c.graph.vertices) - behind:
            raise AssertionError("contracted side is not a union of strip nodes")
        self._strips[key] = merged
        if len(self._strips) > STRIP_CACHE_SIZE:
            self._strips.popitem(last=False)
        return merged

    def strip_at_lca(self, s: int, t: int) -> Strip:
        key = ("lca", s, t)
        if key in self._strips:
            self._strips.move_to_end(key)
            return self._strips[key]
        strip = strip_between(self.nodes[self._lca(s, t)].carcass, s, t)
        self._strips[key] = strip
        if len(self._strips) > STRIP_CACHE_SIZE:
            self._strips.popitem(last=False)
        return strip


def build_compact(g: Multigraph, counter: OpCounter | None = None) -> CompactOracle:
    if not g.is_connected():
        raise InvalidArgument("graph must be connected")
    if g.n < 2:
        raise InvalidArgument("graph needs at least two vertices")
    counter = counter or OpCounter()
    h = build_hierarchy(build_gomory_hu(g), counter)
    root = h.root
    nodes = {root: CompactNode(root, g, build_carcass(g, h[root].steiner, counter))}
    stack = [root]
    while stack:
        mu = stack.pop()
        parent = nodes[mu]
        for child in h[mu].children:
            if h[child].is_leaf:
                continue
            groups = contraction_groups(parent.carcass, h[child].steiner)
            q = contract(parent.graph, [m for m, _ in groups])
            contracted, swallow = {}, {}
            for mem, struct in groups:
                name = min(mem)
                contracted[name] = ContractedVertex(name, mem, struct)
                for v in mem:
                    swallow[v] = name
            nodes[child] = CompactNode(
                child, q, build_carcass(q, h[child].steiner, counter), contracted, swallow
            )
            stack.append(child)
    # deepest node keeping each contracted vertex explicit
    for mu, nd in nodes.items():
        for name in nd.contracted:
            nd.last[name] = _last_explicit(h, nodes, mu, name)
    pairs: dict[tuple[int, int], int] = {}
    for eid, u, v in g.edges:
        pairs.setdefault((min(u, v), max(u, v)), eid)
    return CompactOracle(g, h, nodes, counter, pairs)


def _last_explicit(h: HierarchyTree, nodes: dict[int, CompactNode], mu: int, name: int) -> int:
    """Follow a contracted vertex down through the children that keep it uncompressed."""
    while True:
        nxt = [c for c in h[mu].children if c in nodes and name not in nodes[c].swallow]
        if not nxt:
            return mu
        if len(nxt) > 1:
            raise AssertionError("a contracted vertex stays explicit in two children")
        mu = nxt[0]


# -- containment ------------------------------------------------------------------

def _closure(strip: Strip, start, step) -> set[int]:
    seen = set(start)
    stack = list(start)
    while stack:
        x = stack.pop()
        for y in step[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def contained_in_strip(strip: Strip, bundle: EdgeBundle) -> frozenset[int] | None:
    """Source-side node set of a transversal cutting every bundle edge, if any."""
    far = far_nodes(strip, bundle)
    if isinstance(far, Infeasible):
        return None
    y_node = strip.node_of[bundle.anchor]
    xs = set(far.values())
    all_nodes = set(range(len(strip.nodes)))
    if y_node == strip.source:
        side = all_nodes - _closure(strip, xs, strip.upper)
    elif y_node == strip.sink:
        side = _closure(strip, xs, strip.lower)
    elif bundle.edges <= strip.side_t[y_node]:
        side = _closure(strip, {y_node}, strip.lower)
    elif bundle.edges <= strip.side_s[y_node]:
        side = all_nodes - _closure(strip, {y_node}, strip.upper)
    else:
        return None
    if strip.source not in side or strip.sink in side:
        return None
    return frozenset(side)


@dataclass
class _Step:
    parent: int
    child: int
    strip: Strip | None = None  # set when the bundle was moved across a compression
    bundle: EdgeBundle | None = None  # bundle before the move


def _descend(o: CompactOracle, start: int, s: int, t: int, bundle: EdgeBundle, first: Strip | None = None):
    """Move a bundle of G_start down to the LCA; None when it becomes infeasible.

    `first` overrides the strip used if the bundle is compressed right below start.
    """
    ell = o._lca(s, t)
    path = o.path(start, ell)
    steps = []
    for mu, child in zip(path, path[1:]):
        nd = o.nodes[child]
        step = _Step(mu, child)
        name = nd.swallow.get(bundle.anchor)
        if name is not None:
            strip = first if first is not None and mu == start else o.strip_above(mu, child, name)
            moved = transform_edge_bundle(strip, bundle)
            if isinstance(moved, Infeasible):
                return None, steps
            if moved.anchor != name:
                raise AssertionError("transformed bundle is anchored away from the contracted vertex")
            step.strip, step.bundle = strip, bundle
            bundle = moved
        steps.append(step)
    return bundle, steps


def _ascend(o: CompactOracle, side: frozenset[int], value: int, steps: list[_Step]) -> frozenset[int]:
    for step in reversed(steps):
        nd = o.nodes[step.child]
        up: set[int] = set()
        for v in side:
            cv = nd.contracted.get(v)
            up |= cv.members if cv is not None else {v}
        side = frozenset(up)
        if step.strip is not None:
            side = lift_cut(step.strip, Cut(side, value), step.bundle).side
    return side


def contained_from(
    o: CompactOracle, start: int, s: int, t: int, bundle: EdgeBundle, first: Strip | None = None
) -> Cut | None:
    """An (s,t)-mincut of G_start cutting every bundle edge, over G_start's vertices."""
    moved, steps = _descend(o, start, s, t, bundle, first)
    if moved is None:
        return None
    strip = o.strip_at_lca(s, t)
    nodes = contained_in_strip(strip, moved)
    if nodes is None:
        return None
    value = strip.value
    return Cut(_ascend(o, strip.side_of(nodes), value, steps), value)


def edge_contained_compact(o: CompactOracle, s: int, t: int, bundle: EdgeBundle) -> Cut | None:
    """An (s,t)-mincut of G containing every edge of the bundle, or None."""
    o._lca(s, t)
    EdgeBundle.make(o.graph, bundle.anchor, bundle.edges)
    return contained_from(o, o.hierarchy.root, s, t, bundle)


def ft_value_compact(o: CompactOracle, s: int, t: int, x: int, y: int) -> int:
    eid = o.edge_id(x, y)
    cut = contained_from(o, o.hierarchy.root, s, t, EdgeBundle(x, frozenset((eid,))))
    value = o.value(s, t)
    return value - 1 if cut is not None else value


def report_ft_cut_compact(o: CompactOracle, s: int, t: int, x: int, y: int) -> Cut | None:
    """An (s,t)-mincut containing (x, y) before the failure, or None if none does."""
    eid = o.edge_id(x, y)
    return contained_from(o, o.hierarchy.root, s, t, EdgeBundle(x, frozenset((eid,))))


# -- nearest mincuts -----------------------------------------------------------------

@dataclass
class NearestTrace:
    answer: bool
    replaced: tuple | None  # (node, vertex of G_node, strip, bundle) at the last replacement


def _nearest_bundle(strip: Strip, y: int) -> EdgeBundle:
    return EdgeBundle(y, nearest_edge_set(strip, y))


def nearest_trace(o: CompactOracle, s: int, t: int, y: int) -> NearestTrace:
    """One descent carrying a single bundle.

    Nothing is carried while y stays explicit. At the first compression of y the
    bundle becomes the side of y's strip node facing A; later it is replaced the
    same way only when it no longer lies on one side of y's node.
    """
    if y not in o.hierarchy.leaf:
        raise InvalidArgument(f"unknown vertex {y}")
    ell = o._lca(s, t)
    cur = y
    carried: EdgeBundle | None = None
    replaced = None
    path = o.path(o.hierarchy.root, ell)
    for mu, child in zip(path, path[1:]):
        name = o.nodes[child].swallow.get(cur)
        if name is None:
            continue
        strip = o.strip_above(mu, child, name)
        if carried is None or isinstance(bundle_side(strip, carried), Infeasible):
            carried = _nearest_bundle(strip, cur)
            replaced = (mu, cur, strip, carried)
        moved = transform_edge_bundle(strip, carried)
        if isinstance(moved, Infeasible):
            raise AssertionError("a one-sided bundle failed to transform")
        carried, cur = moved, name
    c = o.nodes[ell].carcass
    if not nearest_at(c, cur, s, t):
        return NearestTrace(False, replaced)
    if carried is not None and contained_in_strip(o.strip_at_lca(s, t), carried) is not None:
        return NearestTrace(False, replaced)
    return NearestTrace(True, replaced)


def check_nearest_mincut(o: CompactOracle, s: int, t: int, y: int) -> bool:
    """Is y on s's side of every (s,t)-mincut."""
    if y == s:
        o._lca(s, t)
        return True
    return nearest_trace(o, s, t, y).answer


def check_nearest_recursive(o: CompactOracle, s: int, t: int, y: int, pick=min) -> bool:
    """Reference version: one containment query for every level that compresses y.

    `pick` chooses the Steiner vertex z behind the contracted vertex.
    """
    ell = o._lca(s, t)
    cur = y
    path = o.path(o.hierarchy.root, ell)
    for mu, child in zip(path, path[1:]):
        name = o.nodes[child].swallow.get(cur)
        if name is None:
            continue
        strip = _strip_above_with(o, mu, child, name, pick)
        if contained_from(o, mu, s, t, _nearest_bundle(strip, cur), strip) is not None:
            return False
        cur = name
    return nearest_at(o.nodes[ell].carcass, cur, s, t)


def _strip_above_with(o: CompactOracle, mu: int, child: int, name: int, pick) -> Strip:
    if pick is min:
        return o.strip_above(mu, child, name)
    c = o.nodes[mu].carcass
    behind = o.nodes[child].contracted[name].members
    z = pick(sorted(v for v in behind if v in c.steiner))
    strip = strip_between(c, min(o.hierarchy[child].steiner), z)
    inside = {x for x, nd in enumerate(strip.nodes) if not (nd & behind)}
    return merged_strip(strip, inside, {strip.sink})


def in_value_compact(o: CompactOracle, s: int, t: int, x: int, y: int) -> int:
    if x == y:
        raise InvalidArgument("inserted edge would be a self-loop")
    for v in (x, y):
        if v not in o.hierarchy.leaf:
            raise InvalidArgument(f"unknown vertex {v}")
    value = o.value(s, t)
    up = (check_nearest_mincut(o, s, t, x) and check_nearest_mincut(o, t, s, y)) or (
        check_nearest_mincut(o, s, t, y) and check_nearest_mincut(o, t, s, x)
    )
    return value + 1 if up else value


def report_in_cut_compact(o: CompactOracle, s: int, t: int, x: int, y: int) -> Cut:
    """An (s,t)-mincut of G; when inserting (x, y) keeps the value, one not separating x and y.

    First try the carcass at the LCA with the images of x and y. If every mincut
    there separates the images, go back to the last level where a nearest check
    replaced its bundle: the mincut cutting that bundle, or the same cut with y's
    strip node moved across, keeps x and y together.
    """
    value = in_value_compact(o, s, t, x, y)
    ell = o._lca(s, t)
    nd = o.nodes[ell]
    if value > nd.carcass.value:
        strip = o.strip_at_lca(s, t)
        return Cut(nd.graph.expand(strip.nodes[strip.source]), strip.value)
    xl, yl = o.map_vertex(x, ell), o.map_vertex(y, ell)
    c = nd.carcass
    if xl == yl or not value_increases_at(c, s, t, xl, yl):
        cut = cut_keeping_together(c, s, t, xl, yl)
        return Cut(nd.graph.expand(cut.side), cut.value)
    for w in (y, x):
        for a, b in ((s, t), (t, s)):
            found = _candidates_from_trace(o, s, t, x, y, nearest_trace(o, a, b, w))
            if found is not None:
                return found
    raise AssertionError("value is unchanged but no candidate mincut keeps the new edge inside")


def _candidates_from_trace(o, s, t, x, y, trace: NearestTrace) -> Cut | None:
    if trace.replaced is None:
        return None
    mu, w, strip, bundle = trace.replaced
    first = contained_from(o, mu, s, t, bundle, strip)
    if first is None:
        return None
    g_mu = o.nodes[mu].graph
    moved = strip.nodes[strip.node_of[w]]
    second = first.side - moved if moved <= first.side else first.side | moved
    for side in (first.side, second):
        if cut_value(g_mu, side) != first.value:
            continue
        full = g_mu.expand(side)
        if (x in full) == (y in full):
            return Cut(full, first.value)
    return None


# -- accounting ------------------------------------------------------------------------

@dataclass
class CompactStats:
    levels: int
    units: int
    non_steiner_units: int
    contracted_vertices: int
    non_steiner_degree: int
    graph_edges: int


def check_compact(o: CompactOracle) -> CompactStats:
    """Assert the structural invariants of every compressed level; return size counters."""
    h = o.hierarchy
    units = non_steiner = degree = edges = contracted = 0
    seen_non_steiner: dict[tuple[int, int], int] = {}
    for mu, nd in o.nodes.items():
        c = nd.carcass
        edges += nd.graph.m
        k, ns = c.unit_counts()
        units += k
        non_steiner += ns
        for u, verts in enumerate(c.units.units):
            if c.units.steiner[u]:
                continue
            degree += sum(1 for eid, a, b in nd.graph.edges if (a in verts) != (b in verts))
            for v in verts:
                intro = _introduced_at(o, mu, v)
                if intro is not None:
                    key = (intro, v)
                    seen_non_steiner[key] = seen_non_steiner.get(key, 0) + 1
                    if seen_non_steiner[key] > 1:
                        raise AssertionError(f"contracted vertex {key} in two non-Steiner units")
        if mu == h.root:
            continue
        parent = o.nodes[h[mu].parent]
        c_parent = parent.carcass.value
        sk = parent.carcass.skeleton
        nu = parent.carcass.vertex_ends(min(h[mu].steiner))[0]
        incident = len(sk.tree.children[nu]) + (1 if sk.tree.parent[nu] >= 0 else 0)
        if len(nd.contracted) != incident:
            raise AssertionError("contracted vertex count differs from incident structures")
        for name, cv in nd.contracted.items():
            contracted += 1
            if cut_value(parent.graph, cv.members) != c_parent:
                raise AssertionError("contracted side is not a Steiner mincut of the parent")
            if nd.graph.degree(name) != c_parent:
                raise AssertionError("contracted vertex degree differs from the parent value")
    return CompactStats(len(o.nodes), units, non_steiner, contracted, degree, edges)


def _introduced_at(o: CompactOracle, mu: int, v: int) -> int | None:
    """Hierarchy node that introduced contracted vertex v of G_mu, or None if v is original."""
    tr = o.hierarchy.tree
    node = mu
    while node != o.hierarchy.root:
        nd = o.nodes[node]
        if v in nd.contracted:
            return node
        if v in nd.swallow:
            return None
        node = tr.parent[node]
    return None
