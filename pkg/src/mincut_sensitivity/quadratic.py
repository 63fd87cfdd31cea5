"""Sensitivity oracle in quadratic space.

Every internal node of the hierarchy tree keeps the skeleton and the unit
projections of its Steiner set (computed on the whole graph). The pair (s, t)
is handled at the LCA of s and t, where every (s,t)-mincut is a Steiner mincut
of that node, so value queries reduce to a handful of LCA queries on one
skeleton tree.
"""
from __future__ import annotations

from dataclasses import dataclass

from .carcass import Carcass, build_carcass, strip_between
from .cactus import SkeletonCut
from .graph import Cut, InvalidArgument, Multigraph
from .hierarchy import HierarchyTree, build_gomory_hu, build_hierarchy
from .strip import Strip
from .trees import OpCounter


class NotContained(RuntimeError):
    """No (s,t)-mincut contains the requested edge."""


@dataclass
class QuadraticOracle:
    graph: Multigraph
    hierarchy: HierarchyTree
    carcass: dict[int, Carcass]  # internal hierarchy node -> carcass of its Steiner set
    counter: OpCounter
    edge_of_pair: dict[tuple[int, int], int]  # (min, max) endpoints -> smallest edge id

    def value(self, s: int, t: int) -> int:
        return self.hierarchy[self._lca(s, t)].value

    def _lca(self, s: int, t: int) -> int:
        for v in (s, t):
            if v not in self.hierarchy.leaf:
                raise InvalidArgument(f"unknown vertex {v}")
        if s == t:
            raise InvalidArgument("s and t must differ")
        return self.hierarchy.lca_of(s, t)

    def at(self, s: int, t: int) -> Carcass:
        return self.carcass[self._lca(s, t)]

    def edge_id(self, x: int, y: int) -> int:
        try:
            return self.edge_of_pair[(min(x, y), max(x, y))]
        except KeyError:
            raise InvalidArgument(f"({x},{y}) is not an edge") from None


def build_quadratic(g: Multigraph, counter: OpCounter | None = None) -> QuadraticOracle:
    if not g.is_connected():
        raise InvalidArgument("graph must be connected")
    counter = counter or OpCounter()
    h = build_hierarchy(build_gomory_hu(g), counter)
    carcasses = {nd.id: build_carcass(g, nd.steiner, counter) for nd in h.internal()}
    pairs: dict[tuple[int, int], int] = {}
    for eid, u, v in g.edges:
        pairs.setdefault((min(u, v), max(u, v)), eid)
    return QuadraticOracle(g, h, carcasses, counter, pairs)


# -- value queries -----------------------------------------------------------

def _node(c: Carcass, v: int) -> int:
    return c.vertex_ends(v)[0]


def contained_at(c: Carcass, s: int, t: int, x: int, y: int) -> bool:
    """Does some Steiner mincut separating s and t cut the edge (x, y)."""
    proj = c.edge_projection(x, y)
    if proj is None:
        return False
    return c.skeleton.paths_intersect(proj, (_node(c, s), _node(c, t)))


def nearest_at(c: Carcass, v: int, a: int, b: int) -> bool:
    """Is v on a's side of every Steiner mincut separating a from b."""
    pa, pb = _node(c, a), _node(c, b)
    e1, e2 = c.vertex_ends(v)
    sk = c.skeleton
    return sk.on_path(pa, e1, pb) and sk.on_path(pa, e2, pb)


def edge_contained(o: QuadraticOracle, s: int, t: int, x: int, y: int) -> bool:
    o.edge_id(x, y)
    return contained_at(o.at(s, t), s, t, x, y)


def ft_mincut_value(o: QuadraticOracle, s: int, t: int, x: int, y: int) -> int:
    o.edge_id(x, y)
    nd = o._lca(s, t)
    c = o.carcass[nd]
    return c.value - 1 if contained_at(c, s, t, x, y) else c.value


def value_increases_at(c: Carcass, s: int, t: int, x: int, y: int) -> bool:
    return (nearest_at(c, x, s, t) and nearest_at(c, y, t, s)) or (
        nearest_at(c, y, s, t) and nearest_at(c, x, t, s)
    )


def in_mincut_value(o: QuadraticOracle, s: int, t: int, x: int, y: int) -> int:
    if x == y:
        raise InvalidArgument("inserted edge would be a self-loop")
    for v in (x, y):
        if v not in o.hierarchy.leaf:
            raise InvalidArgument(f"unknown vertex {v}")
    c = o.at(s, t)
    if _node(c, s) == _node(c, t):
        raise AssertionError("s and t share a skeleton node at their LCA")
    return c.value + 1 if value_increases_at(c, s, t, x, y) else c.value


# -- cut reporting -------------------------------------------------------------

def _structural_edges(sk, walk: list[int]) -> set[tuple]:
    """Tree edges and cycle edges used by a proper walk in the skeleton tree."""
    out: set[tuple] = set()
    for i in range(len(walk) - 1):
        a, b = walk[i], walk[i + 1]
        if not sk.is_cycle(a) and not sk.is_cycle(b):
            out.add(("tree", min(a, b), max(a, b)))
        elif sk.is_cycle(b):
            ci = b - sk.n_nodes
            size = len(sk.cycles[ci])
            p, q = sk.cycle_pos[ci][a], sk.cycle_pos[ci][walk[i + 2]]
            out.add(("cycle", ci, p if (p + 1) % size == q else q))
    return out


def _cut_uses(cut: SkeletonCut, edges: set[tuple]) -> bool:
    if cut.kind == "tree":
        return ("tree", cut.a, cut.b) in edges
    return ("cycle", cut.a, cut.b) in edges or ("cycle", cut.a, cut.c) in edges


@dataclass
class CutView:
    """Units of a carcass classified against one skeleton cut, oriented from s."""

    carcass: Carcass
    cut: SkeletonCut
    source_nodes: frozenset[int]
    source_units: list[int]
    free: dict[int, tuple[int, int]]  # stretched unit -> (source-side end, sink-side end)

    def status(self, u: int) -> str:
        if u in self.free:
            return "free"
        a, _ = self.carcass.ends(u)
        return "s" if a in self.source_nodes else "t"

    def closure(self, u: int, toward_source: bool = True) -> set[int]:
        """Free units forced to follow u: behind it (toward the source) or ahead of it.

        Same-path units are compared by their topological rank; units on other
        paths qualify when their path extends u's path in that direction.
        """
        c = self.carcass
        sk = c.skeleton
        s_end, t_end = self.free[u]
        key = c.path_of_unit[u]
        lead = s_end if toward_source else t_end
        ascending = key[0] == lead
        out = {u}
        for v in self.free:
            if v == u:
                continue
            if c.path_of_unit[v] == key:
                if (c.tau[v] <= c.tau[u]) == ascending:
                    out.add(v)
            elif sk.extendable((s_end, t_end), c.path_of_unit[v], lead) is not None:
                out.add(v)
        return out

    def side(self, extra: set[int] = frozenset()) -> frozenset[int]:
        units = self.carcass.units.units
        out: set[int] = set()
        for u in self.source_units:
            out |= units[u]
        for u in extra:
            out |= units[u]
        return frozenset(out)


def cut_view(c: Carcass, cut: SkeletonCut, s: int) -> CutView:
    sk = c.skeleton
    away = sk.cut_side(cut)
    ps = _node(c, s)
    src = away if ps in away else frozenset(range(sk.n_nodes)) - away
    source_units, free = [], {}
    for u in range(len(c.units.units)):
        a, b = c.ends(u)
        ina, inb = a in src, b in src
        if ina and inb:
            source_units.append(u)
        elif ina != inb:
            free[u] = (a, b) if ina else (b, a)
    return CutView(c, cut, src, source_units, free)


def report_ft_cut(o: QuadraticOracle, s: int, t: int, x: int, y: int) -> Cut:
    """An (s,t)-mincut containing the edge (x, y), before the failure."""
    eid = o.edge_id(x, y)
    c = o.at(s, t)
    proj = c.edge_projection(x, y)
    if proj is None or not c.skeleton.paths_intersect(proj, (_node(c, s), _node(c, t))):
        raise NotContained(f"no ({s},{t})-mincut contains edge ({x},{y})")
    return cut_containing(c, s, t, x, y, eid)


def cut_containing(c: Carcass, s: int, t: int, x: int, y: int, eid: int) -> Cut:
    sk = c.skeleton
    used = _structural_edges(sk, sk.tree.path(*c.edge_projection(x, y)))
    cut = next(k for k in sk.cuts_separating(_node(c, s), _node(c, t)) if _cut_uses(k, used))
    view = cut_view(c, cut, s)
    ux, uy = c.unit(x), c.unit(y)
    extra: set[int] = set()
    for u in (ux, uy):
        if u in view.free and eid in c.toward[u][view.free[u][1]]:
            extra = view.closure(u)
            break
    side = view.side(extra)
    if (x in side) == (y in side):
        raise AssertionError("reported cut does not contain the edge")
    return Cut(side, c.value)


def report_in_cut(o: QuadraticOracle, s: int, t: int, x: int, y: int) -> Cut:
    """An (s,t)-mincut of the current graph that survives inserting (x, y) when possible.

    If the insertion raises the value, any mincut is returned; otherwise the
    returned mincut keeps x and y on the same side.
    """
    if x == y:
        raise InvalidArgument("inserted edge would be a self-loop")
    c = o.at(s, t)
    return cut_keeping_together(c, s, t, x, y)


def cut_keeping_together(c: Carcass, s: int, t: int, x: int, y: int) -> Cut:
    sk = c.skeleton
    cuts = sk.cuts_separating(_node(c, s), _node(c, t))
    if value_increases_at(c, s, t, x, y):
        return Cut(cut_view(c, cuts[0], s).side(), c.value)
    ux, uy = c.unit(x), c.unit(y)
    for cut in cuts:
        view = cut_view(c, cut, s)
        sx, sy = view.status(ux), view.status(uy)
        if "t" not in (sx, sy):
            extra = set()
            for u, st in ((ux, sx), (uy, sy)):
                if st == "free":
                    extra |= view.closure(u)
            return Cut(view.side(extra), c.value)
        if "s" not in (sx, sy):
            ahead = set()
            for u, st in ((ux, sx), (uy, sy)):
                if st == "free":
                    ahead |= view.closure(u, toward_source=False)
            return Cut(view.side(set(view.free) - ahead), c.value)
    raise AssertionError("value is unchanged but every mincut separates the new edge")


# -- strip reporting -------------------------------------------------------------

def report_strip(o: QuadraticOracle, s: int, t: int) -> Strip:
    """The (s,t)-strip, rebuilt from the skeleton link of the path between s and t."""
    return strip_between(o.at(s, t), s, t)
