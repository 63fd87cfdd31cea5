"""Per-vertex labels: decide and list mincut changes from the two endpoint labels only.

Every label shares the hierarchy tree and the skeleton of each internal node's
Steiner set. The part owned by vertex v is its unit projection at every internal
node. The skeleton node of a Steiner vertex at a node follows from the child of
that node holding it, which is shared data as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .cactus import Skeleton
from .graph import InvalidArgument, Multigraph
from .hierarchy import HierarchyTree
from .quadratic import QuadraticOracle, build_quadratic

FAIL = "fail"
INSERT = "insert"


@dataclass(frozen=True)
class SharedStructure:
    """Data every label points to: nothing in here is specific to one vertex."""

    hierarchy: HierarchyTree
    skeletons: dict[int, Skeleton]  # internal node -> skeleton tree of its Steiner set
    child_node: dict[int, dict[int, int]]  # internal node -> child -> skeleton node of the child's Steiner set

    def node_of_steiner(self, mu: int, s: int) -> int:
        return self.child_node[mu][self.hierarchy.child_toward(mu, s)]


@dataclass(frozen=True)
class Projection:
    unit: int
    ends: tuple[int, int]  # a node twice, or the ends of a proper path


@dataclass(frozen=True, eq=False)
class VertexLabel:
    owner: int
    shared: SharedStructure
    projection: dict[int, Projection]  # internal node -> owner's unit projection
    neighbours: frozenset[int]

    def size(self) -> int:
        """Number of owner-specific records."""
        return len(self.projection) + len(self.neighbours)


def build_labels(g: Multigraph, oracle: QuadraticOracle | None = None, only=None) -> dict[int, VertexLabel]:
    """Labels for every vertex, or only for the vertices in `only`."""
    o = oracle or build_quadratic(g)
    h = o.hierarchy
    skeletons, child_node = {}, {}
    for nd in h.internal():
        c = o.carcass[nd.id]
        skeletons[nd.id] = c.skeleton
        child_node[nd.id] = {ch: c.vertex_ends(min(h[ch].steiner))[0] for ch in nd.children}
    shared = SharedStructure(h, skeletons, child_node)
    wanted = g.vertices if only is None else sorted(set(only))
    labels = {}
    for v in wanted:
        if v not in g.adjacency:
            raise InvalidArgument(f"unknown vertex {v}")
        proj = {}
        for nd in h.internal():
            c = o.carcass[nd.id]
            u = c.unit(v)
            proj[nd.id] = Projection(u, c.ends(u))
        labels[v] = VertexLabel(v, shared, proj, frozenset(w for _, w in g.adjacency[v]))
    return labels


def _check_pair(lx: VertexLabel, ly: VertexLabel, mode: str) -> SharedStructure:
    if lx.shared is not ly.shared:
        raise InvalidArgument("labels come from different builds")
    if lx.owner == ly.owner:
        raise InvalidArgument("edge endpoints must differ")
    if mode == FAIL:
        if ly.owner not in lx.neighbours:
            raise InvalidArgument(f"({lx.owner},{ly.owner}) is not an edge")
    elif mode != INSERT:
        raise InvalidArgument(f"unknown mode {mode!r}")
    return lx.shared


def _edge_path(sk: Skeleton, px: Projection, py: Projection) -> tuple[int, int] | None:
    if px.unit == py.unit:
        return None
    return sk.edge_projection(px.ends, py.ends)


def _behind(sk: Skeleton, p: Projection, a: int, b: int) -> bool:
    """Is the unit on a's side of every Steiner mincut separating nodes a and b."""
    return sk.on_path(a, p.ends[0], b) and sk.on_path(a, p.ends[1], b)


def value_changed(lx: VertexLabel, ly: VertexLabel, s: int, t: int, mode: str) -> bool:
    """Does failing (or inserting) the edge (x, y) change the (s,t)-mincut value."""
    sh = _check_pair(lx, ly, mode)
    h = sh.hierarchy
    for v in (s, t):
        if v not in h.leaf:
            raise InvalidArgument(f"unknown vertex {v}")
    if s == t:
        raise InvalidArgument("s and t must differ")
    mu = h.lca_of(s, t)
    sk = sh.skeletons[mu]
    ps, pt = sh.node_of_steiner(mu, s), sh.node_of_steiner(mu, t)
    px, py = lx.projection[mu], ly.projection[mu]
    if mode == FAIL:
        path = _edge_path(sk, px, py)
        return path is not None and sk.paths_intersect(path, (ps, pt))
    return (_behind(sk, px, ps, pt) and _behind(sk, py, pt, ps)) or (
        _behind(sk, py, ps, pt) and _behind(sk, px, pt, ps)
    )


def on_nearest_side(ly: VertexLabel, s: int, t: int) -> bool:
    """Is the label's owner on s's side of every (s,t)-mincut."""
    sh = ly.shared
    h = sh.hierarchy
    for v in (s, t):
        if v not in h.leaf:
            raise InvalidArgument(f"unknown vertex {v}")
    if s == t:
        raise InvalidArgument("s and t must differ")
    mu = h.lca_of(s, t)
    return _behind(sh.skeletons[mu], ly.projection[mu], sh.node_of_steiner(mu, s), sh.node_of_steiner(mu, t))


# -- affected pairs --------------------------------------------------------------------

@dataclass(frozen=True)
class Record:
    """Changed pairs at one hierarchy node: pairs of its Steiner set on distinct skeleton nodes.

    Insertion: both skeleton nodes lie on `path`. Failure: the two nodes fall in
    different groups of the link of `path`.
    """

    node: int
    kind: str
    path: tuple[int, int]


def _record_pairs(sh: SharedStructure, rec: Record) -> list[tuple[int, int]]:
    sk = sh.skeletons[rec.node]
    h = sh.hierarchy
    groups = [(sh.child_node[rec.node][ch], h[ch].steiner) for ch in h[rec.node].children]
    if rec.kind == INSERT:
        on = {x for x in sk.tree.path(*rec.path) if not sk.is_cycle(x)}
        keep = lambda a, b: a in on and b in on
    else:
        keep = sk.link(*rec.path).separated
    out = []
    for (na, sa), (nb, sb) in combinations(groups, 2):
        if na != nb and keep(na, nb):
            out.extend((min(u, v), max(u, v)) for u in sa for v in sb)
    return out


@dataclass
class AffectedPairs:
    mode: str
    edge: tuple[int, int]
    shared: SharedStructure
    records: list[Record] = field(default_factory=list)

    def size(self) -> int:
        return len(self.records)

    def expand(self) -> list[tuple[int, int]]:
        """Explicit pairs (u, v) with u < v, in lexicographic order."""
        return sorted({p for rec in self.records for p in _record_pairs(self.shared, rec)})


def _join_path(sk: Skeleton, px: Projection, py: Projection, pick=min) -> tuple[int, int]:
    """Shortest skeleton-tree path between the two projections.

    When they share skeleton nodes this is one shared cactus node, chosen by
    `pick` (smallest id by default), or a shared cycle vertex when no cactus node
    is shared.
    """
    tr = sk.tree
    (a1, b1), (a2, b2) = px.ends, py.ends
    p, p2 = tr.median(a1, b1, a2), tr.median(a1, b1, b2)
    q, q2 = tr.median(a2, b2, a1), tr.median(a2, b2, b1)
    if p == p2 and q == q2 and not tr.on_path(q, a1, b1):
        return p, q
    common = [v for v in tr.path(p, p2) if tr.on_path(v, a2, b2)]
    real = [v for v in common if not sk.is_cycle(v)]
    w = pick(real) if real else min(common)
    return w, w


def affected_pairs(lx: VertexLabel, ly: VertexLabel, mode: str, pick=min) -> AffectedPairs:
    """Compact description of every pair whose mincut value changes.

    Walks the hierarchy down from the LCA of x and y. Where x and y share a unit,
    only pairs inside that unit can change, so the walk follows the single child
    whose Steiner set lies in it (if the unit is a terminal one). Otherwise the
    node's changed pairs are recorded and the walk continues into every child
    (failure) or into the children on the joining path (insertion).
    """
    sh = _check_pair(lx, ly, mode)
    h = sh.hierarchy
    out = AffectedPairs(mode, (lx.owner, ly.owner), sh)
    stack = [h.lca_of(lx.owner, ly.owner)]
    while stack:
        mu = stack.pop()
        if h[mu].is_leaf:
            continue
        px, py = lx.projection[mu], ly.projection[mu]
        at = sh.child_node[mu]
        if px.unit == py.unit:
            a, b = px.ends
            if a == b:
                stack.extend(ch for ch in h[mu].children if at[ch] == a)
            continue
        sk = sh.skeletons[mu]
        if mode == FAIL:
            rec = Record(mu, FAIL, sk.edge_projection(px.ends, py.ends))
            stack.extend(h[mu].children)
        else:
            rec = Record(mu, INSERT, _join_path(sk, px, py, pick))
            stack.extend(ch for ch in h[mu].children if sk.on_path(at[ch], *rec.path))
        if _record_pairs(sh, rec):
            out.records.append(rec)
    out.records.sort(key=lambda r: r.node)
    return out
