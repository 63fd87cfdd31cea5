"""Everything about the Steiner mincuts of one Steiner set S, kept in small space.

Bunches are the S-bipartitions realised by S-mincuts, each with the strip of all
mincuts realising it. Units are the classes of vertices no S-mincut separates.
Units that sit strictly inside some bunch strip are stretched; the others are
terminal and become the nodes of a cactus skeleton. A stretched unit projects to
a proper path of the skeleton: exactly the skeleton cuts on that path are the
ones where the unit is free to go either way.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .cactus import RawCactus, Skeleton, SkeletonCut, bits, cactus_from_family
from .graph import InvalidArgument, Multigraph, contract, max_flow, max_flow_value
from .strip import Strip, build_strip, reachability_cone, TOWARD_S, TOWARD_T
from .trees import OpCounter

BUNCH_CAP = 16


class CapacityError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Bunch:
    steiner_side: frozenset[int]  # Steiner vertices on the source side; holds min(S)
    strip: Strip


@dataclass
class UnitPartition:
    unit_of: dict[int, int]
    units: list[frozenset[int]]
    stretched: list[bool]
    steiner: list[bool]

    def terminal(self, u: int) -> bool:
        return not self.stretched[u]


def _lift_strip(strip: Strip, g: Multigraph) -> Strip:
    """Re-express a strip computed on a quotient of g over g's own vertices."""
    q = strip.graph
    nodes = tuple(frozenset(v for x in nd for v in q.origin_of(x)) for nd in strip.nodes)
    order = sorted(range(len(nodes)), key=lambda i: min(nodes[i]))
    renum = {old: new for new, old in enumerate(order)}
    nodes = tuple(nodes[i] for i in order)
    node_of = {v: i for i, nd in enumerate(nodes) for v in nd}
    return Strip(
        g,
        nodes,
        node_of,
        renum[strip.source],
        renum[strip.sink],
        {renum[k]: v for k, v in strip.side_s.items()},
        {renum[k]: v for k, v in strip.side_t.items()},
        strip.value,
    )


def merged_strip(strip: Strip, source_nodes, sink_nodes) -> Strip:
    """Strip obtained by merging node sets into the source and the sink."""
    src = strip.side_of(source_nodes)
    snk = strip.side_of(sink_nodes)
    rest = [x for x in range(len(strip.nodes)) if x not in source_nodes and x not in sink_nodes]
    classes = [src, snk] + [strip.nodes[x] for x in rest]
    order = sorted(range(len(classes)), key=lambda i: min(classes[i]))
    nodes = tuple(classes[i] for i in order)
    pos = {old: new for new, old in enumerate(order)}
    side_s = {pos[2 + k]: strip.side_s[x] for k, x in enumerate(rest)}
    side_t = {pos[2 + k]: strip.side_t[x] for k, x in enumerate(rest)}
    node_of = {v: i for i, nd in enumerate(nodes) for v in nd}
    return Strip(strip.graph, nodes, node_of, pos[0], pos[1], side_s, side_t, strip.value)


def _steiner_check(g: Multigraph, S) -> list[int]:
    S = sorted(set(S))
    if len(S) < 2:
        raise InvalidArgument("a Steiner set needs at least two vertices")
    return S


def compute_bunches(g: Multigraph, S, cap: int = BUNCH_CAP) -> list[Bunch]:
    """All S-bipartitions of minimum contracted cut value, by trying every split."""
    S = _steiner_check(g, S)
    if len(S) > cap:
        raise CapacityError(f"bunch enumeration capped at |S|={cap}, got {len(S)}")
    s0, rest = S[0], S[1:]
    splits = []
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            side = frozenset((s0,) + extra)
            other = frozenset(S) - side
            q = contract(g, [side, other])
            splits.append((max_flow_value(q, min(side), min(other)), side, other, q))
    best = min(v for v, *_ in splits)
    out = []
    for v, side, other, q in splits:
        if v == best:
            out.append(Bunch(side, _lift_strip(build_strip(q, min(side), min(other)), g)))
    return sorted(out, key=lambda b: sorted(b.steiner_side))


def enumerate_bunches(g: Multigraph, S) -> tuple[int, list[Bunch], list[Strip]]:
    """All bunches, read off the (s0, t)-strips for a fixed s0 instead of trying every split.

    Every S-mincut separates s0 = min(S) from some Steiner t with c(s0, t) = c_S, so it
    is a transversal of that strip. The Steiner bipartitions such a strip realises are
    the down-sets of its Steiner-holding non-terminals.
    """
    S = _steiner_check(g, S)
    s0 = S[0]
    flows = {t: max_flow(g, s0, t).value for t in S[1:]}
    value = min(flows.values())
    base = [build_strip(g, s0, t) for t in S[1:] if flows[t] == value]
    steiner = set(S)
    found: dict[frozenset[int], Bunch] = {}
    for strip in base:
        holders = [x for x in strip.non_terminals if strip.nodes[x] & steiner]
        cone_s = {x: reachability_cone(strip, x, TOWARD_S) for x in holders}
        cone_t = {x: reachability_cone(strip, x, TOWARD_T) for x in holders}
        below = {x: {y for y in holders if y in cone_s[x] and y != x} for x in holders}
        holders.sort(key=lambda x: len(below[x]))
        base_side = strip.nodes[strip.source] & steiner
        for down in _downsets(holders, below):
            side = set(base_side)
            for x in down:
                side |= strip.nodes[x] & steiner
            key = frozenset(side)
            if key in found:
                continue
            src = {strip.source}
            for x in down:
                src |= cone_s[x]
            snk = {strip.sink}
            for x in holders:
                if x not in down:
                    snk |= cone_t[x]
            found[key] = Bunch(key, merged_strip(strip, src, snk))
    bunches = sorted(found.values(), key=lambda b: sorted(b.steiner_side))
    return value, bunches, base


def _downsets(items: list[int], below: dict[int, set[int]]):
    """Yield every down-closed subset of a poset given in a linear extension."""
    chosen: set[int] = set()
    excluded: set[int] = set()

    def rec(i: int):
        if i == len(items):
            yield frozenset(chosen)
            return
        x = items[i]
        if below[x] <= chosen:
            chosen.add(x)
            yield from rec(i + 1)
            chosen.discard(x)
        excluded.add(x)
        yield from rec(i + 1)
        excluded.discard(x)

    yield from rec(0)


def compute_units(g: Multigraph, S, bunches: list[Bunch]) -> UnitPartition:
    steiner = set(S)
    sig: dict[int, list[int]] = {v: [] for v in g.vertices}
    for b in bunches:
        for v in g.vertices:
            sig[v].append(b.strip.node_of[v])
    classes: dict[tuple, set[int]] = {}
    for v in g.vertices:
        classes.setdefault(tuple(sig[v]), set()).add(v)
    units = sorted((frozenset(c) for c in classes.values()), key=min)
    unit_of = {v: i for i, u in enumerate(units) for v in u}
    stretched = [False] * len(units)
    for b in bunches:
        for x in b.strip.non_terminals:
            for v in b.strip.nodes[x]:
                stretched[unit_of[v]] = True
    return UnitPartition(unit_of, units, stretched, [bool(u & steiner) for u in units])


@dataclass
class Carcass:
    graph: Multigraph
    steiner: frozenset[int]
    value: int
    units: UnitPartition
    skeleton: Skeleton
    node_of_unit: dict[int, int]  # terminal unit -> cactus node
    path_of_unit: dict[int, tuple[int, int]]  # stretched unit -> (node, node), smaller first
    toward: dict[int, dict[int, frozenset[int]]]  # stretched unit -> endpoint -> edges facing it
    tau: dict[int, int] = field(default_factory=dict)
    path_units: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    bunches: list[Bunch] | None = None

    def unit(self, v: int) -> int:
        return self.units.unit_of[v]

    def ends(self, u: int) -> tuple[int, int]:
        """Projection of a unit: (node, node) for terminal units, the path ends otherwise."""
        if u in self.node_of_unit:
            nd = self.node_of_unit[u]
            return nd, nd
        return self.path_of_unit[u]

    def vertex_ends(self, v: int) -> tuple[int, int]:
        return self.ends(self.units.unit_of[v])

    def edge_projection(self, x: int, y: int) -> tuple[int, int] | None:
        ux, uy = self.units.unit_of[x], self.units.unit_of[y]
        if ux == uy:
            return None
        return self.skeleton.edge_projection(self.ends(ux), self.ends(uy))

    def unit_counts(self) -> tuple[int, int]:
        """(units, non-Steiner units)."""
        return len(self.units.units), sum(1 for f in self.units.steiner if not f)


def build_carcass(g: Multigraph, S, counter: OpCounter | None = None, keep_bunches: bool = False) -> Carcass:
    S = frozenset(_steiner_check(g, S))
    value, bunches, _ = enumerate_bunches(g, S)
    units = compute_units(g, S, bunches)
    for b in bunches:
        for x in b.strip.non_terminals:
            us = {units.unit_of[v] for v in b.strip.nodes[x]}
            if len(us) != 1:
                raise AssertionError("a non-terminal of a bunch strip spans several units")
    terminal = [u for u in range(len(units.units)) if not units.stretched[u]]
    local = {u: i for i, u in enumerate(terminal)}
    root = local[units.unit_of[min(S)]]
    masks: dict[int, Bunch] = {}
    for b in bunches:
        sink = b.strip.nodes[b.strip.sink]
        mask = 0
        for u in terminal:
            if units.units[u] <= sink:
                mask |= 1 << local[u]
        masks[mask] = b
    raw = cactus_from_family(len(terminal), root, masks, with_ports=any(units.stretched))
    raw = _renumber(raw, [units.units[u] for u in terminal])
    node_units = [frozenset(terminal[i] for i in bits(m)) for m in raw.members]
    skeleton = Skeleton(node_units, raw.tree_edges, raw.cycles, raw.root, counter)
    node_of_unit = {u: nd for nd, mem in enumerate(node_units) for u in mem}
    cut_bunch = _match_cuts(skeleton, masks, local, node_of_unit)
    path_of_unit, toward = project(units, skeleton, cut_bunch)
    carcass = Carcass(g, S, value, units, skeleton, node_of_unit, path_of_unit, toward)
    carcass = _drop_unused_ports(carcass, raw.ports, counter)
    carcass = _triangles_to_cycles(carcass, counter)
    compute_tau(carcass)
    if keep_bunches:
        carcass.bunches = bunches
    return carcass


def _renumber(raw: RawCactus, unit_sets: list[frozenset[int]]) -> RawCactus:
    """Non-empty nodes first, by smallest vertex; empty nodes after, in creation order."""

    def key(i: int):
        m = raw.members[i]
        if not m:
            return (1, i)
        return (0, min(min(unit_sets[e]) for e in bits(m)))

    order = sorted(range(len(raw.members)), key=key)
    pos = {old: new for new, old in enumerate(order)}
    return RawCactus(
        [raw.members[i] for i in order],
        [(pos[a], pos[b]) for a, b in raw.tree_edges],
        [[pos[v] for v in c] for c in raw.cycles],
        pos[raw.root],
        [(pos[a], pos[b]) for a, b in raw.ports],
    )


def _match_cuts(skeleton: Skeleton, masks: dict[int, Bunch], local, node_of_unit) -> list[tuple[SkeletonCut, frozenset[int], Bunch]]:
    """Pair every skeleton cut with the bunch inducing the same terminal-unit bipartition."""
    out = []
    hit = set()
    for cut in skeleton.cuts():
        side = skeleton.cut_side(cut)
        mask = 0
        for u, nd in node_of_unit.items():
            if nd in side:
                mask |= 1 << local[u]
        if mask not in masks:
            raise AssertionError(f"skeleton cut {cut.label} induces no bunch")
        hit.add(mask)
        out.append((cut, side, masks[mask]))
    if len(hit) != len(masks):
        raise AssertionError("some bunch is not induced by any skeleton cut")
    return out


def project(units: UnitPartition, skeleton: Skeleton, cut_bunch) -> tuple[dict, dict]:
    """Proper path of every stretched unit, with its inherent partition keyed by endpoint."""
    stretched = [u for u in range(len(units.units)) if units.stretched[u]]
    if not stretched:
        return {}, {}
    n_nodes = skeleton.n_nodes
    in_side = np.zeros((len(cut_bunch), n_nodes), dtype=np.int64)
    status = np.zeros((len(stretched), len(cut_bunch)), dtype=np.int64)  # +1 sink, -1 source, 0 free
    reps = [min(units.units[u]) for u in stretched]
    for j, (cut, side, bunch) in enumerate(cut_bunch):
        in_side[j, list(side)] = 1
        st = bunch.strip
        for i, v in enumerate(reps):
            x = st.node_of[v]
            status[i, j] = 1 if x == st.sink else (-1 if x == st.source else 0)
    need_in = (status == 1).astype(np.int64)
    need_out = (status == -1).astype(np.int64)
    violations = need_in @ (1 - in_side) + need_out @ in_side
    path_of: dict[int, tuple[int, int]] = {}
    toward: dict[int, dict[int, frozenset[int]]] = {}
    tr = skeleton.tree
    # a bipartition can be induced by several skeleton cuts (through an empty node); its
    # strip then covers several subbunches and a unit free there is free in only some of them
    copies: dict[int, int] = {}
    for cut, side, bunch in cut_bunch:
        copies[id(bunch)] = copies.get(id(bunch), 0) + 1
    for i, u in enumerate(stretched):
        zone = [int(w) for w in np.flatnonzero(violations[i] == 0)]
        if not zone:
            raise AssertionError(f"stretched unit {sorted(units.units[u])} has no consistent node")
        e1 = max(zone, key=lambda w: (tr.dist(zone[0], w), -w))
        e2 = max(zone, key=lambda w: (tr.dist(e1, w), -w))
        a, b = sorted((e1, e2))
        sides: dict[int, frozenset[int]] = {}
        crossed: set[int] = set()
        for j, (cut, side, bunch) in enumerate(cut_bunch):
            free = status[i, j] == 0
            crosses = (a in side) != (b in side)
            if crosses:
                crossed.add(id(bunch))
            if crosses and not free or free and not crosses and copies[id(bunch)] == 1:
                raise AssertionError(f"projection of unit {sorted(units.units[u])} disagrees with cut {cut.label}")
            if not crosses:
                continue
            st = bunch.strip
            x = st.node_of[reps[i]]
            src_end = b if a in side else a
            other = a if src_end == b else b
            got = {src_end: st.side_s[x], other: st.side_t[x]}
            if sides and sides != got:
                raise AssertionError("inherent partition of a stretched unit changes between cuts")
            sides = got
        for j, (cut, side, bunch) in enumerate(cut_bunch):
            if status[i, j] == 0 and id(bunch) not in crossed:
                raise AssertionError(f"unit {sorted(units.units[u])} is free in a bunch its path never crosses")
        if a == b:
            raise AssertionError("stretched unit projects to a single node")
        path_of[u] = (a, b)
        toward[u] = sides
    return path_of, toward


def _reindex(c: Carcass, keep: list[int], tree_edges, cycles, counter) -> Carcass:
    """Rebuild the skeleton on the nodes in `keep`; edges and cycles use old ids."""
    sk = c.skeleton
    pos = {old: new for new, old in enumerate(keep)}
    skeleton = Skeleton(
        [sk.members[v] for v in keep],
        [(pos[a], pos[b]) for a, b in tree_edges],
        [[pos[v] for v in cyc] for cyc in cycles],
        pos[sk.root_node],
        counter,
    )
    c.skeleton = skeleton
    c.node_of_unit = {u: pos[nd] for u, nd in c.node_of_unit.items()}
    c.path_of_unit = {u: tuple(sorted((pos[a], pos[b]))) for u, (a, b) in c.path_of_unit.items()}
    c.toward = {u: {pos[k]: v for k, v in d.items()} for u, d in c.toward.items()}
    return c


def _drop_unused_ports(c: Carcass, ports: list[tuple[int, int]], counter) -> Carcass:
    """Merge every port node whose tree edge no stretched unit path uses into the node it serves."""
    if not ports:
        return c
    sk = c.skeleton
    used_edges: set[tuple[int, int]] = set()
    ends: set[int] = set()
    for a, b in c.path_of_unit.values():
        ends |= {a, b}
        walk = sk.tree.path(a, b)
        used_edges.update(tuple(sorted(p)) for p in zip(walk, walk[1:]))
    merge = {p: v for p, v in ports if tuple(sorted((p, v))) not in used_edges and p not in ends}
    if not merge:
        return c
    tree_edges = [(a, b) for a, b in sk.tree_edges if merge.get(a) != b and merge.get(b) != a]
    cycles = [[merge.get(v, v) for v in cyc] for cyc in sk.cycles]
    keep = [v for v in range(sk.n_nodes) if v not in merge]
    return _reindex(c, keep, tree_edges, cycles, counter)


def _triangles_to_cycles(c: Carcass, counter) -> Carcass:
    """Replace each empty node joined by exactly three tree edges with a 3-cycle.

    Both shapes have the same cuts; the cycle form is the conventional one.
    """
    sk = c.skeleton
    used = {v for ends in c.path_of_unit.values() for v in ends}
    in_cycle = {v for cyc in sk.cycles for v in cyc}
    deg: dict[int, list[int]] = {v: [] for v in range(sk.n_nodes)}
    for a, b in sk.tree_edges:
        deg[a].append(b)
        deg[b].append(a)
    doomed = [
        v for v in range(sk.n_nodes)
        if not sk.members[v] and len(deg[v]) == 3 and v not in in_cycle and v not in used
    ]
    # neighbours of two replaced nodes would interact; keep it simple and take an independent set
    chosen: list[int] = []
    taken: set[int] = set()
    for v in doomed:
        if v in taken or any(w in taken for w in deg[v]):
            continue
        chosen.append(v)
        taken.add(v)
    if not chosen:
        return c
    gone = set(chosen)
    keep = [v for v in range(sk.n_nodes) if v not in gone]
    tree_edges = [(a, b) for a, b in sk.tree_edges if a not in gone and b not in gone]
    cycles = [list(cyc) for cyc in sk.cycles] + [deg[v] for v in chosen]
    return _reindex(c, keep, tree_edges, cycles, counter)


def compute_tau(c: Carcass) -> dict[int, int]:
    """Topological order of the stretched units sharing each path, from the smaller endpoint."""
    groups: dict[tuple[int, int], list[int]] = {}
    for u, key in c.path_of_unit.items():
        groups.setdefault(key, []).append(u)
    g = c.graph
    unit_of = c.units.unit_of
    tau: dict[int, int] = {}
    path_units: dict[tuple[int, int], list[int]] = {}
    for key, members in groups.items():
        start = key[0]
        member_set = set(members)
        preds: dict[int, set[int]] = {u: set() for u in members}
        succs: dict[int, set[int]] = {u: set() for u in members}
        for u in members:
            for eid in c.toward[u][start]:
                a, b = g.endpoints[eid]
                w = unit_of[a] if unit_of[b] == u else unit_of[b]
                if w in member_set:
                    preds[u].add(w)
                    succs[w].add(u)
        ready = [(min(c.units.units[u]), u) for u in members if not preds[u]]
        heapq.heapify(ready)
        indeg = {u: len(preds[u]) for u in members}
        order = []
        while ready:
            _, u = heapq.heappop(ready)
            order.append(u)
            for w in succs[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(ready, (min(c.units.units[w]), w))
        if len(order) != len(members):
            raise AssertionError("stretched units on one path form a cycle")
        for i, u in enumerate(order):
            tau[u] = i
        path_units[key] = order
    c.tau = tau
    c.path_units = path_units
    return tau


def strip_for_skeleton_cut(c: Carcass, cut: SkeletonCut, source_node: int | None = None) -> Strip:
    """Strip of the mincuts of one skeleton cut; the source is the root side unless told otherwise."""
    sk = c.skeleton
    away = sk.cut_side(cut)
    if source_node is not None and source_node in away:
        src_nodes = away
    else:
        src_nodes = frozenset(range(sk.n_nodes)) - away
    units = c.units
    src: set[int] = set()
    snk: set[int] = set()
    middle: list[tuple[int, int]] = []  # (unit, source-side endpoint)
    for u, verts in enumerate(units.units):
        a, b = c.ends(u)
        ina, inb = a in src_nodes, b in src_nodes
        if ina and inb:
            src |= verts
        elif not ina and not inb:
            snk |= verts
        else:
            middle.append((u, a if ina else b))
    classes = [frozenset(src), frozenset(snk)] + [units.units[u] for u, _ in middle]
    order = sorted(range(len(classes)), key=lambda i: min(classes[i]))
    pos = {old: new for new, old in enumerate(order)}
    nodes = tuple(classes[i] for i in order)
    node_of = {v: i for i, nd in enumerate(nodes) for v in nd}
    side_s, side_t = {}, {}
    for k, (u, end) in enumerate(middle):
        other = next(e for e in c.toward[u] if e != end)
        side_s[pos[2 + k]] = c.toward[u][end]
        side_t[pos[2 + k]] = c.toward[u][other]
    return Strip(c.graph, nodes, node_of, pos[0], pos[1], side_s, side_t, c.value)


def build_link(sk: Skeleton, a: int, b: int):
    return sk.link(a, b)


def strip_between(c: Carcass, s: int, t: int) -> Strip:
    """The (s,t)-strip for Steiner vertices in different skeleton nodes.

    Units are grouped by the link of the skeleton path between s and t; a
    stretched unit whose path ends in two different groups stays on its own.
    Edge directions follow the link order and the units' inherent partitions.
    """
    sk = c.skeleton
    link = sk.link(c.vertex_ends(s)[0], c.vertex_ends(t)[0])
    units = c.units.units
    classes: dict[tuple, set[int]] = {}
    kept: dict[int, tuple[int, int]] = {}  # stretched unit -> (s-ward end, t-ward end)
    for u, verts in enumerate(units):
        a, b = c.ends(u)
        if link.separated(a, b):
            kept[u] = (a, b) if link.position(a) < link.position(b) else (b, a)
            classes[("unit", u)] = set(verts)
        else:
            classes.setdefault(link.group[a], set()).update(verts)
    names = sorted(classes, key=lambda k: min(classes[k]))
    nodes = tuple(frozenset(classes[k]) for k in names)
    node_of = {v: i for i, nd in enumerate(nodes) for v in nd}
    source = node_of[s]
    sink = node_of[t]

    def rank(v: int):
        """Link position of a vertex that sits in a compressed node."""
        return link.position(c.vertex_ends(v)[0])

    side_s = {i: set() for i in range(len(nodes)) if i not in (source, sink)}
    side_t = {i: set() for i in side_s}
    unit_of = c.units.unit_of
    for eid, u, v in c.graph.edges:
        a, b = node_of[u], node_of[v]
        if a == b:
            continue
        # orient u -> v from the s-ward node to the t-ward node
        uu, uv = unit_of[u], unit_of[v]
        if uu in kept:
            forward = eid in c.toward[uu][kept[uu][1]]
        elif uv in kept:
            forward = eid in c.toward[uv][kept[uv][0]]
        else:
            forward = rank(u) < rank(v)
        tail, head = (a, b) if forward else (b, a)
        if tail in side_t:
            side_t[tail].add(eid)
        if head in side_s:
            side_s[head].add(eid)
    return Strip(
        c.graph,
        nodes,
        node_of,
        source,
        sink,
        {k: frozenset(v) for k, v in side_s.items()},
        {k: frozenset(v) for k, v in side_t.items()},
        c.value,
    )
