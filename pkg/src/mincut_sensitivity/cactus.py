"""Cactus skeletons: construction from a cut family and queries on the skeleton tree.

A cactus is stored as its nodes (each holding a possibly empty set of element
ids), its tree edges and its cycles. The skeleton tree adds one extra vertex per
cycle, adjacent to every node on that cycle, which turns the cactus into a tree
and lets path questions be answered with a few LCA queries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .trees import OpCounter, RootedTree


class NotACactus(RuntimeError):
    """The bipartition family could not be arranged as a cactus."""


@dataclass(frozen=True)
class SkeletonCut:
    """A tree edge (a, b), or the pair of cycle edges leaving positions i and j of a cycle."""

    kind: str  # "tree" | "cycle"
    a: int  # tree: endpoint; cycle: cycle index
    b: int  # tree: endpoint; cycle: first position
    c: int = -1  # cycle: second position

    @property
    def label(self) -> str:
        if self.kind == "tree":
            return f"tree({self.a},{self.b})"
        return f"cycle{self.a}[{self.b},{self.c}]"


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


class Skeleton:
    def __init__(
        self,
        members: list[frozenset[int]],
        tree_edges: list[tuple[int, int]],
        cycles: list[list[int]],
        root: int,
        counter: OpCounter | None = None,
    ):
        self.members = members
        self.n_nodes = len(members)
        self.tree_edges = [tuple(sorted(e)) for e in tree_edges]
        self.cycles = [_normalize_cycle(c) for c in cycles]
        self.root_node = root
        self.cycle_pos = [{v: i for i, v in enumerate(c)} for c in self.cycles]
        size = self.n_nodes + len(self.cycles)
        adj: list[list[int]] = [[] for _ in range(size)]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        for ci, cyc in enumerate(self.cycles):
            for v in cyc:
                adj[v].append(self.n_nodes + ci)
                adj[self.n_nodes + ci].append(v)
        parent = [-2] * size
        parent[root] = -1
        stack = [root]
        while stack:
            v = stack.pop()
            for w in sorted(adj[v]):
                if parent[w] == -2:
                    parent[w] = v
                    stack.append(w)
        if -2 in parent:
            raise NotACactus("skeleton is disconnected")
        self.tree = RootedTree(parent, counter)
        self.node_of_element = {x: v for v, mem in enumerate(members) for x in mem}

    # -- basic structure -------------------------------------------------
    def is_cycle(self, v: int) -> bool:
        return v >= self.n_nodes

    def cycle_vertex(self, ci: int) -> int:
        return self.n_nodes + ci

    def cuts(self) -> list[SkeletonCut]:
        out = [SkeletonCut("tree", a, b) for a, b in self.tree_edges]
        for ci, cyc in enumerate(self.cycles):
            for i in range(len(cyc)):
                for j in range(i + 1, len(cyc)):
                    out.append(SkeletonCut("cycle", ci, i, j))
        return out

    def cut_side(self, cut: SkeletonCut) -> frozenset[int]:
        """Cactus nodes on the side of the cut away from the root node."""
        tr = self.tree
        if cut.kind == "tree":
            a, b = cut.a, cut.b
            top = b if tr.parent[b] == a else a
            return frozenset(v for v in range(self.n_nodes) if tr.in_subtree(v, top))
        cyc = self.cycles[cut.a]
        cv = self.cycle_vertex(cut.a)
        attach = tr.parent[cv]
        arc = cyc[cut.b + 1: cut.c + 1]
        if attach in arc:
            arc = cyc[cut.c + 1:] + cyc[: cut.b + 1]
        return frozenset(v for v in range(self.n_nodes) if any(tr.in_subtree(v, w) for w in arc))

    def cut_for_tree_edge(self, a: int, b: int) -> SkeletonCut:
        return SkeletonCut("tree", *sorted((a, b)))

    def cuts_separating(self, a: int, b: int) -> list[SkeletonCut]:
        """Skeleton cuts on the path between cactus nodes a and b, ordered from a."""
        walk = self.tree.path(a, b)
        out = []
        for i in range(len(walk) - 1):
            x, y = walk[i], walk[i + 1]
            if not self.is_cycle(x) and not self.is_cycle(y):
                out.append(self.cut_for_tree_edge(x, y))
            elif self.is_cycle(y):
                ci = y - self.n_nodes
                p, q = self.cycle_pos[ci][x], self.cycle_pos[ci][walk[i + 2]]
                out.extend(self._cycle_cuts_between(ci, p, q))
        return out

    def _cycle_cuts_between(self, ci: int, p: int, q: int) -> list[SkeletonCut]:
        """Cycle cuts separating positions p and q (one edge on each arc), nearest to p first."""
        size = len(self.cycles[ci])
        arc1 = [(p + k) % size for k in range((q - p) % size)]
        arc2 = [(q + k) % size for k in range((p - q) % size)]
        # edge e joins positions e and e+1; p keeps the positions from e2+1 around to e1
        keyed = []
        for a, e1 in enumerate(arc1):
            for b, e2 in enumerate(reversed(arc2)):
                i, j = sorted((e1, e2))
                keyed.append(((e1 - e2 - 1) % size, a, b, SkeletonCut("cycle", ci, i, j)))
        keyed.sort(key=lambda k: k[:3])
        return [k[3] for k in keyed]

    # -- path queries (constant number of LCA evaluations) ----------------
    def paths_intersect(self, p1: tuple[int, int], p2: tuple[int, int]) -> bool:
        """Do the two skeleton-tree paths share a tree edge or pass through a common cycle."""
        got = self._intersection(p1, p2)
        if got is None:
            return False
        x, y = got
        return x != y or self.is_cycle(x)

    def _intersection(self, p1, p2):
        tr = self.tree
        a, b = p1
        c, d = p2
        cands = (tr.lca(a, c), tr.lca(a, d), tr.lca(b, c), tr.lca(b, d))
        depth = tr.depth
        first, second = sorted(cands, key=lambda v: -depth[v])[:2]
        top = max(depth[tr.lca(a, b)], depth[tr.lca(c, d)])
        if depth[first] < top:
            return None
        return first, second

    def intersection_witness(self, p1, p2):
        """("tree", (u, v)) or ("cycle", index) for a shared structure, else None."""
        got = self._intersection(p1, p2)
        if got is None:
            return None
        x, y = got
        if x == y:
            return ("cycle", x - self.n_nodes) if self.is_cycle(x) else None
        nxt = self.tree.step_toward(x, y)
        for v in (x, nxt):
            if self.is_cycle(v):
                return ("cycle", v - self.n_nodes)
        return ("tree", tuple(sorted((x, nxt))))

    def on_path(self, x: int, a: int, b: int) -> bool:
        return self.tree.on_path(x, a, b)

    def edge_projection(self, ends_x: tuple[int, int], ends_y: tuple[int, int]) -> tuple[int, int]:
        """Farthest pair among the endpoints of two unit paths."""
        pts = {ends_x[0], ends_x[1], ends_y[0], ends_y[1]}
        if len(pts) == 1:
            p = next(iter(pts))
            return p, p
        pts = sorted(pts)
        best, pair = -1, (pts[0], pts[0])
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = self.tree.dist(pts[i], pts[j])
                if d > best:
                    best, pair = d, (pts[i], pts[j])
        return pair

    def is_proper(self, walk: list[int]) -> bool:
        """At most one edge per cycle: consecutive cycle neighbours are adjacent on the cycle."""
        for i in range(1, len(walk) - 1):
            v = walk[i]
            if self.is_cycle(v):
                ci = v - self.n_nodes
                size = len(self.cycles[ci])
                p, q = self.cycle_pos[ci][walk[i - 1]], self.cycle_pos[ci][walk[i + 1]]
                if (p - q) % size not in (1, size - 1):
                    return False
        return True

    def extendable(self, p1: tuple[int, int], p2: tuple[int, int], toward: int) -> tuple[int, int] | None:
        """Proper path with p1 as prefix (ending at `toward`) and p2 as suffix, if any."""
        start = p1[0] if p1[1] == toward else p1[1]
        if toward not in p1:
            raise ValueError("direction must be an endpoint of the first path")
        tr = self.tree
        far, near = p2 if tr.dist(start, p2[0]) >= tr.dist(start, p2[1]) else p2[::-1]
        if not (tr.on_path(toward, start, far) and tr.on_path(near, start, far)):
            return None
        if not self.is_proper(tr.path(start, far)):
            return None
        return start, far

    # -- links -------------------------------------------------------------
    def link(self, a: int, b: int) -> "Link":
        if self.is_cycle(a) or self.is_cycle(b):
            raise ValueError("link endpoints must be cactus nodes")
        tr = self.tree
        walk = tr.path(a, b)
        index = {v: i for i, v in enumerate(walk)}
        group: dict[int, tuple] = {}
        key: dict[tuple, tuple[int, Fraction]] = {}
        for v in range(self.n_nodes):
            m = tr.median(a, b, v)
            i = index[m]
            if not self.is_cycle(m):
                g = ("node", i)
                key[g] = (i, Fraction(0))
            else:
                ci = m - self.n_nodes
                hang = tr.step_toward(m, v)
                g = ("cycle", i, hang)
                pos = self.cycle_pos[ci]
                size = len(self.cycles[ci])
                p, q, h = pos[walk[i - 1]], pos[walk[i + 1]], pos[hang]
                # position of the hanging neighbour along its arc from p to q
                fwd = (h - p) % size
                span = (q - p) % size
                if fwd < span:
                    key[g] = (i, Fraction(fwd, span))
                else:
                    back, span2 = (p - h) % size, (p - q) % size
                    key[g] = (i, Fraction(back, span2))
            group[v] = g
        return Link((a, b), walk, group, key)


@dataclass
class Link:
    """Groups of cactus nodes obtained by compressing everything hanging off a path."""

    ends: tuple[int, int]
    walk: list[int]
    group: dict[int, tuple]
    key: dict[tuple, tuple[int, Fraction]]

    def separated(self, u: int, v: int) -> bool:
        return self.group[u] != self.group[v]

    def groups(self) -> list[frozenset[int]]:
        out: dict[tuple, set[int]] = {}
        for v, g in self.group.items():
            out.setdefault(g, set()).add(v)
        return sorted((frozenset(s) for s in out.values()), key=min)

    def position(self, v: int) -> tuple[int, Fraction]:
        """Ordering key of v's group along the path (source end first)."""
        return self.key[self.group[v]]


def _normalize_cycle(cyc: list[int]) -> list[int]:
    i = cyc.index(min(cyc))
    cyc = cyc[i:] + cyc[:i]
    if len(cyc) > 2 and cyc[-1] < cyc[1]:
        cyc = [cyc[0]] + cyc[:0:-1]
    return cyc


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class RawCactus:
    members: list[int]  # node -> element bitmask
    tree_edges: list[tuple[int, int]]
    cycles: list[list[int]]
    root: int
    ports: list[tuple[int, int]] = field(default_factory=list)  # (empty port node, node it serves)


def cactus_from_family(size: int, root: int, family, with_ports: bool = False) -> RawCactus:
    """Arrange a crossing-closed family of element subsets as a cactus.

    Elements are 0..size-1; each member is a bitmask that does not contain `root`
    and stands for the bipartition (member, rest). Crossing classes become cycles,
    the remaining laminar members become nested nodes. With `with_ports`, every
    cycle position gets its own empty node hanging off the real one.
    """
    full = (1 << size) - 1
    fam = sorted(set(family), key=lambda x: (-popcount(x), x))
    fam_set = set(fam)
    for x in fam:
        if x == 0 or x >> root & 1 or x & ~full:
            raise NotACactus(f"invalid member {x:b}")
    uf = _UnionFind(len(fam))
    for i, x in enumerate(fam):
        for j in range(i + 1, len(fam)):
            y = fam[j]
            if x & y and x & ~y and y & ~x:
                uf.union(i, j)
    comps: dict[int, list[int]] = {}
    for i in range(len(fam)):
        comps.setdefault(uf.find(i), []).append(fam[i])
    crossing: set[int] = set()
    cycles_atoms: list[tuple[int, list[int]]] = []  # (union, atoms in cyclic order after the outside)
    for members in comps.values():
        if len(members) < 2:
            continue
        crossing.update(members)
        union = 0
        for x in members:
            union |= x
        signature: dict[tuple, int] = {}
        for e in bits(union):
            sig = tuple(x >> e & 1 for x in members)
            signature[sig] = signature.get(sig, 0) | (1 << e)
        atoms = sorted(signature.values())
        cycles_atoms.append((union, _cycle_order(union, atoms, fam_set)))
    laminar = [x for x in fam if x not in crossing]
    laminar_set = set(laminar)
    for union, atoms in cycles_atoms:
        for x in [union] + atoms:
            if x not in laminar_set:
                raise NotACactus(f"cycle piece {x:b} is missing from the non-crossing members")
    # parent in the laminar tree: the smallest member strictly containing it (full set at the top)
    order = sorted(laminar, key=lambda x: (popcount(x), x))
    parent: dict[int, int] = {}
    for i, x in enumerate(order):
        parent[x] = full
        for y in order[i + 1:]:
            if y != x and x & y == x:
                parent[x] = y
                break
    children: dict[int, list[int]] = {full: []}
    for x in order:
        children.setdefault(x, [])
    for x in order:
        children[parent[x]].append(x)
    own: dict[int, int] = {}
    for y in [full] + order:
        covered = 0
        for c in children[y]:
            if covered & c:
                raise NotACactus("laminar children overlap")
            covered |= c
        own[y] = y & ~covered
    atom_of: set[int] = set()
    union_of: dict[int, int] = {}
    for ci, (union, atoms) in enumerate(cycles_atoms):
        atom_of.update(atoms)
        union_of[union] = ci
        if sorted(children[union]) != sorted(atoms):
            raise NotACactus(f"cycle over {union:b} does not match its laminar children")
    node_id: dict[int, int] = {}
    members_out: list[int] = []

    def node(y: int) -> int:
        if y not in node_id:
            node_id[y] = len(members_out)
            members_out.append(own[y])
        return node_id[y]

    node(full)
    for y in order:
        if y in union_of and y not in atom_of:
            continue
        node(y)
    tree_edges = []
    for y in order:
        if y in atom_of or y in union_of:
            continue
        tree_edges.append((node(y), node(parent[y])))
    cycles = []
    ports = []
    for union, atoms in cycles_atoms:
        outside = node(union) if union in atom_of else node(parent[union])
        ring = []
        for v in [outside] + [node(a) for a in atoms]:
            if with_ports:
                # an empty node between the cycle and v: the tree edge duplicates the cut
                # around v, giving stretched units that are free only there a place to live
                port = len(members_out)
                members_out.append(0)
                tree_edges.append((port, v))
                ports.append((port, v))
                v = port
            ring.append(v)
        cycles.append(ring)
    return RawCactus(members_out, tree_edges, cycles, node_id[full], ports)


def _cycle_order(union: int, atoms: list[int], fam: set[int]) -> list[int]:
    """Order the atoms of a crossing class around its cycle, starting next to the outside."""
    k = len(atoms)
    adj: dict[int, list[int]] = {i: [] for i in range(-1, k)}  # -1 is the outside piece
    for i in range(k):
        if union & ~atoms[i] in fam:
            adj[-1].append(i)
            adj[i].append(-1)
        for j in range(i + 1, k):
            if atoms[i] | atoms[j] in fam:
                adj[i].append(j)
                adj[j].append(i)
    if any(len(v) != 2 for v in adj.values()):
        raise NotACactus(f"crossing class over {union:b} is not a cycle")
    order = []
    prev, cur = -1, min(adj[-1])
    while cur != -1:
        order.append(atoms[cur])
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != k:
        raise NotACactus(f"crossing class over {union:b} splits into several cycles")
    return order
