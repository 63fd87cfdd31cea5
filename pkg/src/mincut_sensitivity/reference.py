"""Brute-force answers for every query type.

Everything here either reruns max flow on a modified graph or enumerates all
vertex bipartitions, so it is only meant for small graphs.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from .graph import Cut, InvalidArgument, Multigraph, max_flow_value
from .strip import build_strip

BIPARTITION_CAP = 12


class CapacityError(RuntimeError):
    """The requested brute force would exceed its enumeration cap."""


def bf_ft(g: Multigraph, s: int, t: int, eid: int) -> int:
    return max_flow_value(g.without_edge(eid), s, t)


def bf_in(g: Multigraph, s: int, t: int, x: int, y: int) -> int:
    return max_flow_value(g.with_edge(x, y), s, t)


def bf_nearest_side(g: Multigraph, s: int, t: int) -> frozenset[int]:
    strip = build_strip(g, s, t)
    return strip.nodes[strip.source]


class CutTable:
    """Cut values of every vertex subset, stored as a numpy array indexed by bitmask.

    Vertex i of the graph (in sorted order) is bit i.
    """

    def __init__(self, g: Multigraph, cap: int = BIPARTITION_CAP):
        if g.n > cap:
            raise CapacityError(f"bipartition enumeration capped at n={cap}, got n={g.n}")
        self.g = g
        self.bit = {v: i for i, v in enumerate(g.vertices)}
        masks = np.arange(1 << g.n, dtype=np.int64)
        self.masks = masks
        self.crossing = {}
        values = np.zeros(1 << g.n, dtype=np.int64)
        for eid, u, v in g.edges:
            c = ((masks >> self.bit[u]) ^ (masks >> self.bit[v])) & 1
            self.crossing[eid] = c.astype(bool)
            values += c
        self.values = values

    def has(self, v: int) -> np.ndarray:
        return ((self.masks >> self.bit[v]) & 1).astype(bool)

    def side(self, mask: int) -> frozenset[int]:
        return frozenset(v for v, i in self.bit.items() if mask >> i & 1)

    def separating(self, s: int, t: int) -> np.ndarray:
        return self.has(s) & ~self.has(t)

    def value(self, s: int, t: int) -> int:
        return int(self.values[self.separating(s, t)].min())

    def value_without(self, s: int, t: int, eid: int) -> int:
        sel = self.separating(s, t)
        return int((self.values - self.crossing[eid])[sel].min())

    def value_with(self, s: int, t: int, x: int, y: int) -> int:
        sel = self.separating(s, t)
        extra = self.has(x) ^ self.has(y)
        return int((self.values + extra)[sel].min())

    def mincut_masks(self, s: int, t: int) -> np.ndarray:
        sel = self.separating(s, t)
        best = self.values[sel].min()
        return self.masks[sel & (self.values == best)]

    def mincut_sides(self, s: int, t: int) -> set[frozenset[int]]:
        return {self.side(int(k)) for k in self.mincut_masks(s, t)}

    def contained(self, s: int, t: int, eids: Iterable[int]) -> Cut | None:
        sel = self.separating(s, t)
        best = self.values[sel].min()
        sel = sel & (self.values == best)
        for eid in eids:
            sel = sel & self.crossing[eid]
        hits = np.flatnonzero(sel)
        if len(hits) == 0:
            return None
        return Cut(self.side(int(hits[0])), int(best))

    def nearest(self, s: int, t: int) -> frozenset[int]:
        """Intersection of all mincut sides containing s."""
        ks = self.mincut_masks(s, t)
        return self.side(int(np.bitwise_and.reduce(ks)))

    @cached_property
    def all_pairs(self) -> dict[tuple[int, int], int]:
        return {(a, b): self.value(a, b) for a, b in combinations(self.g.vertices, 2)}


def bf_edge_contained(g: Multigraph, s: int, t: int, eids: Iterable[int], cap: int = BIPARTITION_CAP) -> bool:
    return CutTable(g, cap).contained(s, t, eids) is not None


def bf_affected_pairs(g: Multigraph, change: tuple[str, int, int], cap: int = BIPARTITION_CAP) -> set[tuple[int, int]]:
    """Pairs whose mincut value changes under ("fail", x, y) or ("ins", x, y).

    For a failure, the first edge joining x and y is removed.
    """
    kind, x, y = change
    before = CutTable(g, cap)
    if kind == "fail":
        eid = next((e for e, u, v in g.edges if {u, v} == {x, y}), None)
        if eid is None:
            raise InvalidArgument(f"no edge joins {x} and {y}")
        after_g = g.without_edge(eid)
    elif kind == "ins":
        after_g = g.with_edge(x, y)
    else:
        raise InvalidArgument(f"unknown change kind {kind!r}")
    after = CutTable(after_g, cap)
    return {p for p, c in before.all_pairs.items() if after.all_pairs[p] != c}


def strip_sides(strip, cap: int = 16) -> set[frozenset[int]]:
    """Vertex sides of every transversal of a strip, by trying all node subsets."""
    from .strip import is_transversal

    inner = strip.non_terminals
    if len(inner) > cap:
        raise CapacityError(f"transversal enumeration capped at {cap} non-terminals")
    out = set()
    for mask in range(1 << len(inner)):
        chosen = {strip.source} | {x for i, x in enumerate(inner) if mask >> i & 1}
        if is_transversal(strip, chosen):
            out.add(strip.side_of(chosen))
    return out
