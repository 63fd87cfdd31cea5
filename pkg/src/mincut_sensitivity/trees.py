"""Rooted trees with constant-time LCA (Euler tour + sparse table).

Every LCA evaluation bumps an optional shared counter so callers can account
for the primitive work done by a query.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass
class OpCounter:
    ops: int = 0

    def reset(self) -> int:
        n, self.ops = self.ops, 0
        return n


class RootedTree:
    """Tree over nodes 0..N-1 given by a parent array (root has parent -1)."""

    def __init__(self, parent: Sequence[int], counter: OpCounter | None = None):
        self.parent = list(parent)
        self.counter = counter
        size = len(self.parent)
        self.children: list[list[int]] = [[] for _ in range(size)]
        roots = []
        for v, p in enumerate(self.parent):
            if p < 0:
                roots.append(v)
            else:
                self.children[p].append(v)
        if len(roots) != 1:
            raise ValueError(f"expected one root, found {len(roots)}")
        self.root = roots[0]
        self.depth = [0] * size
        self.first = [0] * size
        euler: list[int] = []
        order: list[int] = []
        stack = [(self.root, 0)]
        while stack:
            v, i = stack.pop()
            if i == 0:
                self.first[v] = len(euler)
                order.append(v)
            euler.append(v)
            if i < len(self.children[v]):
                stack.append((v, i + 1))
                c = self.children[v][i]
                self.depth[c] = self.depth[v] + 1
                stack.append((c, 0))
        self.preorder = order
        self.tin = [0] * size
        for i, v in enumerate(order):
            self.tin[v] = i
        self.tout = self.tin[:]
        for v in reversed(order):
            p = self.parent[v]
            if p >= 0 and self.tout[v] > self.tout[p]:
                self.tout[p] = self.tout[v]
        self.euler = euler
        # sparse table of euler positions keyed by depth
        table = [list(range(len(euler)))]
        span = 1
        while 2 * span <= len(euler):
            prev = table[-1]
            row = []
            for i in range(len(euler) - 2 * span + 1):
                a, b = prev[i], prev[i + span]
                row.append(a if self.depth[euler[a]] <= self.depth[euler[b]] else b)
            table.append(row)
            span *= 2
        self._table = table
        self._up: list[list[int]] | None = None

    def __len__(self) -> int:
        return len(self.parent)

    def lca(self, a: int, b: int) -> int:
        if self.counter is not None:
            self.counter.ops += 1
        i, j = self.first[a], self.first[b]
        if i > j:
            i, j = j, i
        k = (j - i + 1).bit_length() - 1
        row = self._table[k]
        x, y = row[i], row[j - (1 << k) + 1]
        return self.euler[x] if self.depth[self.euler[x]] <= self.depth[self.euler[y]] else self.euler[y]

    def in_subtree(self, v: int, top: int) -> bool:
        return self.tin[top] <= self.tin[v] <= self.tout[top]

    def dist(self, a: int, b: int) -> int:
        return self.depth[a] + self.depth[b] - 2 * self.depth[self.lca(a, b)]

    def on_path(self, x: int, a: int, b: int) -> bool:
        """Is x on the tree path between a and b."""
        return self.dist(a, x) + self.dist(x, b) == self.dist(a, b)

    def median(self, a: int, b: int, c: int) -> int:
        """The unique node on all three pairwise paths."""
        x, y, z = self.lca(a, b), self.lca(a, c), self.lca(b, c)
        return max((x, y, z), key=lambda v: self.depth[v])

    def ancestor(self, v: int, depth: int) -> int:
        """Ancestor of v at the given depth (binary lifting, built on first use)."""
        if self._up is None:
            up = [[p if p >= 0 else v for v, p in enumerate(self.parent)]]
            while (1 << len(up)) < len(self.parent):
                prev = up[-1]
                up.append([prev[prev[v]] for v in range(len(prev))])
            self._up = up
        diff = self.depth[v] - depth
        if diff < 0:
            raise ValueError("requested depth is below the node")
        k = 0
        while diff:
            if diff & 1:
                v = self._up[k][v]
            diff >>= 1
            k += 1
        return v

    def step_toward(self, a: int, b: int) -> int:
        """Neighbour of a on the path to b (a != b)."""
        c = self.lca(a, b)
        if c != a:
            return self.parent[a]
        return self.ancestor(b, self.depth[a] + 1)

    def path(self, a: int, b: int) -> list[int]:
        """Nodes on the path from a to b, inclusive, in order."""
        c = self.lca(a, b)
        left, right = [], []
        while a != c:
            left.append(a)
            a = self.parent[a]
        while b != c:
            right.append(b)
            b = self.parent[b]
        return left + [c] + right[::-1]
