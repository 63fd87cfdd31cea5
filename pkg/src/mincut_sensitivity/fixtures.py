"""Small named graphs and a seeded random corpus generator."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Multigraph


@dataclass(frozen=True)
class Named:
    """A graph together with vertex names (name i belongs to vertex i)."""

    graph: Multigraph
    names: tuple[str, ...]

    def __getitem__(self, name: str) -> int:
        return self.names.index(name)

    def edge(self, a: str, b: str) -> int:
        """Id of the first edge joining the named vertices."""
        u, v = self[a], self[b]
        for eid, x, y in self.graph.edges:
            if {x, y} == {u, v}:
                return eid
        raise KeyError((a, b))


def _named(names: str, pairs: list[tuple[str, str]]) -> Named:
    labels = tuple(names.split())
    idx = {x: i for i, x in enumerate(labels)}
    return Named(Multigraph.from_edges(len(labels), [(idx[a], idx[b]) for a, b in pairs]), labels)


def p3() -> Named:
    return _named("s a t", [("s", "a"), ("a", "t")])


def p4() -> Named:
    return _named("v1 v2 v3 v4", [("v1", "v2"), ("v2", "v3"), ("v3", "v4")])


def c4() -> Named:
    return _named("v1 v2 v3 v4", [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")])


def k4() -> Named:
    vs = ["v1", "v2", "v3", "v4"]
    return _named(" ".join(vs), [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]])


def tb() -> Named:
    return _named(
        "a1 a2 a3 b1 b2 b3",
        [("a1", "a2"), ("a2", "a3"), ("a3", "a1"), ("b1", "b2"), ("b2", "b3"), ("b3", "b1"), ("a1", "b1")],
    )


def h1() -> Named:
    return _named("s r y t", [("s", "r"), ("s", "r"), ("s", "y"), ("y", "t"), ("r", "t")])


FIXTURES = {"P3": p3, "P4": p4, "C4": c4, "K4": k4, "TB": tb, "H1": h1}


def random_multigraph(rng: random.Random, n: int, m: int) -> Multigraph:
    """Connected multigraph: a random spanning tree plus m-(n-1) random extra edges."""
    if m < n - 1:
        raise ValueError("need at least n-1 edges for connectivity")
    order = list(range(n))
    rng.shuffle(order)
    pairs = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    while len(pairs) < m:
        u, v = rng.sample(range(n), 2)
        pairs.append((u, v))
    rng.shuffle(pairs)
    return Multigraph.from_edges(n, pairs)


def cactus_like_multigraph(rng: random.Random, n: int, max_m: int) -> Multigraph:
    """Cycles glued at vertices, some edges doubled, a few random chords.

    Such graphs have many minimum cuts, cycles in their skeletons and stretched units.
    """
    pairs: list[tuple[int, int]] = []
    made = 1
    while made < n:
        anchor = rng.randrange(made)
        length = min(rng.randint(1, 4), n - made)
        ring = [anchor] + list(range(made, made + length))
        made += length
        if len(ring) == 2:
            pairs.append((ring[0], ring[1]))
        else:
            pairs.extend((ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring)))
    for _ in range(rng.randint(0, 2)):
        if len(pairs) < max_m:
            pairs.append(rng.choice(pairs))
    if n > 1 and rng.random() < 0.5 and len(pairs) < max_m:
        pairs.append(tuple(rng.sample(range(n), 2)))
    order = list(range(n))
    rng.shuffle(order)
    pairs = [(order[u], order[v]) for u, v in pairs[:max_m]]
    rng.shuffle(pairs)
    return Multigraph.from_edges(n, pairs)


def random_corpus(seed: int, count: int, min_n: int = 3, max_n: int = 10, density: float = 3) -> list[Multigraph]:
    """`count` connected multigraphs with min_n <= n <= max_n and m <= density * n.

    Every third graph is cactus-like, the rest are a random tree plus random edges.
    """
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(min_n, max_n)
        cap = max(n - 1, int(density * n))
        if i % 3 == 2:
            g = cactus_like_multigraph(rng, n, cap)
            if g.is_connected():
                out.append(g)
                continue
        m = rng.randint(n - 1, cap)
        out.append(random_multigraph(rng, n, m))
    return out
