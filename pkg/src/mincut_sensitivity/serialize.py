"""Versioned line-oriented text dump of built oracles.

Layout (one JSON document per section line):

    mincut-oracle-dump <version>
    kind <quad|compact|dist>
    graph <json>
    hierarchy <json>
    carcass <node id> <json>          # quad and dist, one per internal node
    level <node id> <json>            # compact, one per internal node
    end

Loading restores every stored structure as is; only the tree indexes used for
LCA and level-ancestor queries are recomputed. A "dist" dump holds the
quadratic sections; labels are read off them after loading. The format is
stable within one version number.
"""
from __future__ import annotations

import json
from typing import TextIO

from .cactus import Skeleton
from .carcass import Carcass, UnitPartition
from .compact import CompactNode, CompactOracle, ContractedVertex
from .graph import InvalidArgument, Multigraph
from .hierarchy import HierarchyNode, HierarchyTree
from .quadratic import QuadraticOracle
from .trees import OpCounter

VERSION = 1
KINDS = ("quad", "compact", "dist")


class DumpError(ValueError):
    """Malformed or incompatible dump."""


def _pairs(d: dict) -> list:
    return [[k, v] for k, v in sorted(d.items())]


def _edge_pairs(g: Multigraph) -> dict[tuple[int, int], int]:
    pairs: dict[tuple[int, int], int] = {}
    for eid, u, v in g.edges:
        pairs.setdefault((min(u, v), max(u, v)), eid)
    return pairs


# -- encoders ---------------------------------------------------------------------

def graph_doc(g: Multigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges],
        "origin": [[v, sorted(m)] for v, m in sorted(g.origin.items())],
    }


def hierarchy_doc(h: HierarchyTree) -> list:
    return [[nd.id, nd.parent, sorted(nd.steiner), nd.value, nd.children] for nd in h.nodes]


def carcass_doc(c: Carcass) -> dict:
    sk = c.skeleton
    return {
        "steiner": sorted(c.steiner),
        "value": c.value,
        "units": [sorted(u) for u in c.units.units],
        "stretched": c.units.stretched,
        "steiner_units": c.units.steiner,
        "members": [sorted(m) for m in sk.members],
        "tree_edges": [list(e) for e in sk.tree_edges],
        "cycles": sk.cycles,
        "root": sk.root_node,
        "node_of_unit": _pairs(c.node_of_unit),
        "path_of_unit": [[u, list(p)] for u, p in sorted(c.path_of_unit.items())],
        "toward": [[u, [[e, sorted(es)] for e, es in sorted(d.items())]] for u, d in sorted(c.toward.items())],
        "tau": _pairs(c.tau),
        "path_units": [[list(k), v] for k, v in sorted(c.path_units.items())],
    }


def level_doc(nd: CompactNode) -> dict:
    return {
        "graph": graph_doc(nd.graph),
        "carcass": carcass_doc(nd.carcass),
        "contracted": [[cv.name, sorted(cv.members), list(cv.structure)] for cv in nd.contracted.values()],
        "swallow": _pairs(nd.swallow),
        "last": _pairs(nd.last),
    }


def dump(oracle, kind: str, out: TextIO) -> None:
    if kind not in KINDS:
        raise InvalidArgument(f"unknown oracle kind {kind!r}")
    w = lambda *parts: out.write(" ".join(parts) + "\n")
    enc = lambda doc: json.dumps(doc, separators=(",", ":"))
    w("mincut-oracle-dump", str(VERSION))
    w("kind", kind)
    w("graph", enc(graph_doc(oracle.graph)))
    w("hierarchy", enc(hierarchy_doc(oracle.hierarchy)))
    if kind == "compact":
        for mu, nd in sorted(oracle.nodes.items()):
            w("level", str(mu), enc(level_doc(nd)))
    else:
        for mu, c in sorted(oracle.carcass.items()):
            w("carcass", str(mu), enc(carcass_doc(c)))
    w("end")


# -- decoders ---------------------------------------------------------------------

def graph_from(doc: dict) -> Multigraph:
    return Multigraph(
        tuple(doc["vertices"]),
        tuple(tuple(e) for e in doc["edges"]),
        {v: frozenset(m) for v, m in doc["origin"]},
    )


def hierarchy_from(doc: list, counter: OpCounter) -> HierarchyTree:
    nodes = [HierarchyNode(i, p, frozenset(s), val, list(ch)) for i, p, s, val, ch in doc]
    return HierarchyTree(nodes, counter)


def carcass_from(doc: dict, g: Multigraph, counter: OpCounter) -> Carcass:
    units = [frozenset(u) for u in doc["units"]]
    unit_of = {v: i for i, u in enumerate(units) for v in u}
    part = UnitPartition(unit_of, units, list(doc["stretched"]), list(doc["steiner_units"]))
    members = [frozenset(m) for m in doc["members"]]
    sk = Skeleton(members, [tuple(e) for e in doc["tree_edges"]], doc["cycles"], doc["root"], counter)
    return Carcass(
        g,
        frozenset(doc["steiner"]),
        doc["value"],
        part,
        sk,
        {u: nd for u, nd in doc["node_of_unit"]},
        {u: tuple(p) for u, p in doc["path_of_unit"]},
        {u: {e: frozenset(es) for e, es in d} for u, d in doc["toward"]},
        {a: b for a, b in doc["tau"]},
        {tuple(k): v for k, v in doc["path_units"]},
    )


def level_from(mu: int, doc: dict, counter: OpCounter) -> CompactNode:
    g = graph_from(doc["graph"])
    contracted = {
        name: ContractedVertex(name, frozenset(mem), tuple(st)) for name, mem, st in doc["contracted"]
    }
    return CompactNode(
        mu,
        g,
        carcass_from(doc["carcass"], g, counter),
        contracted,
        {a: b for a, b in doc["swallow"]},
        {a: b for a, b in doc["last"]},
    )


def load(inp: TextIO):
    """Read a dump; returns (kind, oracle). "dist" dumps load as the quadratic oracle."""
    counter = OpCounter()
    lines = [ln.rstrip("\n") for ln in inp]
    if not lines or lines[0].split() != ["mincut-oracle-dump", str(VERSION)]:
        raise DumpError(f"expected header 'mincut-oracle-dump {VERSION}'")
    kind = g = h = None
    carcasses, levels = {}, {}
    ended = False
    for no, line in enumerate(lines[1:], start=2):
        if ended:
            raise DumpError(f"line {no}: data after end")
        tag, _, rest = line.partition(" ")
        try:
            if tag == "kind":
                kind = rest.strip()
                if kind not in KINDS:
                    raise DumpError(f"line {no}: unknown oracle kind {kind!r}")
            elif tag == "graph":
                g = graph_from(json.loads(rest))
            elif tag == "hierarchy":
                h = hierarchy_from(json.loads(rest), counter)
            elif tag in ("carcass", "level"):
                if g is None:
                    raise DumpError(f"line {no}: {tag} before graph")
                mu, _, body = rest.partition(" ")
                doc = json.loads(body)
                if tag == "carcass":
                    carcasses[int(mu)] = carcass_from(doc, g, counter)
                else:
                    levels[int(mu)] = level_from(int(mu), doc, counter)
            elif tag == "end":
                ended = True
            else:
                raise DumpError(f"line {no}: unknown section {tag!r}")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DumpError):
                raise
            raise DumpError(f"line {no}: {exc}") from None
    if not ended or kind is None or g is None or h is None:
        raise DumpError("truncated dump")
    if kind == "compact":
        return kind, CompactOracle(g, h, levels, counter, _edge_pairs(g))
    return kind, QuadraticOracle(g, h, carcasses, counter, _edge_pairs(g))
