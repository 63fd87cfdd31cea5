"""Equivalence matrix: every oracle against brute force over a graph corpus."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .compact import (
    EdgeBundle,
    build_compact,
    check_compact,
    check_nearest_mincut,
    edge_contained_compact,
    ft_value_compact,
    in_value_compact,
    report_ft_cut_compact,
    report_in_cut_compact,
)
from .fixtures import FIXTURES, random_corpus
from .graph import Multigraph, cut_value
from .hierarchy import build_gomory_hu
from .labels import FAIL, INSERT, affected_pairs, build_labels, on_nearest_side, value_changed
from .quadratic import (
    build_quadratic,
    ft_mincut_value,
    in_mincut_value,
    report_ft_cut,
    report_in_cut,
    report_strip,
)
from .reference import CutTable, bf_affected_pairs, strip_sides
from .strip import build_strip

STRIP_MAX_N = 8


@dataclass
class Report:
    graphs: int = 0
    checks: Counter = field(default_factory=Counter)
    mismatches: Counter = field(default_factory=Counter)
    examples: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail=None) -> None:
        self.checks[name] += 1
        if not ok:
            self.mismatches[name] += 1
            if len(self.examples) < 20:
                self.examples.append(f"{name}: {detail}")

    @property
    def total_mismatches(self) -> int:
        return sum(self.mismatches.values())

    def summary(self) -> dict:
        return {
            "graphs": self.graphs,
            "checks": dict(sorted(self.checks.items())),
            "mismatches": dict(sorted(self.mismatches.items())),
            "total_mismatches": self.total_mismatches,
            "examples": self.examples,
        }


def _valid_cut(g: Multigraph, cut, s: int, t: int, value: int) -> bool:
    return s in cut.side and t not in cut.side and cut.value == value and cut_value(g, cut.side) == value


def verify_graph(g: Multigraph, rep: Report, tag: str = "") -> None:
    rep.graphs += 1
    T = CutTable(g)
    q, c, L = build_quadratic(g), build_compact(g), None
    L = build_labels(g, q)
    stats = check_compact(c)
    rep.check("compact-units<=4n", stats.units <= 4 * g.n, (tag, stats))
    ght = build_gomory_hu(g)
    rep.check("gh-weight-sum", g.m <= ght.total_weight <= 2 * g.m, (tag, ght.total_weight, g.m))
    for s, t in itertools.permutations(g.vertices, 2):
        base = T.value(s, t)
        rep.check("gh-path-minimum", ght.path_minimum(s, t) == base, (tag, s, t))
        rep.check("hierarchy-value", q.value(s, t) == base, (tag, s, t))
        for eid, x, y in g.edges:
            want = T.value_without(s, t, eid)
            rep.check("quad-ft", ft_mincut_value(q, s, t, x, y) == want, (tag, s, t, x, y))
            rep.check("compact-ft", ft_value_compact(c, s, t, x, y) == want, (tag, s, t, x, y))
            if want < base:
                rep.check("quad-ft-cut", _valid_cut(g, report_ft_cut(q, s, t, x, y), s, t, base), (tag, s, t, x, y))
                cut = report_ft_cut_compact(c, s, t, x, y)
                rep.check(
                    "compact-ft-cut",
                    cut is not None and _valid_cut(g, cut, s, t, base) and cut.separates(x, y),
                    (tag, s, t, x, y),
                )
            if s < t:
                rep.check("dist-fail", value_changed(L[x], L[y], s, t, FAIL) == (want != base), (tag, s, t, x, y))
        for x, y in itertools.combinations(g.vertices, 2):
            want = T.value_with(s, t, x, y)
            rep.check("quad-in", in_mincut_value(q, s, t, x, y) == want, (tag, s, t, x, y))
            rep.check("compact-in", in_value_compact(c, s, t, x, y) == want, (tag, s, t, x, y))
            for name, cut in (("quad-in-cut", report_in_cut(q, s, t, x, y)), ("compact-in-cut", report_in_cut_compact(c, s, t, x, y))):
                ok = _valid_cut(g, cut, s, t, base) and (want > base or not cut.separates(x, y))
                rep.check(name, ok, (tag, s, t, x, y))
            if s < t:
                rep.check("dist-insert", value_changed(L[x], L[y], s, t, INSERT) == (want != base), (tag, s, t, x, y))
        near = T.nearest(s, t)
        for y in g.vertices:
            rep.check("compact-nearest", check_nearest_mincut(c, s, t, y) == (y in near), (tag, s, t, y))
            rep.check("dist-nearest", on_nearest_side(L[y], s, t) == (y in near), (tag, s, t, y))
            if y in (s, t):
                continue
            bundle = EdgeBundle.all_edges(g, y)
            got = edge_contained_compact(c, s, t, bundle)
            want_cut = T.contained(s, t, bundle.edges)
            ok = (got is None) == (want_cut is None)
            if got is not None:
                ok = ok and _valid_cut(g, got, s, t, base) and all(got.contains_edge(g, e) for e in bundle.edges)
            rep.check("compact-bundle", ok, (tag, s, t, y))
        if g.n <= STRIP_MAX_N:
            strip = build_strip(g, s, t)
            rep.check("strip-sides", strip_sides(strip) == T.mincut_sides(s, t), (tag, s, t))
            rs = report_strip(q, s, t)
            same = (rs.nodes, rs.source, rs.sink, rs.side_s, rs.side_t) == (
                strip.nodes, strip.source, strip.sink, strip.side_s, strip.side_t
            )
            rep.check("report-strip", same, (tag, s, t))
    for eid, x, y in g.edges:
        want = bf_affected_pairs(g, ("fail", x, y))
        rep.check("dist-ap-fail", set(affected_pairs(L[x], L[y], FAIL).expand()) == want, (tag, x, y))
    for x, y in itertools.combinations(g.vertices, 2):
        want = bf_affected_pairs(g, ("ins", x, y))
        rep.check("dist-ap-insert", set(affected_pairs(L[x], L[y], INSERT).expand()) == want, (tag, x, y))


def corpus(seed: int, count: int, max_n: int, density: float = 2.5, fixtures: bool = True) -> list[tuple[str, Multigraph]]:
    out = [(name, f().graph) for name, f in FIXTURES.items()] if fixtures else []
    out += [(f"random-{i}", g) for i, g in enumerate(random_corpus(seed, count, 3, max_n, density))]
    return out


def verify_corpus(graphs: list[tuple[str, Multigraph]], progress=None) -> Report:
    rep = Report()
    for tag, g in graphs:
        verify_graph(g, rep, tag)
        if progress:
            progress(tag, rep)
    return rep
