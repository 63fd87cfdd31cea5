import itertools
import random

import pytest

from mincut_sensitivity.fixtures import FIXTURES, c4, h1, p3, random_corpus
from mincut_sensitivity.graph import Cut, InvalidArgument, cut_value
from mincut_sensitivity.reference import CutTable
from mincut_sensitivity.strip import build_strip
from mincut_sensitivity.transform import (
    EdgeBundle,
    Infeasible,
    build_strip_above,
    lift_cut,
    nearest_check_local,
    transform_edge_bundle,
)


def node_sets(strip):
    return {strip.nodes[x] for x in strip.non_terminals}


# -- build_strip_above --------------------------------------------------------------

def test_strip_above_h1():
    g = h1()
    A = {g["s"], g["r"]}
    st = build_strip_above(g.graph, A, g["t"])
    assert st.nodes[st.source] == A and st.nodes[st.sink] == {g["t"]}
    assert node_sets(st) == {frozenset({g["y"]})}
    y = st.node_of[g["y"]]
    assert st.side_s[y] == {g.edge("s", "y")} and st.side_t[y] == {g.edge("y", "t")}
    assert st.edge_nodes(g.edge("r", "t")) in ((st.source, st.sink), (st.sink, st.source))


def test_strip_above_singleton_source_is_the_plain_strip():
    g = p3()
    st = build_strip_above(g.graph, {g["s"]}, g["t"])
    ref = build_strip(g.graph, g["s"], g["t"])
    assert (st.nodes, st.side_s, st.side_t) == (ref.nodes, ref.side_s, ref.side_t)


def test_strip_above_c4():
    g = c4()
    st = build_strip_above(g.graph, {g["v1"], g["v2"]}, g["v3"])
    assert st.nodes[st.source] == {g["v1"], g["v2"]} and st.nodes[st.sink] == {g["v3"]}
    assert node_sets(st) == {frozenset({g["v4"]})}


def test_strip_above_rejects_non_mincut():
    g = c4()
    with pytest.raises(InvalidArgument):
        build_strip_above(g.graph, {g["v1"], g["v3"]}, g["v2"])
    with pytest.raises(InvalidArgument):
        build_strip_above(g.graph, {g["v1"], g["v3"]}, g["v3"])


# -- transform / lift / nearest ---------------------------------------------------------

def h1_setup():
    g = h1()
    return g, build_strip_above(g.graph, {g["s"], g["r"]}, g["t"])


def test_transform_h1_sink_facing_bundle():
    g, st = h1_setup()
    out = transform_edge_bundle(st, EdgeBundle.make(g.graph, g["y"], [g.edge("y", "t")]))
    assert out.edges == {g.edge("s", "y")}


def test_transform_h1_source_facing_bundle():
    g, st = h1_setup()
    out = transform_edge_bundle(st, EdgeBundle.make(g.graph, g["y"], [g.edge("s", "y")]))
    assert out.edges == {g.edge("s", "y")}


def test_transform_bundle_spanning_both_sides_is_infeasible():
    g, st = h1_setup()
    out = transform_edge_bundle(st, EdgeBundle.all_edges(g.graph, g["y"]))
    assert isinstance(out, Infeasible)


def test_transform_rejects_anchor_inside_a():
    g, st = h1_setup()
    with pytest.raises(InvalidArgument):
        transform_edge_bundle(st, EdgeBundle.make(g.graph, g["s"], [g.edge("s", "y")]))


def test_edge_bundle_validation():
    g = h1()
    with pytest.raises(InvalidArgument):
        EdgeBundle.make(g.graph, g["y"], [])
    with pytest.raises(InvalidArgument):
        EdgeBundle.make(g.graph, g["y"], [g.edge("r", "t")])


def test_lift_cut_h1():
    g, st = h1_setup()
    bundle = EdgeBundle.make(g.graph, g["y"], [g.edge("y", "t")])
    B = Cut(frozenset({g["s"]}), 3)
    assert cut_value(g.graph, B.side) == 3
    lifted = lift_cut(st, B, bundle)
    assert lifted.side == {g["s"], g["y"]} and lifted.value == 3
    assert cut_value(g.graph, lifted.side) == 3 and lifted.contains_edge(g.graph, g.edge("y", "t"))


def test_lift_cut_unchanged_when_nothing_to_add():
    g, st = h1_setup()
    bundle = EdgeBundle.make(g.graph, g["y"], [g.edge("s", "y")])
    B = Cut(frozenset({g["s"]}), 3)
    assert lift_cut(st, B, bundle).side == B.side


def test_lift_cut_rejects_cut_missing_the_bundle():
    g, st = h1_setup()
    bundle = EdgeBundle.make(g.graph, g["y"], [g.edge("y", "t")])
    with pytest.raises(InvalidArgument):
        lift_cut(st, Cut(frozenset({g["s"], g["y"]}), 3), bundle)


def test_nearest_check_local_h1():
    g, st = h1_setup()
    table = CutTable(g.graph)
    contained = lambda eids: table.contained(g["s"], g["r"], eids) is not None
    assert nearest_check_local(st, g["y"], True, contained) is False
    assert g["y"] not in table.nearest(g["s"], g["r"])
    assert nearest_check_local(st, g["s"], True, contained) is True


# -- randomized suites against brute force ---------------------------------------------

def instances(seed=1, count=60, max_n=8, density=2.5):
    """(g, table, s, t, A, r) with A an (s,t)-mincut side holding s and r, c(s,r) >= c(s,t)."""
    graphs = [f().graph for f in FIXTURES.values()] + random_corpus(seed, count, 3, max_n, density)
    for g in graphs:
        table = CutTable(g)
        for s, t in itertools.permutations(g.vertices, 2):
            val = table.value(s, t)
            for A in sorted(table.mincut_sides(s, t), key=sorted):
                for r in sorted(A):
                    if r != s and table.value(r, s) >= val:
                        yield g, table, s, t, A, r


def test_three_vertex_lemma():
    checked = 0
    for g, table, s, t, A, r in instances():
        V = frozenset(g.vertices)
        for B in table.mincut_sides(r, s):
            B = B if t not in B else V - B  # the side of the (r,s)-mincut avoiding t
            a_b, na_nb = A & B, (V - A) - B
            cross = sum(
                1 for _, u, v in g.edges
                if (u in (V - A) & B and v in A - B) or (v in (V - A) & B and u in A - B)
            )
            assert cross == 0
            assert cut_value(g, a_b) == table.value(r, s)
            assert cut_value(g, na_nb) == table.value(s, t) == table.value(r, t)
            checked += 1
    assert checked >= 1000


def test_transformation_equivalence_and_lifting():
    rng = random.Random(7)
    bundles = 0
    for g, table, s, t, A, r in instances(seed=2, count=40):
        st = build_strip_above(g, A, t)
        assert st.nodes[st.source] == A
        for y in g.vertices:
            if y in A:
                continue
            inc = [eid for eid, _ in g.adjacency[y]]
            subsets = [c for k in range(1, len(inc) + 1) for c in itertools.combinations(inc, k)]
            for sub in rng.sample(subsets, min(4, len(subsets))):
                bundle = EdgeBundle.make(g, y, sub)
                want = table.contained(r, s, sub)
                out = transform_edge_bundle(st, bundle)
                bundles += 1
                if isinstance(out, Infeasible):
                    assert want is None
                    continue
                got = table.contained(r, s, out.edges)
                assert (got is None) == (want is None)
                if got is not None:
                    side = got.side if r in got.side else frozenset(g.vertices) - got.side
                    lifted = lift_cut(st, Cut(side, got.value), bundle)
                    assert cut_value(g, lifted.side) == got.value == table.value(r, s)
                    assert r in lifted.side and s not in lifted.side
                    assert all(lifted.contains_edge(g, eid) for eid in sub)
    assert bundles >= 500
