import itertools
import random

from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_multigraphs
from mincut_sensitivity.cactus import SkeletonCut
from mincut_sensitivity.carcass import (
    build_carcass,
    build_link,
    compute_bunches,
    compute_tau,
    compute_units,
    enumerate_bunches,
    strip_for_skeleton_cut,
)
from mincut_sensitivity.fixtures import c4, p3, tb
from mincut_sensitivity.reference import CutTable, strip_sides
from mincut_sensitivity.strip import build_strip


def steiner_mincut_sides(g, S):
    """Every side (holding min S) of a minimum cut separating two vertices of S."""
    table = CutTable(g)
    S = sorted(S)
    cs = min(table.value(a, b) for a, b in itertools.combinations(S, 2))
    sides = set()
    for a, b in itertools.combinations(S, 2):
        if table.value(a, b) == cs:
            for side in table.mincut_sides(a, b):
                sides.add(side if S[0] in side else frozenset(g.vertices) - side)
    return cs, sides


def node_of(c, v):
    return c.vertex_ends(v)[0]


# -- examples --------------------------------------------------------------------------

def test_bunches_examples():
    g = c4()
    bunches = compute_bunches(g.graph, g.graph.vertices)
    assert len(bunches) == 6
    sides = {b.steiner_side for b in bunches}
    v = g.graph.vertices
    assert {frozenset((v[0], v[1])), frozenset((v[0], v[3]))} <= sides
    g = p3()
    (b,) = compute_bunches(g.graph, {g["s"], g["t"]})
    assert [b.strip.nodes[x] for x in b.strip.non_terminals] == [{g["a"]}]
    g = tb()
    (b,) = compute_bunches(g.graph, g.graph.vertices)
    assert b.steiner_side == {g["a1"], g["a2"], g["a3"]}


def test_units_examples():
    g = tb()
    S = g.graph.vertices
    units = compute_units(g.graph, S, compute_bunches(g.graph, S))
    assert len(units.units) == 2 and not any(units.stretched)
    g = c4()
    S = {g["v1"], g["v3"]}
    units = compute_units(g.graph, S, compute_bunches(g.graph, S))
    assert sorted(map(sorted, units.units)) == [[0], [1], [2], [3]]
    stretched = {v for u, vs in enumerate(units.units) if units.stretched[u] for v in vs}
    assert stretched == {g["v2"], g["v4"]}
    S = g.graph.vertices
    units = compute_units(g.graph, S, compute_bunches(g.graph, S))
    assert len(units.units) == 4 and not any(units.stretched)


def test_skeleton_examples():
    g = c4()
    sk = build_carcass(g.graph, g.graph.vertices).skeleton
    assert sk.n_nodes == 4 and len(sk.cycles) == 1 and len(sk.cycles[0]) == 4 and not sk.tree_edges
    g = tb()
    sk = build_carcass(g.graph, g.graph.vertices).skeleton
    assert sk.n_nodes == 2 and len(sk.tree_edges) == 1 and not sk.cycles
    g = p3()
    c = build_carcass(g.graph, {g["s"], g["t"]})
    assert c.skeleton.n_nodes == 2 and len(c.skeleton.tree_edges) == 1
    assert c.units.stretched[c.unit(g["a"])]


def test_projection_examples():
    g = p3()
    c = build_carcass(g.graph, {g["s"], g["t"]})
    assert set(c.vertex_ends(g["a"])) == {node_of(c, g["s"]), node_of(c, g["t"])}
    assert c.vertex_ends(g["s"]) == (node_of(c, g["s"]),) * 2
    g = c4()
    c = build_carcass(g.graph, {g["v1"], g["v3"]})
    ends = {node_of(c, g["v1"]), node_of(c, g["v3"])}
    assert set(c.vertex_ends(g["v2"])) == ends == set(c.vertex_ends(g["v4"]))


def test_paths_intersect_examples():
    g = c4()
    c = build_carcass(g.graph, g.graph.vertices)
    sk = c.skeleton
    n = {v: node_of(c, g[v]) for v in ("v1", "v2", "v3", "v4")}
    assert sk.intersection_witness((n["v1"], n["v3"]), (n["v2"], n["v4"])) == ("cycle", 0)
    assert sk.paths_intersect((n["v1"], n["v1"]), (n["v1"], n["v1"])) is False
    g = tb()
    c = build_carcass(g.graph, g.graph.vertices)
    a, b = node_of(c, g["a1"]), node_of(c, g["b1"])
    assert c.skeleton.intersection_witness((a, b), (a, b)) == ("tree", tuple(sorted((a, b))))


def test_extendable_examples():
    g = tb()
    c = build_carcass(g.graph, g.graph.vertices)
    a, b = node_of(c, g["a1"]), node_of(c, g["b1"])
    assert c.skeleton.extendable((a, b), (a, b), b) == (a, b)
    g = c4()
    c = build_carcass(g.graph, g.graph.vertices)
    n1, n2, n3 = (node_of(c, g[v]) for v in ("v1", "v2", "v3"))
    assert c.skeleton.extendable((n1, n2), (n1, n2), n2) == (n1, n2)
    assert c.skeleton.extendable((n1, n2), (n2, n3), n2) is None


def test_link_examples():
    g = tb()
    c = build_carcass(g.graph, g.graph.vertices)
    a, b = node_of(c, g["a1"]), node_of(c, g["b1"])
    assert len(build_link(c.skeleton, a, b).groups()) == 2
    assert len(build_link(c.skeleton, a, a).groups()) == 1
    g = c4()
    c = build_carcass(g.graph, g.graph.vertices)
    link = build_link(c.skeleton, node_of(c, g["v1"]), node_of(c, g["v3"]))
    assert len(link.groups()) == 4
    # v2 and v4 hang off opposite arcs, both strictly between v1 and v3
    pos = {v: link.position(node_of(c, g[v])) for v in ("v1", "v2", "v3", "v4")}
    assert pos["v1"] < pos["v2"] < pos["v3"] and pos["v1"] < pos["v4"] < pos["v3"]


def test_strip_for_skeleton_cut_examples():
    g = c4()
    c = build_carcass(g.graph, g.graph.vertices)
    sk = c.skeleton
    cyc = sk.cycles[0]
    i = cyc.index(node_of(c, g["v1"]))
    j = (i - 1) % 4
    cut = SkeletonCut("cycle", 0, min(i, j), max(i, j))
    strip = strip_for_skeleton_cut(c, cut, source_node=node_of(c, g["v1"]))
    assert strip.nodes[strip.source] == {g["v1"]}
    assert strip.nodes[strip.sink] == {g["v2"], g["v3"], g["v4"]} and not strip.non_terminals
    g = p3()
    c = build_carcass(g.graph, {g["s"], g["t"]})
    (e,) = c.skeleton.tree_edges
    strip = strip_for_skeleton_cut(c, c.skeleton.cut_for_tree_edge(*e))
    ref = build_strip(g.graph, g["s"], g["t"])
    assert (strip.nodes, strip.side_s, strip.side_t) == (ref.nodes, ref.side_s, ref.side_t)
    g = tb()
    c = build_carcass(g.graph, g.graph.vertices)
    (e,) = c.skeleton.tree_edges
    strip = strip_for_skeleton_cut(c, c.skeleton.cut_for_tree_edge(*e))
    assert strip.nodes[strip.source] == {g["a1"], g["a2"], g["a3"]}
    assert strip.nodes[strip.sink] == {g["b1"], g["b2"], g["b3"]}


def test_tau_examples():
    g = p3()
    c = build_carcass(g.graph, {g["s"], g["t"]})
    assert compute_tau(c) == {c.unit(g["a"]): 0}
    g = c4()
    c = build_carcass(g.graph, {g["v1"], g["v3"]})
    tau = compute_tau(c)
    assert tau[c.unit(g["v2"])] == 0 and tau[c.unit(g["v4"])] == 1
    g = tb()
    assert compute_tau(build_carcass(g.graph, g.graph.vertices)) == {}


# -- properties against brute force ------------------------------------------------

@st.composite
def graph_and_steiner(draw):
    g = draw(connected_multigraphs(min_n=3, max_n=8))
    rng = random.Random(draw(st.integers(0, 10**6)))
    k = rng.randint(2, g.n)
    return g, frozenset(rng.sample(g.vertices, k))


@given(graph_and_steiner())
def test_enumerated_bunches_match_exhaustive_splits(gs):
    g, S = gs
    fast = {b.steiner_side for b in enumerate_bunches(g, S)[1]}
    slow = {b.steiner_side for b in compute_bunches(g, S)}
    assert fast == slow


@given(graph_and_steiner())
def test_units_are_classes_never_separated(gs):
    g, S = gs
    c = build_carcass(g, S)
    _, sides = steiner_mincut_sides(g, S)
    for a, b in itertools.combinations(g.vertices, 2):
        together = all((a in side) == (b in side) for side in sides)
        assert together == (c.unit(a) == c.unit(b))


@given(graph_and_steiner())
def test_skeleton_cuts_realise_every_steiner_bipartition(gs):
    g, S = gs
    c = build_carcass(g, S)
    cs, sides = steiner_mincut_sides(g, S)
    assert c.value == cs
    want = {side & S for side in sides}
    sk = c.skeleton
    got = set()
    for cut in sk.cuts():
        away = sk.cut_side(cut)
        far = frozenset(v for v in S if node_of(c, v) in away)
        near = S - far
        got.add(near if min(S) in near else far)
    assert got == want


@given(graph_and_steiner())
def test_skeleton_cut_strips_hold_exactly_their_mincuts(gs):
    g, S = gs
    c = build_carcass(g, S)
    _, sides = steiner_mincut_sides(g, S)
    sk = c.skeleton
    for cut in sk.cuts():
        strip = strip_for_skeleton_cut(c, cut)
        if len(strip.non_terminals) > 10:
            continue
        for side in strip_sides(strip):
            assert side in sides or frozenset(g.vertices) - side in sides


@given(graph_and_steiner())
def test_units_counted_by_steiner_flag(gs):
    g, S = gs
    c = build_carcass(g, S)
    total, non_steiner = c.unit_counts()
    assert total == len(c.units.units)
    assert non_steiner == sum(1 for u in c.units.units if not (u & S))
