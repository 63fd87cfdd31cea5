import itertools
import random

import networkx as nx
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_multigraphs
from helpers import nx_flow_value
from mincut_sensitivity.fixtures import c4, tb
from mincut_sensitivity.graph import Multigraph
from mincut_sensitivity.hierarchy import GomoryHuTree, build_gomory_hu, build_hierarchy, lookup_mincut_value
from mincut_sensitivity.trees import OpCounter, RootedTree


def test_gomory_hu_of_a_tree_is_the_tree():
    g = Multigraph.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    ght = build_gomory_hu(g)
    assert {frozenset((u, v)) for u, v, _ in ght.edges} == {frozenset((u, v)) for _, u, v in g.edges}
    assert all(w == 1 for _, _, w in ght.edges)


def test_gomory_hu_c4():
    ght = build_gomory_hu(c4().graph)
    assert len(ght.edges) == 3 and all(w == 2 for _, _, w in ght.edges)


def test_gomory_hu_tb():
    g = tb()
    ght = build_gomory_hu(g.graph)
    side_a = {g["a1"], g["a2"], g["a3"]}
    for u, v, w in ght.edges:
        assert w == (1 if (u in side_a) != (v in side_a) else 2)


def test_hierarchy_c4():
    h = build_hierarchy(build_gomory_hu(c4().graph))
    root = h[h.root]
    assert root.value == 2 and len(root.children) == 4
    assert all(h[c].is_leaf for c in root.children)


def test_hierarchy_tb():
    g = tb()
    h = build_hierarchy(build_gomory_hu(g.graph))
    root = h[h.root]
    assert root.value == 1 and len(root.children) == 2
    for c in root.children:
        assert h[c].value == 2 and len(h[c].children) == 3


def test_hierarchy_single_vertex():
    h = build_hierarchy(GomoryHuTree((0,), ()))
    assert len(h.nodes) == 1 and h[h.root].is_leaf


def test_lookup_examples():
    g = c4()
    h = build_hierarchy(build_gomory_hu(g.graph))
    assert lookup_mincut_value(h, g["v1"], g["v3"]) == 2
    g = tb()
    h = build_hierarchy(build_gomory_hu(g.graph))
    assert lookup_mincut_value(h, g["a1"], g["b2"]) == 1
    assert lookup_mincut_value(h, g["a1"], g["a2"]) == 2


@given(connected_multigraphs(max_n=9))
def test_gomory_hu_path_minimum_is_max_flow(g):
    ght = build_gomory_hu(g)
    h = build_hierarchy(ght)
    for s, t in itertools.combinations(g.vertices, 2):
        want = nx_flow_value(g, s, t)
        assert ght.path_minimum(s, t) == want == lookup_mincut_value(h, s, t)


@given(connected_multigraphs(max_n=10))
def test_gomory_hu_weight_bounds(g):
    total = build_gomory_hu(g).total_weight
    assert g.m <= total <= 2 * g.m


@given(connected_multigraphs(max_n=10))
def test_hierarchy_values_strictly_increase_downward(g):
    h = build_hierarchy(build_gomory_hu(g))
    for nd in h.internal():
        if nd.parent >= 0:
            assert nd.value > h[nd.parent].value
        assert nd.steiner == frozenset().union(*(h[c].steiner for c in nd.children))
    assert sorted(h.leaf) == list(g.vertices)
    assert h.parent_value_sum() == sum(h[nd.parent].value for nd in h.nodes if nd.parent >= 0)


@given(connected_multigraphs(max_n=10))
def test_child_toward_matches_scan(g):
    h = build_hierarchy(build_gomory_hu(g))
    for nd in h.internal():
        for v in nd.steiner:
            assert h.child_toward(nd.id, v) == h.child_containing(nd.id, v)


# -- rooted trees --------------------------------------------------------------------

@st.composite
def parent_arrays(draw):
    n = draw(st.integers(1, 40))
    rng = random.Random(draw(st.integers(0, 10**9)))
    order = list(range(n))
    rng.shuffle(order)
    parent = [-1] * n
    for i in range(1, n):
        parent[order[i]] = order[rng.randrange(i)]
    return parent


@given(parent_arrays())
def test_rooted_tree_queries_match_networkx(parent):
    tr = RootedTree(parent)
    root = parent.index(-1)
    und = nx.Graph()
    und.add_nodes_from(range(len(parent)))
    und.add_edges_from((v, p) for v, p in enumerate(parent) if p >= 0)
    dag = nx.DiGraph([(p, v) for v, p in enumerate(parent) if p >= 0])
    dag.add_nodes_from(range(len(parent)))
    lcas = dict(nx.all_pairs_lowest_common_ancestor(dag))
    for a, b in itertools.combinations(range(len(parent)), 2):
        want = lcas.get((a, b), lcas.get((b, a)))
        assert tr.lca(a, b) == want
        assert tr.path(a, b) == nx.shortest_path(und, a, b)
    depth = nx.shortest_path_length(und, root)
    for v in range(len(parent)):
        anc = nx.shortest_path(und, root, v)
        for d in range(depth[v] + 1):
            assert tr.ancestor(v, d) == anc[d]


@given(parent_arrays(), st.data())
def test_median_is_on_all_three_paths(parent, data):
    tr = RootedTree(parent)
    n = len(parent)
    a, b, c = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    m = tr.median(a, b, c)
    assert tr.on_path(m, a, b) and tr.on_path(m, a, c) and tr.on_path(m, b, c)


def test_lca_is_counted():
    counter = OpCounter()
    tr = RootedTree([-1, 0, 0, 1], counter)
    tr.lca(3, 2)
    tr.dist(3, 2)
    assert counter.reset() == 2 and counter.ops == 0
