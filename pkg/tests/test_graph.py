import itertools

import pytest
from hypothesis import given

from conftest import connected_multigraphs
from helpers import nx_flow_value
from mincut_sensitivity.fixtures import c4, h1, k4, p3, tb
from mincut_sensitivity.graph import (
    Cut,
    InvalidArgument,
    Multigraph,
    contract,
    cut_value,
    make_cut,
    max_flow,
    max_flow_value,
)


def test_cut_value_examples():
    g = c4()
    assert cut_value(g.graph, {g["v1"]}) == 2
    assert cut_value(g.graph, {g["v1"], g["v2"]}) == 2
    h = h1()
    assert cut_value(h.graph, {h["s"], h["r"]}) == 2


def test_cut_value_rejects_trivial_sides():
    g = c4().graph
    with pytest.raises(InvalidArgument):
        cut_value(g, set())
    with pytest.raises(InvalidArgument):
        cut_value(g, g.vertices)


def test_contract_c4_pair_gives_triangle():
    g = c4()
    q = contract(g.graph, [{g["v2"], g["v3"]}])
    assert q.n == 3 and q.m == 3
    assert q.expand([g["v2"]]) == {g["v2"], g["v3"]}


def test_contract_no_groups_is_identity(fixture_graph):
    assert contract(fixture_graph, []) is fixture_graph


def test_contract_tb_block():
    g = tb()
    q = contract(g.graph, [{g["b1"], g["b2"], g["b3"]}])
    b = g["b1"]
    assert q.n == 4 and q.m == 4
    assert [(u, v) for _, u, v in q.edges if b in (u, v)] == [(g["a1"], b)]


def test_contract_rejects_overlapping_groups():
    g = c4().graph
    with pytest.raises(InvalidArgument):
        contract(g, [{0, 1}, {1, 2}])


def test_max_flow_examples():
    g = p3()
    assert max_flow_value(g.graph, g["s"], g["t"]) == 1
    g = c4()
    assert max_flow_value(g.graph, g["v1"], g["v3"]) == 2
    g = k4()
    assert max_flow_value(g.graph, g["v1"], g["v3"]) == 3


def test_multigraph_validation():
    with pytest.raises(InvalidArgument):
        Multigraph.from_edges(2, [(0, 0)])
    with pytest.raises(InvalidArgument):
        Multigraph((0, 1), ((0, 0, 1), (0, 1, 0)))
    with pytest.raises(InvalidArgument):
        Multigraph((0, 1), ((0, 0, 5),))


def test_parallel_edges_count_in_cuts():
    g = Multigraph.from_edges(2, [(0, 1), (0, 1)])
    assert cut_value(g, {0}) == 2 and max_flow_value(g, 0, 1) == 2


def test_with_and_without_edge():
    g = c4().graph
    assert g.with_edge(0, 2).m == 5
    assert g.without_edge(0).m == 3
    assert make_cut(g, {0}) == Cut(frozenset({0}), 2)


@given(connected_multigraphs(max_n=9))
def test_max_flow_matches_networkx(g):
    for s, t in itertools.combinations(g.vertices, 2):
        assert max_flow_value(g, s, t) == nx_flow_value(g, s, t)


@given(connected_multigraphs(max_n=8))
def test_max_flow_is_a_feasible_flow(g):
    s, t = g.vertices[0], g.vertices[-1]
    res = max_flow(g, s, t)
    net = {v: 0 for v in g.vertices}
    for eid, u, v in g.edges:
        f = res.flow[eid]
        assert f in (-1, 0, 1)
        net[u] -= f
        net[v] += f
    assert net[t] == res.value == -net[s]
    assert all(net[v] == 0 for v in g.vertices if v not in (s, t))
