import itertools
import random

import pytest
from hypothesis import given

from conftest import connected_multigraphs
from helpers import nx_flow_value
from mincut_sensitivity.fixtures import c4, k4, p3, random_multigraph
from mincut_sensitivity.graph import InvalidArgument
from mincut_sensitivity.reference import (
    CapacityError,
    CutTable,
    bf_affected_pairs,
    bf_edge_contained,
    bf_ft,
    bf_in,
    bf_nearest_side,
)
from mincut_sensitivity.strip import build_strip


def test_examples():
    g = c4()
    assert bf_ft(g.graph, g["v1"], g["v3"], g.edge("v1", "v2")) == 1
    g = p3()
    assert bf_nearest_side(g.graph, g["s"], g["t"]) == {g["s"]}
    g = k4()
    assert not bf_edge_contained(g.graph, g["v1"], g["v3"], [g.edge("v2", "v4")])
    assert bf_in(g.graph, g["v1"], g["v3"], g["v1"], g["v3"]) == 4


def test_capacity_error():
    g = random_multigraph(random.Random(0), 13, 20)
    with pytest.raises(CapacityError):
        CutTable(g)


def test_affected_pairs_rejects_bad_change():
    g = p3().graph
    with pytest.raises(InvalidArgument):
        bf_affected_pairs(g, ("fail", 0, 2))
    with pytest.raises(InvalidArgument):
        bf_affected_pairs(g, ("grow", 0, 1))


@given(connected_multigraphs(min_n=2, max_n=8))
def test_cut_table_agrees_with_flows(g):
    table = CutTable(g)
    for s, t in itertools.combinations(g.vertices, 2):
        assert table.value(s, t) == nx_flow_value(g, s, t)
        for eid, _, _ in g.edges:
            assert table.value_without(s, t, eid) == bf_ft(g, s, t, eid)
        for x, y in itertools.combinations(g.vertices, 2):
            assert table.value_with(s, t, x, y) == bf_in(g, s, t, x, y)


@given(connected_multigraphs(min_n=2, max_n=8))
def test_enumeration_agrees_with_strip_nodes(g):
    table = CutTable(g)
    for s, t in itertools.permutations(g.vertices, 2):
        strip = build_strip(g, s, t)
        assert table.nearest(s, t) == bf_nearest_side(g, s, t)
        for eid, _, _ in g.edges:
            a, b = strip.edge_nodes(eid)
            assert bf_edge_contained(g, s, t, [eid]) == (a != b)
