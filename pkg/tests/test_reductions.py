from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from hyperbft.conditions import check_lcr_hyper
from hyperbft.generators import (
    all_local_broadcast_graphs,
    all_p2p_graphs,
    all_undirected_hypergraphs,
    complete_p2p,
    cycle_local_broadcast,
    path_local_broadcast,
    random_p2p,
)
from hyperbft.hypergraph import DirectedHypergraph
from hyperbft.reductions import (
    check_lcr_local,
    check_lcr_p2p,
    counterexample_hypergraph,
    cross_validate_reduction,
    hyper_k_connected,
    theorem_local_classic,
    theorem_p2p_classic,
    triple_cover_condition,
    undirected_conditions,
    vertex_connectivity,
)


def test_point_to_point_fixtures() -> None:
    assert check_lcr_p2p(complete_p2p(4), 1).holds
    assert not check_lcr_p2p(complete_p2p(3), 1).holds
    assert theorem_p2p_classic(complete_p2p(4), 1)
    assert not theorem_p2p_classic(complete_p2p(3), 1)


def test_local_broadcast_fixtures() -> None:
    assert check_lcr_local(cycle_local_broadcast(4), 1).holds
    assert not check_lcr_local(path_local_broadcast(3), 1).holds
    assert theorem_local_classic(cycle_local_broadcast(4), 1)
    assert not theorem_local_classic(path_local_broadcast(3), 1)


def test_fixtures_match_general_checker() -> None:
    assert check_lcr_hyper(complete_p2p(4), 1).holds
    assert not check_lcr_hyper(complete_p2p(3), 1).holds
    assert check_lcr_hyper(cycle_local_broadcast(4), 1).holds
    assert not check_lcr_hyper(path_local_broadcast(3), 1).holds


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=5),
    st.integers(min_value=0, max_value=20),
    st.integers(min_value=0, max_value=2**31),
)
def test_vertex_connectivity_against_networkx(n: int, arcs: int, seed: int) -> None:
    # connectivity is defined on the undirected version of the digraph
    g = random_p2p(n, arcs, seed)
    ug = nx.Graph()
    ug.add_nodes_from(range(n))
    for e in g.edges:
        for t in e.tails:
            ug.add_edge(e.head, t)
    ours = vertex_connectivity(g.underlying)
    theirs = nx.node_connectivity(ug)
    assert ours == theirs


def test_exhaustive_cross_validation_tiny() -> None:
    for g in all_p2p_graphs(3):
        assert cross_validate_reduction(g, 1, "p2p").agree
    for g in all_local_broadcast_graphs(3):
        assert cross_validate_reduction(g, 1, "local").agree
    for g in all_undirected_hypergraphs(3):
        assert cross_validate_reduction(g, 1, "undirected").agree


def test_cross_validation_rejects_wrong_class() -> None:
    with pytest.raises(ValueError):
        cross_validate_reduction(cycle_local_broadcast(4), 1, "p2p")
    one_way = DirectedHypergraph.from_edge_tuples(3, [(0, (1,)), (1, (2,))])
    with pytest.raises(ValueError):
        cross_validate_reduction(one_way, 1, "undirected")
    with pytest.raises(ValueError):
        cross_validate_reduction(complete_p2p(3), 1, "nonsense")


def test_undirected_conditions_on_complete_pair_exchange() -> None:
    # undirected K4 as pairwise channels: every pair {u, v} present both ways
    pairs = [(u, (v,)) for u in range(4) for v in range(4) if u != v]
    g = DirectedHypergraph.from_edge_tuples(4, pairs)
    cond = undirected_conditions(g, 1)
    assert cond.holds == check_lcr_hyper(g, 1).holds


def test_triple_cover_on_counterexample() -> None:
    g = counterexample_hypergraph(3)
    assert g.n == 8
    assert triple_cover_condition(g, 3)
    assert not hyper_k_connected(g, 3, 3, 2)


def test_counterexample_scales_with_budget() -> None:
    g = counterexample_hypergraph(4)
    assert g.n == 11
    assert triple_cover_condition(g, 4)
    assert not hyper_k_connected(g, 4, 4, 2)


def test_counterexample_rejects_small_budgets() -> None:
    with pytest.raises(ValueError):
        counterexample_hypergraph(2)


def test_hyper_connectivity_needs_wide_channels() -> None:
    # pairwise channels alone cannot witness a three-way partition,
    # a genuinely three-wide channel can
    pairs = [(u, (v,)) for u in range(3) for v in range(3) if u != v]
    tri = DirectedHypergraph.from_edge_tuples(3, pairs)
    assert hyper_k_connected(tri, 2, 2, 1)
    assert not hyper_k_connected(tri, 3, 1, 1)
    wide = DirectedHypergraph.from_edge_tuples(
        3, pairs + [(v, tuple(sorted({0, 1, 2} - {v}))) for v in range(3)]
    )
    assert hyper_k_connected(wide, 3, 1, 1)
