from __future__ import annotations

import pytest

from hyperbft.conditions import check_lcr_hyper
from hyperbft.generators import complete_p2p, sample_condition_violating
from hyperbft.necessity import build_carrier, build_necessity_executions


def test_triangle_produces_split_outputs() -> None:
    g = complete_p2p(3)
    rep = build_necessity_executions(g, 1)
    assert rep.ok
    assert rep.views_match_left and rep.views_match_right
    assert rep.left_outputs_zero and rep.right_outputs_one
    assert rep.split_outputs
    assert len(rep.executions) == 3


def test_triangle_execution_anatomy() -> None:
    g = complete_p2p(3)
    rep = build_necessity_executions(g, 1)
    e1, e2, e3 = rep.executions
    # the first two executions are honest worlds with unanimous inputs
    assert {b for _, b in e1.inputs} == {0}
    assert {b for _, b in e2.inputs} == {1}
    assert {b for _, b in e1.outputs} == {0}
    assert {b for _, b in e2.outputs} == {1}
    # the third runs the actual suspect fault set
    assert e3.faulty == rep.fault_set
    out3 = dict(e3.outputs)
    assert {out3[v] for v in rep.left_nodes} == {0}
    assert {out3[v] for v in rep.right_nodes} == {1}


def test_views_are_byte_identical_on_the_honest_sides() -> None:
    g = complete_p2p(3)
    rep = build_necessity_executions(g, 1)
    e1, e2, e3 = rep.executions
    for v in rep.left_nodes:
        assert e1.logs[v] == e3.logs[v]
    for v in rep.right_nodes:
        assert e2.logs[v] == e3.logs[v]


def test_construction_is_deterministic() -> None:
    g = complete_p2p(3)
    a = build_necessity_executions(g, 1)
    b = build_necessity_executions(g, 1)
    assert a.fault_set == b.fault_set
    assert a.left_nodes == b.left_nodes and a.right_nodes == b.right_nodes
    for ea, eb in zip(a.executions, b.executions):
        assert ea.logs == eb.logs and ea.outputs == eb.outputs


def test_feasible_graph_is_rejected() -> None:
    with pytest.raises(ValueError):
        build_necessity_executions(complete_p2p(4), 1)


def test_carrier_reuses_the_reported_witness() -> None:
    g = complete_p2p(3)
    violation = check_lcr_hyper(g, 1).violation
    assert violation is not None
    carrier = build_carrier(g, 1, violation)
    assert carrier.base == g
    assert carrier.f == 1
    # three executions, each with a fault set within budget
    assert set(carrier.faulty) == {1, 2, 3}
    assert all(len(fs) <= 1 for fs in carrier.faulty.values())


def test_random_violating_instances_all_split() -> None:
    for g, rep0 in sample_condition_violating(4, 4, 1, seed=17):
        rep = build_necessity_executions(g, 1, rep0.violation)
        assert rep.ok, (g.n, len(g.edges))
