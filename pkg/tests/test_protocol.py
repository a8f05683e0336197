from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from hyperbft.formats import canonical_json
from hyperbft.generators import (
    complete_p2p,
    cycle_local_broadcast,
    sample_condition_passing,
)
from hyperbft.hypergraph import DirectedHypergraph
from hyperbft.protocol import (
    ADVERSARY_NAMES,
    Engine,
    SplitPersonaAdversary,
    get_engine,
    make_adversary,
    run_scenario,
    sweep_scenarios,
)


def all_inputs(n: int):
    import itertools

    return [dict(enumerate(bits)) for bits in itertools.product((0, 1), repeat=n)]


def test_unanimous_honest_run_keeps_the_common_value() -> None:
    g = complete_p2p(4)
    for bit in (0, 1):
        res = run_scenario(g, 1, [], {v: bit for v in range(4)}, "honest")
        assert res.terminated and res.agreement and res.validity
        assert dict(res.outputs) == {v: bit for v in range(4)}


def test_mixed_inputs_settle_on_an_input_value() -> None:
    g = complete_p2p(4)
    res = run_scenario(g, 1, [], {0: 0, 1: 1, 2: 1, 3: 0}, "honest")
    assert res.agreement and res.validity
    decided = {b for _, b in res.outputs}
    assert len(decided) == 1 and decided <= {0, 1}


def test_faulty_node_is_excluded_from_verdicts() -> None:
    g = complete_p2p(4)
    res = run_scenario(g, 1, [2], {0: 1, 1: 1, 2: 0, 3: 1}, "constant-0")
    assert res.faulty == (2,)
    assert 2 not in dict(res.outputs)
    assert res.agreement and res.validity
    # honest nodes were unanimous on 1, so the adversary cannot force 0
    assert {b for _, b in res.outputs} == {1}


def test_every_library_adversary_fails_on_complete_four() -> None:
    g = complete_p2p(4)
    for name in ADVERSARY_NAMES:
        res = run_scenario(g, 1, [3], {0: 1, 1: 0, 2: 1, 3: 0}, name)
        assert res.terminated and res.agreement and res.validity, name
        assert res.phase_validity_ok and res.exact_phase_agreement_ok, name


def test_split_persona_breaks_agreement_on_triangle() -> None:
    # the triangle fails the feasibility condition; the two-faced adversary
    # realizes exactly the violating node split
    g = complete_p2p(3)
    broke = False
    for inputs in all_inputs(3):
        res = run_scenario(g, 1, [0], inputs, "split_persona")
        if not res.agreement:
            broke = True
    assert broke


def test_honest_adversary_follows_protocol_exactly() -> None:
    g = complete_p2p(4)
    base = run_scenario(g, 1, [], {0: 1, 1: 0, 2: 0, 3: 1}, "honest")
    marked = run_scenario(g, 1, [1], {0: 1, 1: 0, 2: 0, 3: 1}, "honest")
    # a protocol-following "faulty" node changes nothing for the others
    assert dict(base.outputs)[0] == dict(marked.outputs)[0]
    assert marked.agreement and marked.validity


def test_phase_outcomes_expose_state_snapshots() -> None:
    g = complete_p2p(4)
    res = run_scenario(g, 1, [3], {0: 1, 1: 0, 2: 1, 3: 0}, "silent")
    assert len(res.phases) == 5  # empty fault set plus one per node
    for ph in res.phases:
        assert len(ph.state) == 4
        assert set(ph.state) <= {0, 1}
    assert res.phases[0].fault_set == ()
    assert res.phases[1].fault_set == (0,)


def test_split_persona_accepts_explicit_channel_map() -> None:
    g = complete_p2p(3)
    eids = sorted(e.id for e in g.head_edges(0))
    adv = SplitPersonaAdversary(assignment={eids[0]: 1, eids[1]: 0})
    res = run_scenario(g, 1, [0], {0: 0, 1: 0, 2: 1}, adv)
    assert res.terminated


def test_unknown_adversary_name_rejected() -> None:
    with pytest.raises(ValueError):
        make_adversary("gremlin")


def test_engine_requires_dense_node_ids() -> None:
    g = DirectedHypergraph(3, [], nodes={0, 2}).remove_nodes({1})
    with pytest.raises(ValueError):
        Engine(g, 1)


def test_fault_budget_enforced() -> None:
    g = complete_p2p(4)
    with pytest.raises(ValueError):
        run_scenario(g, 1, [0, 1], {v: 0 for v in range(4)}, "honest")


def test_runs_are_deterministic() -> None:
    g = cycle_local_broadcast(4)
    a = run_scenario(g, 1, [2], {0: 0, 1: 1, 2: 0, 3: 1}, "flip_forwarding")
    b = run_scenario(g, 1, [2], {0: 0, 1: 1, 2: 0, 3: 1}, "flip_forwarding")
    assert canonical_json(a) == canonical_json(b)


def test_sweep_aggregates_and_is_worker_independent() -> None:
    g = complete_p2p(4)
    seq = sweep_scenarios(g, 1, workers=1)
    par = sweep_scenarios(g, 1, workers=2)
    assert canonical_json(seq) == canonical_json(par)
    assert seq.runs == (1 + 4 * len(ADVERSARY_NAMES)) * 16
    assert seq.all_terminated and seq.all_agreement and seq.all_validity
    assert seq.all_phase_validity and seq.all_exact_phase_agreement
    assert not seq.failures


def test_sweep_flags_failures_on_infeasible_graph() -> None:
    g = complete_p2p(3)
    rep = sweep_scenarios(g, 1)
    assert not rep.all_agreement
    assert rep.failures
    assert all(not r.agreement for r in rep.failures)
    assert {r.adversary for r in rep.failures} == {"split_persona"}


def test_worker_env_variable_controls_pool(monkeypatch) -> None:
    g = complete_p2p(4)
    monkeypatch.setenv("HYPERBFT_WORKERS", "2")
    env_rep = sweep_scenarios(g, 1)
    monkeypatch.delenv("HYPERBFT_WORKERS")
    assert canonical_json(env_rep) == canonical_json(sweep_scenarios(g, 1, workers=1))


@settings(max_examples=6, deadline=None)
@given(st.integers(min_value=0, max_value=2**31), st.data())
def test_validity_outputs_come_from_honest_inputs(seed: int, data) -> None:
    sampled = sample_condition_passing(1, 5, 1, seed=seed)
    if not sampled:
        return
    g, _ = sampled[0]
    inputs = {v: data.draw(st.integers(0, 1), label=f"input{v}") for v in range(g.n)}
    faulty = data.draw(st.sampled_from([frozenset(), *({v} for v in range(g.n))]))
    adversary = data.draw(st.sampled_from(ADVERSARY_NAMES))
    res = run_scenario(g, 1, faulty, inputs, adversary)
    honest_inputs = {inputs[v] for v in range(g.n) if v not in set(faulty)}
    assert res.terminated
    assert {b for _, b in res.outputs} <= honest_inputs
    assert res.agreement
