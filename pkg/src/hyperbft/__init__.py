"""Byzantine agreement on directed hypergraphs.

A library and deterministic simulator for binary Byzantine agreement in the
local-multicast model, where each channel delivers one sender's message to a
fixed set of receivers simultaneously.  The package provides:

* the directed-hypergraph communication model and node-splitting machinery,
* exact checkers for the two equivalent feasibility conditions,
* reduced closed-form conditions for point-to-point, local-broadcast, and
  undirected topologies, with cross-validation drivers,
* a phase-based consensus protocol running against a pluggable adversary
  library, with per-phase safety instrumentation,
* an indistinguishability harness that turns any condition violation into
  three executions forcing disagreement, and
* a command-line front end (``hyperbft``).
"""

from __future__ import annotations

from .conditions import (
    AB,
    LCR,
    ConditionReport,
    PartitionAB,
    PartitionLCR,
    Violation,
    check_ab_hyper,
    check_lcr_hyper,
    check_with_fault_set,
    count_disjoint_Uv_paths,
    propagates,
    subsets_by_cardinality,
    verify_witness,
)
from .formats import (
    FormatError,
    canonical_json,
    parse_scenario,
    parse_topology,
    render_condition_report,
    render_run_result,
    render_sweep_report,
    scenario_to_json,
    serialize_topology,
)
from .generators import (
    complete_p2p,
    cycle_local_broadcast,
    interlocked_example,
    path_local_broadcast,
    random_hypergraph,
    random_p2p,
    sample_condition_passing,
    sample_condition_violating,
    two_channel_example,
    union_hypergraph,
)
from .hypergraph import DirectedHypergraph, Hyperedge
from .necessity import NecessityReport, build_carrier, build_necessity_executions
from .paths import canonical_path, exists_disjoint_packing, max_disjoint_paths_bits
from .protocol import (
    ADVERSARY_NAMES,
    Adversary,
    ConstantAdversary,
    Engine,
    FlipForwardingAdversary,
    HonestAdversary,
    PhaseOutcome,
    RunResult,
    SilentAdversary,
    SplitPersonaAdversary,
    SweepReport,
    get_engine,
    make_adversary,
    run_scenario,
    sweep_scenarios,
)
from .reductions import (
    CrossValResult,
    check_lcr_local,
    check_lcr_p2p,
    counterexample_hypergraph,
    cross_validate_reduction,
    hyper_k_connected,
    theorem_local_classic,
    theorem_p2p_classic,
    triple_cover_condition,
    undirected_conditions,
)
from .splitting import SplitHypergraph, SplitSpec, enumerate_lambda, lambda_cardinality, split

__all__ = [
    "AB",
    "ADVERSARY_NAMES",
    "Adversary",
    "ConditionReport",
    "ConstantAdversary",
    "CrossValResult",
    "DirectedHypergraph",
    "Engine",
    "FlipForwardingAdversary",
    "FormatError",
    "HonestAdversary",
    "Hyperedge",
    "LCR",
    "NecessityReport",
    "PartitionAB",
    "PartitionLCR",
    "PhaseOutcome",
    "RunResult",
    "SilentAdversary",
    "SplitHypergraph",
    "SplitPersonaAdversary",
    "SplitSpec",
    "SweepReport",
    "Violation",
    "build_carrier",
    "build_necessity_executions",
    "canonical_json",
    "canonical_path",
    "check_ab_hyper",
    "check_lcr_hyper",
    "check_lcr_local",
    "check_lcr_p2p",
    "check_with_fault_set",
    "complete_p2p",
    "count_disjoint_Uv_paths",
    "counterexample_hypergraph",
    "cross_validate_reduction",
    "cycle_local_broadcast",
    "enumerate_lambda",
    "exists_disjoint_packing",
    "get_engine",
    "hyper_k_connected",
    "interlocked_example",
    "lambda_cardinality",
    "make_adversary",
    "max_disjoint_paths_bits",
    "parse_scenario",
    "parse_topology",
    "path_local_broadcast",
    "propagates",
    "random_hypergraph",
    "random_p2p",
    "render_condition_report",
    "render_run_result",
    "render_sweep_report",
    "run_scenario",
    "sample_condition_passing",
    "sample_condition_violating",
    "scenario_to_json",
    "serialize_topology",
    "split",
    "subsets_by_cardinality",
    "sweep_scenarios",
    "theorem_local_classic",
    "theorem_p2p_classic",
    "triple_cover_condition",
    "two_channel_example",
    "undirected_conditions",
    "union_hypergraph",
    "verify_witness",
]
