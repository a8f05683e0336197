"""Checkers for the two equivalent consensus-feasibility conditions.

Both conditions quantify over every candidate fault set F (|F| <= f), every
split of every subset of F, and every partition of the split graph's nodes:

* the three-part condition: for every partition (L, C, R), either L u C has
  f+1 heads into R - F' or R u C has f+1 heads into L - F';
* the two-part condition: for every partition (A, B), either A reaches every
  node of B - F' via f+1 node-disjoint paths once B's fault copies are
  removed, or symmetrically with A and B swapped.

The production scan works on bitmasks and skips copy-swapped duplicate splits
(the predicates are invariant under relabeling a node's two copies); when a
violation exists, the full split family is rescanned in canonical order so
the reported witness is the definitional first one.  Reported witnesses are
always re-verified against the raw set-level definitions before being
returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .hypergraph import DirectedHypergraph
from .paths import count_disjoint_paths, max_disjoint_paths_bits, reach_closure_bits
from .splitting import SplitHypergraph, enumerate_lambda, lambda_cardinality, split

LCR = "lcr-hyper"
AB = "ab-hyper"


@dataclass(frozen=True)
class PartitionLCR:
    left: frozenset[int]
    center: frozenset[int]
    right: frozenset[int]


@dataclass(frozen=True)
class PartitionAB:
    side_a: frozenset[int]
    side_b: frozenset[int]


@dataclass(frozen=True)
class Violation:
    """A definitional counterexample: fault set, split member, and partition."""

    fault_set: frozenset[int]
    split: SplitHypergraph
    partition: PartitionLCR | PartitionAB


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    f: int
    holds: bool
    fault_sets_checked: int
    split_graphs_checked: int
    partitions_checked: int
    violation: Violation | None


def subsets_by_cardinality(items: Iterable[int], max_k: int) -> Iterator[frozenset[int]]:
    """All subsets of size <= max_k, ordered by cardinality then lexicographically."""
    ordered = sorted(items)
    for k in range(min(max_k, len(ordered)) + 1):
        for combo in itertools.combinations(ordered, k):
            yield frozenset(combo)


# ---------------------------------------------------------------------------
# public path/propagation operations


def count_disjoint_Uv_paths(
    g: DirectedHypergraph, sources: Iterable[int], target: int, excluded: Iterable[int] = ()
) -> int:
    """Maximum number of node-disjoint paths from the source set to ``target``
    avoiding ``excluded`` (paths share only the target, so sources are distinct)."""
    return count_disjoint_paths(g, sources, target, excluded, cap=None)


def propagates(
    g: DirectedHypergraph,
    sources: Iterable[int],
    targets: Iterable[int],
    f: int,
    excluded: Iterable[int] = (),
) -> bool:
    """True when every target has >= f+1 node-disjoint source paths (or no targets)."""
    src = frozenset(sources)
    excl = frozenset(excluded)
    for v in sorted(frozenset(targets)):
        if count_disjoint_paths(g, src, v, excl, cap=f + 1) < f + 1:
            return False
    return True


# ---------------------------------------------------------------------------
# per-split-graph violation detectors (bitmask level)


def _lcr_split_violated(out_bits: list[int], m: int, fprime: int, f: int) -> bool:
    """Existence of a violating (L, C, R) partition of this split graph.

    Both failing clauses reduce to the one-argument predicate
    bad(P) := not adjacent(V' - P, P - F'), so a violation is exactly a
    disjoint pair of non-empty bad sets (L, R; C is whatever remains)."""
    full = (1 << m) - 1
    bad = bytearray(1 << m)
    any_bad = False
    for p in range(1, full + 1):
        t = p & ~fprime
        if not t:
            continue
        count = 0
        rest = full & ~p
        ok = False
        while rest:
            low = rest & -rest
            rest ^= low
            if out_bits[low.bit_length() - 1] & t:
                count += 1
                if count > f:
                    ok = True
                    break
        if not ok:
            bad[p] = 1
            any_bad = True
    if not any_bad:
        return False
    # dp[mask] := some bad set is a subset of mask
    dp = bytearray(bad)
    for i in range(m):
        b = 1 << i
        for mask in range(1 << m):
            if mask & b and dp[mask ^ b]:
                dp[mask] = 1
    for x in range(1, full + 1):
        if bad[x] and dp[full & ~x]:
            return True
    return False


def _ab_clause_fails(out_bits: list[int], m: int, fprime: int, f: int, a_mask: int) -> bool:
    """Whether side A fails to (f+1)-propagate to (V'-A)-F' once the fault
    copies outside A are removed."""
    full = (1 << m) - 1
    removed = fprime & ~a_mask
    targets = (full & ~a_mask) & ~fprime
    if not targets:
        return False
    reach = reach_closure_bits(out_bits, a_mask, removed)
    if targets & ~reach:
        return True
    t = targets
    while t:
        low = t & -t
        t ^= low
        v = low.bit_length() - 1
        if max_disjoint_paths_bits(out_bits, m, a_mask, v, removed, 0, f + 1) < f + 1:
            return True
    return False


def _ab_split_violated(out_bits: list[int], m: int, fprime: int, f: int) -> bool:
    """Existence of a violating (A, B) partition: both clauses fail.

    The clause predicate depends only on its own side, so the scan walks the
    2^(m-1) unordered complement pairs and evaluates the second side lazily."""
    if m == 0:
        return False
    full = (1 << m) - 1
    for a in range(1, 1 << (m - 1)):
        if _ab_clause_fails(out_bits, m, fprime, f, a) and _ab_clause_fails(
            out_bits, m, fprime, f, full & ~a
        ):
            return True
    return False


# ---------------------------------------------------------------------------
# canonical-order light enumeration of the split family (copy-swap halved)


def _light_splits(g: DirectedHypergraph, fault_set: frozenset[int]):
    """Yield (out_bits, m, fprime_mask) for one representative of every
    copy-swap class of the split family of ``fault_set``.

    Bit layout: base node bits double as copy-0 bits for split nodes; one
    extra bit per split node represents copy 1.  The violation predicates are
    invariant under swapping a node's two copies, so fixing each split node's
    lowest-id hyperedge on copy 0 loses nothing.
    """
    order = g.node_order
    n0 = len(order)
    bit = g.bit_of
    fsorted = sorted(fault_set)
    fmask_base = g.mask_of(fault_set)
    edge_tail_mask = {e.id: g.mask_of(e.tails) for e in g.edges}

    for rank in range(1 << len(fsorted)):
        x = [v for i, v in enumerate(fsorted) if rank >> i & 1]
        xset = frozenset(x)
        extra_bit = {v: n0 + j for j, v in enumerate(x)}
        m = n0 + len(x)

        def lift(eid: int, tails: frozenset[int]) -> int:
            t = edge_tail_mask[eid]
            for w in tails:
                if w in xset:
                    t |= 1 << extra_bit[w]
            return t

        static = [0] * m
        for e in g.edges:
            if e.head not in xset:
                static[bit[e.head]] |= lift(e.id, e.tails)

        slots = []  # (copy0 bit, copy1 bit, lifted tail mask) per split-headed edge
        first_slot_mask = 0
        seen_heads: set[int] = set()
        for eid in sorted(e.id for v in x for e in g.head_edges(v)):
            e = g.edge_by_id[eid]
            j = len(slots)
            slots.append((bit[e.head], extra_bit[e.head], lift(eid, e.tails)))
            if e.head not in seen_heads:
                seen_heads.add(e.head)
                first_slot_mask |= 1 << j
        fprime = fmask_base | sum(1 << extra_bit[v] for v in x)

        for counter in range(1 << len(slots)):
            if counter & first_slot_mask:
                continue
            out = static.copy()
            for j, (b0, b1, tm) in enumerate(slots):
                out[b1 if counter >> j & 1 else b0] |= tm
            yield out, m, fprime


def _split_graph_bits(sh: SplitHypergraph) -> tuple[list[int], int, int]:
    gp = sh.graph
    return list(gp.out_union_masks), len(gp.node_order), gp.mask_of(sh.f_prime)


# ---------------------------------------------------------------------------
# canonical witness extraction


def _canonical_lcr_partition(sh: SplitHypergraph, f: int) -> tuple[int, PartitionLCR]:
    out, m, fprime = _split_graph_bits(sh)
    order = sh.graph.node_order
    full = (1 << m) - 1

    def adjacent(heads_mask: int, into_mask: int) -> bool:
        if not into_mask:
            return True
        count = 0
        rest = heads_mask
        while rest:
            low = rest & -rest
            rest ^= low
            if out[low.bit_length() - 1] & into_mask:
                count += 1
                if count > f:
                    return True
        return False

    for idx, digits in enumerate(itertools.product((0, 1, 2), repeat=m)):
        lm = cm = rm = 0
        for i, dg in enumerate(digits):
            b = 1 << i
            if dg == 0:
                lm |= b
            elif dg == 1:
                cm |= b
            else:
                rm |= b
        if not lm or not rm:
            continue
        if adjacent(full & ~rm, rm & ~fprime):
            continue
        if adjacent(full & ~lm, lm & ~fprime):
            continue
        part = PartitionLCR(
            frozenset(order[i] for i in range(m) if lm >> i & 1),
            frozenset(order[i] for i in range(m) if cm >> i & 1),
            frozenset(order[i] for i in range(m) if rm >> i & 1),
        )
        return idx, part
    raise AssertionError("violation vanished during canonical rescan")


def _canonical_ab_partition(sh: SplitHypergraph, f: int) -> tuple[int, PartitionAB]:
    out, m, fprime = _split_graph_bits(sh)
    order = sh.graph.node_order
    full = (1 << m) - 1
    for idx, digits in enumerate(itertools.product((0, 1), repeat=m)):
        am = 0
        for i, dg in enumerate(digits):
            if dg == 0:
                am |= 1 << i
        bm = full & ~am
        if not am or not bm:
            continue
        if not _ab_clause_fails(out, m, fprime, f, am):
            continue
        if not _ab_clause_fails(out, m, fprime, f, bm):
            continue
        part = PartitionAB(
            frozenset(order[i] for i in range(m) if am >> i & 1),
            frozenset(order[i] for i in range(m) if bm >> i & 1),
        )
        return idx, part
    raise AssertionError("violation vanished during canonical rescan")


# ---------------------------------------------------------------------------
# top-level checkers


def _partition_base(condition: str) -> int:
    return 3 if condition == LCR else 2


def _partitions_in_family(g: DirectedHypergraph, fault_set: frozenset[int], base: int) -> int:
    """Logical number of partition labelings across the full split family of
    one fault set (used for the deterministic work counters)."""
    n_nodes = len(g.nodes)
    fsorted = sorted(fault_set)
    total = 0
    for rank in range(1 << len(fsorted)):
        x = [v for i, v in enumerate(fsorted) if rank >> i & 1]
        assignments = 1 << sum(len(g.head_edges(v)) for v in x)
        total += assignments * base ** (n_nodes + len(x))
    return total


def _detector(condition: str):
    if condition == LCR:
        return _lcr_split_violated
    if condition == AB:
        return _ab_split_violated
    raise ValueError(f"unknown condition {condition!r}")


def check_with_fault_set(
    g: DirectedHypergraph,
    fault_set: Iterable[int],
    f: int,
    condition: str = AB,
    want_witness: bool = True,
) -> tuple[bool, Violation | None]:
    """Check one condition for a single fixed fault set.

    Returns ``(holds, violation)``.  With ``want_witness=False`` the canonical
    witness rescan is skipped and only the verdict is computed.
    """
    fset = frozenset(fault_set)
    detect = _detector(condition)
    found = False
    for out, m, fprime in _light_splits(g, fset):
        if detect(out, m, fprime, f):
            found = True
            break
    if not found:
        return True, None
    if not want_witness:
        return False, None
    for sh in enumerate_lambda(g, fset):
        out, m, fprime = _split_graph_bits(sh)
        if detect(out, m, fprime, f):
            if condition == LCR:
                _, part = _canonical_lcr_partition(sh, f)
            else:
                _, part = _canonical_ab_partition(sh, f)
            return False, Violation(fset, sh, part)
    raise AssertionError("violation vanished during canonical rescan")


def _check(g: DirectedHypergraph, f: int, condition: str) -> ConditionReport:
    base = _partition_base(condition)
    detect = _detector(condition)
    fault_sets = 0
    splits_total = 0
    partitions_total = 0
    for fset in subsets_by_cardinality(g.nodes, f):
        fault_sets += 1
        found = False
        for out, m, fprime in _light_splits(g, fset):
            if detect(out, m, fprime, f):
                found = True
                break
        if not found:
            splits_total += lambda_cardinality(g, fset)
            partitions_total += _partitions_in_family(g, fset, base)
            continue
        # canonical rescan for the definitional first witness
        for idx, sh in enumerate(enumerate_lambda(g, fset)):
            out, m, fprime = _split_graph_bits(sh)
            if not detect(out, m, fprime, f):
                partitions_total += base ** m
                continue
            if condition == LCR:
                pidx, part = _canonical_lcr_partition(sh, f)
            else:
                pidx, part = _canonical_ab_partition(sh, f)
            violation = Violation(fset, sh, part)
            if not verify_witness(g, f, violation):
                raise AssertionError("witness failed raw re-verification")
            return ConditionReport(
                condition, f, False,
                fault_sets, splits_total + idx + 1, partitions_total + pidx + 1,
                violation,
            )
        raise AssertionError("violation vanished during canonical rescan")
    return ConditionReport(condition, f, True, fault_sets, splits_total, partitions_total, None)


def check_lcr_hyper(g: DirectedHypergraph, f: int) -> ConditionReport:
    """Quantify the three-part condition over all fault sets, splits, partitions."""
    return _check(g, f, LCR)


def check_ab_hyper(g: DirectedHypergraph, f: int) -> ConditionReport:
    """Quantify the two-part propagation condition over all fault sets, splits, partitions."""
    return _check(g, f, AB)


# ---------------------------------------------------------------------------
# raw-definition witness verification


def verify_witness(g: DirectedHypergraph, f: int, violation: Violation) -> bool:
    """Re-check a reported witness against the raw set-level definitions."""
    fset = violation.fault_set
    if not fset <= g.nodes or len(fset) > f:
        return False
    sh = violation.split
    rebuilt = split(g, fset, sh.spec)
    if rebuilt.graph != sh.graph or rebuilt.f_prime != sh.f_prime:
        return False
    gp = sh.graph
    fp = sh.f_prime
    part = violation.partition
    if isinstance(part, PartitionLCR):
        pieces = (part.left, part.center, part.right)
        if frozenset().union(*pieces) != gp.nodes:
            return False
        if sum(len(p) for p in pieces) != len(gp.nodes):
            return False
        if not part.left or not part.right:
            return False
        clause1 = gp.adjacent(part.left | part.center, part.right - fp, f)
        clause2 = gp.adjacent(part.right | part.center, part.left - fp, f)
        return not clause1 and not clause2
    pieces = (part.side_a, part.side_b)
    if frozenset().union(*pieces) != gp.nodes:
        return False
    if sum(len(p) for p in pieces) != len(gp.nodes):
        return False
    a, b = part.side_a, part.side_b
    if not a or not b:
        return False
    clause1 = propagates(gp, a, b - fp, f, excluded=b & fp)
    clause2 = propagates(gp, b, a - fp, f, excluded=a & fp)
    return not clause1 and not clause2
