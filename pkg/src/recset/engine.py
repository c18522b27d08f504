"""Stratified saturation of an instance.

``saturate`` builds M_1 = base, then repeatedly applies every operation to
argument tuples drawn from the elements found so far and keeps the results
not seen before as the next stratum. Semi-naive mode only evaluates tuples
with at least one component in the newest stratum; naive mode evaluates all
tuples every round and exists as a reference for the semi-naive path.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InvalidInstance, NotInM
from .model import Element, Instance, Operation, apply_operation

NAIVE = "naive"
SEMI_NAIVE = "semi_naive"

FIXPOINT = "fixpoint"
MAX_ORDER_HIT = "max_order_hit"
MAX_ELEMENTS_HIT = "max_elements_hit"
MAX_TUPLE_EVALS_HIT = "max_tuple_evals_hit"


@dataclass(frozen=True)
class Witness:
    """How an element was first produced: ``op_id is None`` marks a base element."""

    op_id: Optional[int] = None
    args: Tuple[Element, ...] = ()

    @property
    def is_base(self) -> bool:
        return self.op_id is None


BASE = Witness()


@dataclass(frozen=True)
class StratumStats:
    tuples: int = 0
    evaluator_calls: int = 0
    undefined: int = 0
    new: int = 0


@dataclass(frozen=True)
class SaturationResult:
    instance: Instance
    strata: Tuple[Tuple[Element, ...], ...]
    order_map: Mapping[Element, int]
    witness_map: Mapping[Element, Witness]
    stats: Tuple[StratumStats, ...]
    mode: str
    termination: str
    elements: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.order_map))

    @property
    def reached_fixpoint(self) -> bool:
        return self.termination == FIXPOINT

    def sorted_elements(self) -> List[Element]:
        return sorted(self.elements)

    def __contains__(self, e) -> bool:
        return e in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def total_evaluator_calls(self) -> int:
        return sum(s.evaluator_calls for s in self.stats)


def normalize_mode(mode: str) -> str:
    m = mode.replace("-", "_")
    if m not in (NAIVE, SEMI_NAIVE):
        raise InvalidInstance(f"unknown saturation mode {mode!r}")
    return m


class _Budget(Exception):
    def __init__(self, reason):
        self.reason = reason


def _frontier_tuples(old: Sequence[int], new: Sequence[int], every: Sequence[int], arity: int):
    """Rank tuples over ``every`` with at least one component from ``new``, ascending.

    The tuples split by the position of their first ``new`` component; each
    family is a product of sorted lists and hence already sorted, so a heap
    merge yields the lexicographic order of the whole set.
    """
    families = []
    for j in range(arity):
        pools = [old] * j + [new] + [every] * (arity - j - 1)
        families.append(product(*pools))
    return heapq.merge(*families)


def saturate(instance: Instance, mode: str = SEMI_NAIVE) -> SaturationResult:
    """Compute the stratification M_1, M_2, ... of the instance.

    Operations are visited in declaration order and, for each, argument tuples
    in lexicographic element order; the first tuple producing a new element
    becomes its witness. Running into a limit discards the stratum under
    construction, so the strata returned are always an exact prefix.
    """
    if not isinstance(instance, Instance):
        raise InvalidInstance(f"expected an Instance, got {type(instance).__name__}")
    mode = normalize_mode(mode)
    limits = instance.limits
    universe = instance.universe

    first = tuple(sorted(instance.base))
    strata: List[Tuple[Element, ...]] = [first]
    order_map: Dict[Element, int] = {e: 1 for e in first}
    witness_map: Dict[Element, Witness] = {e: BASE for e in first}
    stats: List[StratumStats] = [StratumStats(new=len(first))]
    evals = 0
    termination = None

    if len(first) > limits.max_elements:
        termination = MAX_ELEMENTS_HIT

    while termination is None:
        if len(strata) >= limits.max_order:
            termination = MAX_ORDER_HIT
            break
        everything = sorted(order_map)
        rank = {e: i for i, e in enumerate(everything)}
        newest = sorted(rank[e] for e in strata[-1])
        newest_set = set(newest)
        old = [i for i in range(len(everything)) if i not in newest_set]
        all_ranks = range(len(everything))

        found: Dict[Element, Witness] = {}
        tuples = calls = undefined = 0
        try:
            for op in instance.ops:
                if mode == SEMI_NAIVE:
                    candidates = _frontier_tuples(old, newest, all_ranks, op.arity)
                else:
                    candidates = product(all_ranks, repeat=op.arity)
                for ranks in candidates:
                    tuples += 1
                    if evals >= limits.max_tuple_evals:
                        raise _Budget(MAX_TUPLE_EVALS_HIT)
                    evals += 1
                    calls += 1
                    args = tuple(everything[r] for r in ranks)
                    out = apply_operation(op, args)
                    if out is None:
                        undefined += 1
                        continue
                    if out in order_map or out in found:
                        continue
                    universe.check(out)
                    found[out] = Witness(op.id, args)
                    if len(order_map) + len(found) > limits.max_elements:
                        raise _Budget(MAX_ELEMENTS_HIT)
        except _Budget as hit:
            termination = hit.reason
            break

        if not found:
            stats.append(StratumStats(tuples, calls, undefined, 0))
            termination = FIXPOINT
            break
        stratum = tuple(sorted(found))
        level = len(strata) + 1
        for e in stratum:
            order_map[e] = level
        witness_map.update(found)
        strata.append(stratum)
        stats.append(StratumStats(tuples, calls, undefined, len(stratum)))

    return SaturationResult(
        instance=instance,
        strata=tuple(strata),
        order_map=MappingProxyType(order_map),
        witness_map=MappingProxyType(witness_map),
        stats=tuple(stats),
        mode=mode,
        termination=termination,
    )


def order_of(result: SaturationResult, e: Element) -> int:
    try:
        return result.order_map[e]
    except KeyError:
        raise NotInM(e, proven_absent=result.reached_fixpoint) from None


def witness_of(result: SaturationResult, e: Element) -> Witness:
    try:
        return result.witness_map[e]
    except KeyError:
        raise NotInM(e, proven_absent=result.reached_fixpoint) from None


def op_of(result: SaturationResult, witness: Witness) -> Operation:
    return result.instance.ops[witness.op_id]


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    violations: Tuple[Element, ...] = ()


def partition_report(result: SaturationResult) -> PartitionReport:
    """Check that the strata are pairwise disjoint and cover exactly the order map."""
    seen: Dict[Element, int] = {}
    bad = set()
    for p, stratum in enumerate(result.strata, start=1):
        for e in stratum:
            if e in seen:
                bad.add(e)
            seen[e] = p
    for e, p in result.order_map.items():
        if e not in seen or seen[e] != p:
            bad.add(e)
    for e in seen:
        if e not in result.order_map:
            bad.add(e)
    return PartitionReport(ok=not bad, violations=tuple(sorted(bad)))
