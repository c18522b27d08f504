"""Closure predicates and brute-force / inductive checks on saturated sets.

The brute-force routines enumerate every subset of an explicit finite
universe, so they never touch the saturation engine; agreement between the
two is the point of running them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .engine import SaturationResult, saturate
from .errors import (
    HypothesisViolated,
    InvalidInput,
    NoClosedSuperset,
    NotAtFixpoint,
    UniverseTooLarge,
)
from .model import (
    Element,
    Indexed,
    Instance,
    IntMod,
    Lang,
    Operation,
    VecMod,
    apply_operation,
    canonicalize_element,
)

MAX_BRUTE_UNIVERSE = 20


@dataclass(frozen=True)
class Escape:
    """One closure failure: ``op(args) = result`` leaves the tested set.

    Missing base elements are reported with ``op_id == "base"`` and no args.
    """

    op_id: Union[int, str]
    op_name: str
    args: Tuple[Element, ...]
    result: Element


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    counterexamples: Tuple[Escape, ...] = ()


def _escapes(candidate: frozenset, ops: Iterable[Operation]) -> List[Escape]:
    ordered = sorted(candidate)
    out = []
    for op in ops:
        for args in product(ordered, repeat=op.arity):
            r = apply_operation(op, args)
            if r is not None and r not in candidate:
                out.append(Escape(op.id, op.name, args, r))
    return out


def is_closed_under(candidate: Iterable[Element], ops: Iterable[Operation]) -> ClosureReport:
    """Operation half of the closure check (no base-inclusion condition)."""
    escapes = _escapes(frozenset(candidate), ops)
    return ClosureReport(not escapes, tuple(escapes))


def is_recursively_closed(candidate: Iterable[Element], instance: Instance) -> ClosureReport:
    """Does ``candidate`` contain the base and stay closed under every operation?"""
    cand = frozenset(canonicalize_element(e, instance.universe) for e in candidate)
    escapes = [Escape("base", "base", (), b) for b in instance.base if b not in cand]
    escapes += _escapes(cand, instance.ops)
    return ClosureReport(not escapes, tuple(escapes))


# -- brute force over subsets ------------------------------------------------------


def _closed_masks(instance: Instance, universe: Sequence[Element]) -> Tuple[List[Element], np.ndarray]:
    """All subset bitmasks of ``universe`` that are recursively closed."""
    elems = sorted({canonicalize_element(e, instance.universe) for e in universe})
    n = len(elems)
    if n > MAX_BRUTE_UNIVERSE:
        raise UniverseTooLarge(f"{n} elements; subset enumeration is capped at {MAX_BRUTE_UNIVERSE}")
    index = {e: i for i, e in enumerate(elems)}
    missing = [b for b in instance.base if b not in index]
    if missing:
        raise NoClosedSuperset(f"base elements {missing} are outside the universe list")

    # Each application becomes a rule "args subset of S implies result in S".
    rules = set()
    for op in instance.ops:
        for args in product(range(n), repeat=op.arity):
            r = apply_operation(op, tuple(elems[i] for i in args))
            if r is None:
                continue
            if r not in index:
                raise NoClosedSuperset(
                    f"universe list is not closed: {op.name}{tuple(elems[i] for i in args)} = {r}"
                )
            need = 0
            for i in args:
                need |= 1 << i
            bit = 1 << index[r]
            if not need & bit:
                rules.add((need, bit))

    base_mask = 0
    for b in instance.base:
        base_mask |= 1 << index[b]
    masks = np.arange(1 << n, dtype=np.int64)
    masks = masks[(masks & base_mask) == base_mask]
    ok = np.ones(len(masks), dtype=bool)
    for need, bit in sorted(rules):
        ok &= ~(((masks & need) == need) & ((masks & bit) == 0))
    closed = masks[ok]
    if len(closed) == 0:
        raise NoClosedSuperset("no closed superset of the base exists")
    return elems, closed


def _decode(mask: int, elems: Sequence[Element]) -> frozenset:
    return frozenset(e for i, e in enumerate(elems) if mask >> i & 1)


def brute_minimal_closed(instance: Instance, universe: Sequence[Element]) -> frozenset:
    """The inclusion-minimal recursively closed subset of ``universe``.

    Also asserts that minimum is unique, i.e. contained in every closed set.
    """
    elems, closed = _closed_masks(instance, universe)
    smallest = int(closed[int(np.argmin(np.bitwise_count(closed)))])
    # A smallest closed set contained in all others is the unique minimal one.
    if not np.all((closed & smallest) == smallest):
        raise AssertionError("closed supersets of the base have no unique minimum")
    return _decode(smallest, elems)


def brute_intersection_closed(instance: Instance, universe: Sequence[Element]) -> frozenset:
    """Intersection of every recursively closed subset of ``universe``."""
    elems, closed = _closed_masks(instance, universe)
    acc = int(np.bitwise_and.reduce(closed))
    return _decode(acc, elems)


# -- extension theorems ----------------------------------------------------------


def _fixpoint(instance: Instance, mode: str = "semi_naive") -> SaturationResult:
    result = saturate(instance, mode)
    if not result.reached_fixpoint:
        raise NotAtFixpoint(f"saturation stopped early ({result.termination})")
    return result


@dataclass(frozen=True)
class BaseExtensionReport:
    derivability: Dict[Element, bool]
    sets_equal: Optional[bool]  # None when the hypothesis fails
    violations: Tuple[Element, ...] = ()

    @property
    def hypothesis_holds(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return self.hypothesis_holds and bool(self.sets_equal)

    def raise_for_violation(self):
        if self.violations:
            raise HypothesisViolated(
                f"extra base elements not in M: {list(map(str, self.violations))}",
                self.violations,
            )


def check_base_extension(instance: Instance, extra_base: Iterable[Element]) -> BaseExtensionReport:
    """Adding already-derivable elements to the base must not change M."""
    m = _fixpoint(instance)
    extra = [canonicalize_element(b, instance.universe) for b in extra_base]
    derivability = {b: b in m.elements for b in extra}
    violations = tuple(b for b in extra if not derivability[b])
    if violations:
        return BaseExtensionReport(derivability, None, violations)
    extended = saturate(instance.with_base(extra))
    equal = extended.reached_fixpoint and extended.elements == m.elements
    return BaseExtensionReport(derivability, equal)


@dataclass(frozen=True)
class OpExtensionReport:
    m_closed_under_extras: ClosureReport
    sets_equal: Optional[bool]

    @property
    def hypothesis_holds(self) -> bool:
        return self.m_closed_under_extras.closed

    @property
    def ok(self) -> bool:
        return self.hypothesis_holds and bool(self.sets_equal)

    def raise_for_violation(self):
        if not self.hypothesis_holds:
            raise HypothesisViolated(
                "M is not closed under the extra operations",
                self.m_closed_under_extras.counterexamples,
            )


def check_op_extension(instance: Instance, extra_ops: Sequence[Operation]) -> OpExtensionReport:
    """Adding operations under which M is already closed must not change M."""
    m = _fixpoint(instance)
    extended_instance = instance.with_ops(extra_ops)
    extras = extended_instance.ops[len(instance.ops):]
    closure = is_closed_under(m.elements, extras)
    if not closure.closed:
        return OpExtensionReport(closure, None)
    extended = saturate(extended_instance)
    equal = extended.reached_fixpoint and extended.elements == m.elements
    return OpExtensionReport(closure, equal)


@dataclass(frozen=True)
class ExtensionReport:
    base: BaseExtensionReport
    ops: Optional[OpExtensionReport]

    @property
    def ok(self) -> bool:
        return self.base.ok and self.ops is not None and self.ops.ok


def check_extension(
    instance: Instance, extra_base: Iterable[Element], extra_ops: Sequence[Operation]
) -> ExtensionReport:
    """Base extension first, then operation extension on the widened instance."""
    base_report = check_base_extension(instance, extra_base)
    if not base_report.hypothesis_holds:
        return ExtensionReport(base_report, None)
    widened = instance.with_base(base_report.derivability)
    return ExtensionReport(base_report, check_op_extension(widened, extra_ops))


# -- property induction ----------------------------------------------------------------


@dataclass(frozen=True)
class InductionReport:
    base_failures: Tuple[Element, ...]
    preservation_failures: Tuple[Escape, ...]
    exhaustive_check: Tuple[Element, ...]

    @property
    def conclusion(self) -> str:
        if self.base_failures or self.preservation_failures:
            return "refuted"
        return "proven"

    @property
    def proven(self) -> bool:
        return self.conclusion == "proven"


Predicate = Callable[[Element], bool]


def check_property_induction(instance: Instance, predicate: Predicate) -> InductionReport:
    """Check P on the base and its preservation by every operation.

    Preservation is checked over argument tuples from M only; that is all the
    stratum-by-stratum argument needs, and it is decidable at desk scale. P is
    then evaluated on all of M directly as an independent cross-check.
    """
    m = _fixpoint(instance)
    base_failures = tuple(b for b in instance.base if not predicate(b))
    holding = sorted(e for e in m.elements if predicate(e))
    failures = []
    for op in instance.ops:
        for args in product(holding, repeat=op.arity):
            r = apply_operation(op, args)
            if r is not None and not predicate(r):
                failures.append(Escape(op.id, op.name, args, r))
    exhaustive = tuple(e for e in m.sorted_elements() if not predicate(e))
    return InductionReport(base_failures, tuple(failures), exhaustive)


# -- builtin predicates ------------------------------------------------------------------


def _numbers(e: Element) -> Tuple[int, ...]:
    if isinstance(e, (IntMod, Indexed)):
        return (e.value,)
    if isinstance(e, VecMod):
        return e.coords
    raise InvalidInput(f"numeric predicates do not apply to {e!r}")


def parity_predicate(odd: bool = False) -> Predicate:
    want = 1 if odd else 0
    return lambda e: all(v % 2 == want for v in _numbers(e))


def range_predicate(lo: Optional[int] = None, hi: Optional[int] = None) -> Predicate:
    def pred(e):
        return all((lo is None or v >= lo) and (hi is None or v <= hi) for v in _numbers(e))

    return pred


def divisibility_predicate(divisor: int) -> Predicate:
    if divisor == 0:
        raise InvalidInput("divisor must be non-zero")
    return lambda e: all(v % divisor == 0 for v in _numbers(e))


def length_bound_predicate(max_length: int) -> Predicate:
    def pred(e):
        if not isinstance(e, Lang):
            raise InvalidInput(f"length-bound applies to languages, got {e!r}")
        return all(len(s) <= max_length for s in e.strings)

    return pred


def linear_combinations(generators: Sequence[VecMod]) -> frozenset:
    """{sum a_i g_i : a_i in Z_m}, by enumerating every coefficient vector."""
    gens = list(generators)
    m = gens[0].modulus
    d = gens[0].dimension
    out = set()
    for coeffs in product(range(m), repeat=len(gens)):
        out.add(VecMod(tuple(sum(a * g.coords[j] for a, g in zip(coeffs, gens)) for j in range(d)), m))
    return frozenset(out)


def representable_predicate(instance: Instance) -> Predicate:
    """x is a linear combination of the instance's generators (span instances)."""
    if instance.universe.kind != "vecmod":
        raise InvalidInput("representability is defined for span instances only")
    combos = linear_combinations(instance.base)
    return lambda e: e in combos


PREDICATES = ("parity", "value-range", "divisibility", "length-bound", "representable")


def make_predicate(name: str, instance: Instance, **params) -> Predicate:
    if name == "parity":
        return parity_predicate(bool(params.get("odd", False)))
    if name == "value-range":
        return range_predicate(params.get("lo"), params.get("hi"))
    if name == "divisibility":
        if params.get("divisor") is None:
            raise InvalidInput("divisibility needs a divisor")
        return divisibility_predicate(params["divisor"])
    if name == "length-bound":
        if params.get("max_length") is None:
            raise InvalidInput("length-bound needs max_length")
        return length_bound_predicate(params["max_length"])
    if name == "representable":
        return representable_predicate(instance)
    raise InvalidInput(f"unknown predicate {name!r}; choose from {', '.join(PREDICATES)}")
