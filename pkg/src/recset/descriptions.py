"""Derivation sequences: extraction from witnesses, validation and padding.

A description of ``e`` is a sequence ending at ``e`` in which every entry is
a base element or the image of some operation on earlier entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .engine import SaturationResult, order_of
from .errors import DescriptionTooLong, InvalidInput
from .model import Element, Instance, apply_operation

PAPER = "paper"
COMPACT = "compact"
DEFAULT_MAX_LENGTH = 10**6


@dataclass(frozen=True)
class Description:
    seq: Tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        if not self.seq:
            raise InvalidInput("a description has at least one entry")

    @property
    def target(self) -> Element:
        return self.seq[-1]

    @property
    def length(self) -> int:
        return len(self.seq)

    def __len__(self):
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)


def _support(result: SaturationResult, e: Element) -> List[Element]:
    """Every element the witness chain of ``e`` touches, sorted by (order, value)."""
    order_of(result, e)
    needed = {e}
    stack = [e]
    while stack:
        x = stack.pop()
        for a in result.witness_map[x].args:
            if a not in needed:
                needed.add(a)
                stack.append(a)
    return sorted(needed, key=lambda x: (result.order_map[x], x.sort_key()))


def extract_description(
    result: SaturationResult,
    e: Element,
    style: str = PAPER,
    max_length: int = DEFAULT_MAX_LENGTH,
) -> Description:
    """Read a description of ``e`` off the recorded witnesses.

    ``paper`` concatenates the descriptions of the witness arguments in
    argument order and appends ``e``, which may repeat entries many times.
    ``compact`` lists every supporting element once, lower orders first.
    """
    support = _support(result, e)
    if style == COMPACT:
        return Description(tuple(support))
    if style != PAPER:
        raise InvalidInput(f"unknown description style {style!r}")

    # Lengths first, so an oversized request fails before materialising anything.
    lengths: Dict[Element, int] = {}
    for x in support:
        w = result.witness_map[x]
        lengths[x] = 1 + sum(lengths[a] for a in w.args)
    if lengths[e] > max_length:
        raise DescriptionTooLong(
            f"paper-style description of {e} has {lengths[e]} entries (limit {max_length})"
        )
    built: Dict[Element, Tuple[Element, ...]] = {}
    for x in support:
        parts: Tuple[Element, ...] = ()
        for a in result.witness_map[x].args:
            parts += built[a]
        built[x] = parts + (x,)
    return Description(built[e])


@dataclass(frozen=True)
class DescriptionReport:
    valid: bool
    index: Optional[int] = None  # 1-based position of the first bad entry
    reason: str = ""


def validate_description(
    instance: Instance, seq: Sequence[Element], target: Element
) -> DescriptionReport:
    """Check every entry is a base element or derivable from entries before it.

    Derivable images of the prefix are tracked incrementally: when an entry
    first appears, every tuple that uses it together with earlier distinct
    entries is evaluated once, so the check is exhaustive over prefix tuples.
    """
    seq = list(seq)
    if not seq:
        return DescriptionReport(False, None, "empty description")
    base = set(instance.base)
    prefix: List[Element] = []
    prefix_set = set()
    images = set()
    for i, x in enumerate(seq, start=1):
        if x not in prefix_set:
            if x not in base and x not in images:
                why = "not a base element and nothing precedes it" if i == 1 else (
                    "not a base element and not an operation image of earlier entries"
                )
                return DescriptionReport(False, i, f"{x}: {why}")
            prefix.append(x)
            prefix_set.add(x)
            images.update(_images_with(instance, prefix))
    if seq[-1] != target:
        return DescriptionReport(False, len(seq), f"last entry {seq[-1]} is not the target {target}")
    return DescriptionReport(True)


def _images_with(instance: Instance, prefix: List[Element]):
    """Images of all tuples over ``prefix`` that contain its last element."""
    newest = prefix[-1]
    for op in instance.ops:
        for args in product(prefix, repeat=op.arity):
            if newest not in args:
                continue
            out = apply_operation(op, args)
            if out is not None:
                yield out


def pad_description(d: Description, h: int, instance: Instance) -> Description:
    """Prefix ``h`` copies of the first base element; the result stays valid."""
    if h < 0:
        raise InvalidInput(f"padding must be non-negative, got {h}")
    report = validate_description(instance, d.seq, d.target)
    if not report.valid:
        raise InvalidInput(f"cannot pad an invalid description: {report.reason}")
    return Description((instance.base[0],) * h + d.seq)
