"""Element values, universes, operations and instances.

Every element is an immutable, hashable value with a canonical byte encoding.
Elements of one universe are totally ordered; that order drives every
deterministic enumeration in the engine and every sorted array in reports.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Any, Callable, Iterable, Optional, Sequence, Tuple

from .errors import (
    ArityMismatch,
    EmptyBase,
    InvalidInstance,
    MixedUniverse,
    OutOfUniverse,
    ValueOverflow,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def check_int64(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise ValueOverflow(f"{value} does not fit in a signed 64-bit integer")
    return value


def _string_key(s: str):
    return (len(s), s)


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack(">I", len(raw)) + raw


class Element:
    """Common behaviour: ordering through ``sort_key`` within one universe."""

    __slots__ = ()

    tag: int = 0

    def universe_key(self) -> tuple:
        raise NotImplementedError

    def sort_key(self) -> tuple:
        raise NotImplementedError

    def encode(self) -> bytes:
        raise NotImplementedError

    def _check_peer(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if self.universe_key() != other.universe_key():
            raise MixedUniverse(f"cannot compare {self!r} with {other!r}")
        return None

    def __lt__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __le__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        return self.sort_key() > other.sort_key()

    def __ge__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        return self.sort_key() >= other.sort_key()


@dataclass(frozen=True, eq=True, repr=False)
class IntMod(Element):
    """An integer residue; ``modulus=None`` means a plain integer."""

    value: int
    modulus: Optional[int] = None

    tag = 1

    def __post_init__(self):
        if self.modulus is not None:
            if self.modulus < 1:
                raise OutOfUniverse(f"modulus must be positive, got {self.modulus}")
            object.__setattr__(self, "value", self.value % self.modulus)
        check_int64(self.value)

    def universe_key(self):
        return ("intmod", self.modulus)

    def sort_key(self):
        return (self.value,)

    def encode(self):
        return bytes([self.tag]) + struct.pack(">qq", self.modulus or 0, self.value)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        if self.modulus is None:
            return f"IntMod({self.value})"
        return f"IntMod({self.value}, mod {self.modulus})"


@dataclass(frozen=True, eq=True, repr=False)
class VecMod(Element):
    coords: Tuple[int, ...]
    modulus: int

    tag = 2

    def __post_init__(self):
        if self.modulus < 1:
            raise OutOfUniverse(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "coords", tuple(int(c) % self.modulus for c in self.coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def universe_key(self):
        return ("vecmod", self.modulus, len(self.coords))

    def sort_key(self):
        return self.coords

    def encode(self):
        head = bytes([self.tag]) + struct.pack(">qI", self.modulus, len(self.coords))
        return head + b"".join(struct.pack(">q", c) for c in self.coords)

    def __str__(self):
        return "[" + ",".join(map(str, self.coords)) + f"]%{self.modulus}"

    def __repr__(self):
        return f"VecMod({list(self.coords)}, mod {self.modulus})"


@dataclass(frozen=True, eq=True, repr=False)
class Indexed(Element):
    """A sequence term together with its position."""

    position: int
    value: int

    tag = 3

    def __post_init__(self):
        if self.position < 1:
            raise OutOfUniverse(f"positions start at 1, got {self.position}")
        check_int64(self.position)
        check_int64(self.value)

    def universe_key(self):
        return ("indexed",)

    def sort_key(self):
        return (self.position, self.value)

    def encode(self):
        return bytes([self.tag]) + struct.pack(">qq", self.position, self.value)

    def __str__(self):
        return f"({self.position}->{self.value})"

    def __repr__(self):
        return f"Indexed({self.position} -> {self.value})"


@dataclass(frozen=True, eq=True, repr=False)
class Lang(Element):
    """A finite language truncated at ``max_len``; ``""`` is the empty word."""

    strings: Tuple[str, ...]
    max_len: int

    tag = 4

    def __post_init__(self):
        if self.max_len < 0:
            raise OutOfUniverse(f"max_len must be non-negative, got {self.max_len}")
        strings = tuple(sorted(set(self.strings), key=_string_key))
        for s in strings:
            if not isinstance(s, str):
                raise OutOfUniverse(f"language entries must be strings, got {s!r}")
            if len(s) > self.max_len:
                raise OutOfUniverse(f"string {s!r} longer than max_len {self.max_len}")
        object.__setattr__(self, "strings", strings)

    def universe_key(self):
        return ("lang", self.max_len)

    def sort_key(self):
        return (len(self.strings), tuple(_string_key(s) for s in self.strings))

    def encode(self):
        head = bytes([self.tag]) + struct.pack(">II", self.max_len, len(self.strings))
        return head + b"".join(_pack_str(s) for s in self.strings)

    def __str__(self):
        return "{" + ",".join(s if s else "eps" for s in self.strings) + "}"

    def __repr__(self):
        return f"Lang({self}, L={self.max_len})"


@dataclass(frozen=True, eq=True, repr=False)
class Sym(Element):
    name: str

    tag = 5

    def __post_init__(self):
        if not isinstance(self.name, str) or not _TOKEN.match(self.name):
            raise OutOfUniverse(f"symbol names must be identifier tokens, got {self.name!r}")
        if self.name == "eps":
            raise OutOfUniverse("'eps' is reserved for the empty word")

    def universe_key(self):
        return ("sym",)

    def sort_key(self):
        return (self.name,)

    def encode(self):
        return bytes([self.tag]) + _pack_str(self.name)

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Sym({self.name})"


KINDS = ("intmod", "vecmod", "indexed", "lang", "sym")


@dataclass(frozen=True)
class Universe:
    """Descriptor of the carrier set: its kind plus kind-specific parameters."""

    kind: str
    modulus: Optional[int] = None
    dimension: Optional[int] = None
    alphabet: Optional[Tuple[str, ...]] = None
    max_len: Optional[int] = None
    horizon: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInstance(f"unknown universe kind {self.kind!r}")
        if self.kind == "vecmod" and (self.modulus is None or self.dimension is None):
            raise InvalidInstance("vecmod universes need modulus and dimension")
        if self.kind == "lang" and (self.alphabet is None or self.max_len is None):
            raise InvalidInstance("lang universes need alphabet and max_len")
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", tuple(self.alphabet))

    @classmethod
    def infer(cls, elements: Sequence[Element]) -> "Universe":
        """Smallest descriptor the given (same-kind) elements fit in."""
        if not elements:
            raise InvalidInstance("cannot infer a universe from no elements")
        first = elements[0]
        if isinstance(first, IntMod):
            u = cls("intmod", modulus=first.modulus)
        elif isinstance(first, VecMod):
            u = cls("vecmod", modulus=first.modulus, dimension=first.dimension)
        elif isinstance(first, Indexed):
            u = cls("indexed")
        elif isinstance(first, Lang):
            letters = sorted({c for e in elements for s in e.strings for c in s})
            u = cls("lang", alphabet=tuple(letters), max_len=first.max_len)
        else:
            u = cls("sym")
        for e in elements:
            u.check(e)
        return u

    def contains(self, e: Element) -> bool:
        try:
            self.check(e)
        except OutOfUniverse:
            return False
        return True

    def check(self, e: Element) -> Element:
        ok = False
        if self.kind == "intmod":
            ok = isinstance(e, IntMod) and e.modulus == self.modulus
        elif self.kind == "vecmod":
            ok = (
                isinstance(e, VecMod)
                and e.modulus == self.modulus
                and e.dimension == self.dimension
            )
        elif self.kind == "indexed":
            ok = isinstance(e, Indexed) and (self.horizon is None or e.position <= self.horizon)
        elif self.kind == "lang":
            ok = (
                isinstance(e, Lang)
                and e.max_len == self.max_len
                and all(c in self.alphabet for s in e.strings for c in s)
            )
        elif self.kind == "sym":
            ok = isinstance(e, Sym)
        if not ok:
            raise OutOfUniverse(f"{e!r} is not in universe {self.describe()}")
        return e

    def is_finite(self) -> bool:
        return (self.kind == "intmod" and self.modulus is not None) or self.kind == "vecmod"

    def elements(self) -> list:
        """Every element, in ascending order (finite modular universes only)."""
        if self.kind == "intmod" and self.modulus is not None:
            return [IntMod(v, self.modulus) for v in range(self.modulus)]
        if self.kind == "vecmod":
            return [
                VecMod(c, self.modulus)
                for c in product(range(self.modulus), repeat=self.dimension)
            ]
        raise InvalidInstance(f"universe {self.describe()} cannot be enumerated")

    def describe(self) -> str:
        parts = [self.kind]
        for name in ("modulus", "dimension", "alphabet", "max_len", "horizon"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value}")
        return "(" + ", ".join(parts) + ")"


def canonicalize_element(raw: Any, universe: Universe) -> Element:
    """Bring a loosely formed value into canonical form for ``universe``.

    Residues are reduced and languages sorted and deduplicated; anything that
    cannot be represented (too-long strings, foreign characters, wrong vector
    dimension) raises OutOfUniverse instead of being silently dropped.
    """
    kind = universe.kind
    if isinstance(raw, Element):
        # Already-built elements are only re-checked, never reinterpreted.
        return universe.check(raw)
    try:
        if kind == "intmod":
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise OutOfUniverse(f"expected an integer, got {raw!r}")
            e = IntMod(raw, universe.modulus)
        elif kind == "vecmod":
            coords = tuple(raw)
            if len(coords) != universe.dimension:
                raise OutOfUniverse(
                    f"expected dimension {universe.dimension}, got {len(coords)}"
                )
            e = VecMod(tuple(coords), universe.modulus)
        elif kind == "indexed":
            e = Indexed(*raw)
        elif kind == "lang":
            if isinstance(raw, str):
                raise OutOfUniverse(f"expected a collection of strings, got {raw!r}")
            e = Lang(tuple(raw), universe.max_len)
        else:
            e = Sym(raw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, OutOfUniverse):
            raise
        raise OutOfUniverse(f"{raw!r} is not a {kind} value: {exc}") from exc
    return universe.check(e)


def compare_elements(x: Element, y: Element) -> int:
    """Three-way comparison: -1, 0 or 1. Raises MixedUniverse across kinds."""
    if x.universe_key() != y.universe_key():
        raise MixedUniverse(f"cannot compare {x!r} with {y!r}")
    kx, ky = x.sort_key(), y.sort_key()
    return (kx > ky) - (kx < ky)


@dataclass(frozen=True)
class Operation:
    """An n-ary partial map on elements. The evaluator returns None when undefined."""

    name: str
    arity: int
    evaluator: Callable[..., Optional[Element]] = field(compare=False, repr=False)
    id: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.arity, int) or self.arity < 1:
            raise InvalidInstance(f"operation {self.name!r} needs arity >= 1, got {self.arity}")

    def __call__(self, *args):
        return apply_operation(self, args)


def apply_operation(op: Operation, args: Sequence[Element]) -> Optional[Element]:
    if len(args) != op.arity:
        raise ArityMismatch(f"{op.name} takes {op.arity} arguments, got {len(args)}")
    return op.evaluator(*args)


@dataclass(frozen=True)
class Limits:
    max_order: int = 1000
    max_elements: int = 100_000
    max_tuple_evals: int = 10**8

    def __post_init__(self):
        for name in ("max_order", "max_elements", "max_tuple_evals"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidInstance(f"limit {name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class Instance:
    """Base elements and operations over a universe, plus resource limits.

    ``origin`` records the builder name and parameters when the instance came
    from a builder, so it can be written back out as an instance spec file.
    """

    universe: Universe
    base: Tuple[Element, ...]
    ops: Tuple[Operation, ...]
    limits: Limits = Limits()
    origin: Optional[dict] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        base = tuple(canonicalize_element(b, self.universe) for b in self.base)
        if not base:
            raise EmptyBase("an instance needs at least one base element")
        if len(set(base)) != len(base):
            raise InvalidInstance("base elements must be distinct")
        ops = tuple(self.ops)
        if not ops:
            raise InvalidInstance("an instance needs at least one operation")
        ops = tuple(op if op.id == i else replace(op, id=i) for i, op in enumerate(ops))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "ops", ops)

    def with_base(self, extra: Iterable[Element]) -> "Instance":
        """Copy with ``extra`` appended to the base (already-present ones skipped)."""
        base = list(self.base)
        for b in extra:
            b = canonicalize_element(b, self.universe)
            if b not in base:
                base.append(b)
        return Instance(self.universe, tuple(base), self.ops, self.limits)

    def with_ops(self, extra: Iterable[Operation]) -> "Instance":
        ops = tuple(self.ops) + tuple(replace(op, id=None) for op in extra)
        return Instance(self.universe, self.base, ops, self.limits)

    def with_limits(self, limits: Limits) -> "Instance":
        return replace(self, limits=limits)

    def op_named(self, name: str) -> Operation:
        for op in self.ops:
            if op.name == name:
                return op
        raise KeyError(name)
