"""Ready-made instances: finite sets, cyclic groups, recurrences, spans and
truncated regular sets, plus the named modular operations the CLI exposes."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence

from .errors import (
    BadAlphabet,
    DimensionMismatch,
    EmptyBase,
    InvalidInstance,
    InvalidSpec,
    NotAUnit,
    OutOfUniverse,
)
from .model import (
    Element,
    Indexed,
    Instance,
    IntMod,
    Lang,
    Limits,
    Operation,
    Sym,
    Universe,
    VecMod,
    canonicalize_element,
    check_int64,
)


def _limits(limits: Optional[Limits]) -> Limits:
    return limits if limits is not None else Limits()


# -- modular operations ------------------------------------------------------


def modular_op(name: str, modulus: int, *, a: int = 1, b: int = 0, c: int = 0) -> Operation:
    """Named operation on IntMod residues: add, mul, neg, double, affine (a*x+b), scale (c*x)."""
    if name == "add":
        return Operation("add", 2, lambda x, y: IntMod(x.value + y.value, modulus))
    if name == "mul":
        return Operation("mul", 2, lambda x, y: IntMod(x.value * y.value, modulus))
    if name == "neg":
        return Operation("neg", 1, lambda x: IntMod(-x.value, modulus))
    if name == "double":
        return Operation("double", 1, lambda x: IntMod(2 * x.value, modulus))
    if name == "affine":
        return Operation(f"affine_{a}_{b}", 1, lambda x: IntMod(a * x.value + b, modulus))
    if name == "scale":
        return Operation(f"scale_{c}", 1, lambda x: IntMod(c * x.value, modulus))
    raise InvalidSpec(f"unknown modular operation {name!r}")


def vector_op(name: str, modulus: int, dimension: int, *, c: int = 0) -> Operation:
    """Named operation on VecMod values: add, neg, scale (c*x), succ (x + e_1)."""
    if name == "add":
        return Operation(
            "add", 2, lambda x, y: VecMod(tuple(p + q for p, q in zip(x.coords, y.coords)), modulus)
        )
    if name == "neg":
        return Operation("neg", 1, lambda x: VecMod(tuple(-p for p in x.coords), modulus))
    if name == "scale":
        return Operation(f"scale_{c}", 1, lambda x: VecMod(tuple(c * p for p in x.coords), modulus))
    if name == "succ":
        unit = (1,) + (0,) * (dimension - 1)
        return Operation(
            "succ", 1, lambda x: VecMod(tuple(p + u for p, u in zip(x.coords, unit)), modulus)
        )
    raise InvalidSpec(f"unknown vector operation {name!r}")


def identity_op() -> Operation:
    return Operation("id", 1, lambda x: x)


# -- builders ------------------------------------------------------------------


def build_identity_closure(elements: Sequence[Element], limits: Optional[Limits] = None) -> Instance:
    """A finite set as the closure of itself under f(x) = x."""
    elements = list(elements)
    if not elements:
        raise EmptyBase("identity closure needs at least one element")
    if len(set(elements)) != len(elements):
        raise InvalidInstance("identity closure elements must be distinct")
    universe = Universe.infer(elements)
    origin = {"builder": "identity", "params": {"elements": [_plain(e) for e in elements]}}
    if isinstance(elements[0], IntMod) and elements[0].modulus is not None:
        origin["params"]["modulus"] = elements[0].modulus
    return Instance(universe, tuple(elements), (identity_op(),), _limits(limits), origin)


def _plain(e: Element):
    if isinstance(e, IntMod):
        return e.value
    if isinstance(e, Sym):
        return e.name
    return str(e)


def build_cyclic_group(
    modulus: int, generator: int, flavor: str = "additive", limits: Optional[Limits] = None
) -> Instance:
    if not isinstance(modulus, int) or modulus < 2:
        raise InvalidSpec(f"modulus must be an integer >= 2, got {modulus!r}")
    if flavor == "additive":
        op = modular_op("add", modulus)
    elif flavor == "multiplicative":
        if gcd(generator, modulus) != 1:
            raise NotAUnit(f"{generator} is not invertible modulo {modulus}")
        op = modular_op("mul", modulus)
    else:
        raise InvalidSpec(f"flavor must be additive or multiplicative, got {flavor!r}")
    universe = Universe("intmod", modulus=modulus)
    origin = {
        "builder": "cyclic",
        "params": {"modulus": modulus, "generator": generator, "flavor": flavor},
    }
    return Instance(universe, (IntMod(generator, modulus),), (op,), _limits(limits), origin)


@dataclass(frozen=True)
class RecurrenceSpec:
    """a_{n+k} = sum(coeffs[j] * a_{n+j}) + constant, seeded with ``initial``."""

    k: int
    coeffs: tuple
    constant: int
    initial: tuple
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "initial", tuple(self.initial))
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidSpec(f"recurrence order k must be positive, got {self.k!r}")
        if len(self.coeffs) != self.k or len(self.initial) != self.k:
            raise InvalidSpec("coeffs and initial must both have k entries")
        if not isinstance(self.horizon, int) or self.horizon < self.k:
            raise InvalidSpec(f"horizon must be >= k, got {self.horizon!r}")
        for v in self.coeffs + self.initial + (self.constant,):
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidSpec(f"recurrence parameters must be integers, got {v!r}")


def build_recurrence(spec: RecurrenceSpec, limits: Optional[Limits] = None) -> Instance:
    k, horizon = spec.k, spec.horizon

    def step(*terms):
        n = terms[0].position
        for j, t in enumerate(terms):
            if t.position != n + j:
                return None
        if n + k > horizon:
            return None
        value = sum(c * t.value for c, t in zip(spec.coeffs, terms)) + spec.constant
        return Indexed(n + k, check_int64(value))

    universe = Universe("indexed", horizon=horizon)
    base = tuple(Indexed(i, v) for i, v in enumerate(spec.initial, start=1))
    origin = {
        "builder": "recurrence",
        "params": {
            "k": k,
            "coeffs": list(spec.coeffs),
            "constant": spec.constant,
            "initial": list(spec.initial),
            "horizon": horizon,
        },
    }
    return Instance(universe, base, (Operation("step", k, step),), _limits(limits), origin)


def build_span(
    modulus: int, dimension: int, generators: Iterable, limits: Optional[Limits] = None
) -> Instance:
    """Submodule of Z_m^d generated by ``generators``.

    Scalars are not elements, so c*x is carried by one unary operation per
    residue c, next to the binary vector sum.
    """
    if not isinstance(modulus, int) or modulus < 2:
        raise InvalidSpec(f"modulus must be an integer >= 2, got {modulus!r}")
    if not isinstance(dimension, int) or dimension < 1:
        raise InvalidSpec(f"dimension must be a positive integer, got {dimension!r}")
    universe = Universe("vecmod", modulus=modulus, dimension=dimension)
    gens: List[VecMod] = []
    for g in generators:
        coords = g.coords if isinstance(g, VecMod) else tuple(g)
        if len(coords) != dimension:
            raise DimensionMismatch(f"generator {list(coords)} is not in dimension {dimension}")
        if isinstance(g, VecMod) and g.modulus != modulus:
            raise DimensionMismatch(f"generator {g} is not over Z_{modulus}")
        v = canonicalize_element(coords, universe)
        if v not in gens:
            gens.append(v)
    if not gens:
        raise EmptyBase("span needs at least one generator")
    ops = [vector_op("add", modulus, dimension)]
    ops += [vector_op("scale", modulus, dimension, c=c) for c in range(modulus)]
    origin = {
        "builder": "span",
        "params": {
            "modulus": modulus,
            "dimension": dimension,
            "generators": [list(g.coords) for g in gens],
        },
    }
    return Instance(universe, tuple(gens), tuple(ops), _limits(limits), origin)


# -- truncated languages --------------------------------------------------------


def trunc(strings: Iterable[str], max_len: int) -> frozenset:
    return frozenset(s for s in strings if len(s) <= max_len)


def trunc_union(p: Lang, q: Lang) -> Lang:
    return Lang(p.strings + q.strings, p.max_len)


def trunc_concat(p: Lang, q: Lang) -> Lang:
    L = p.max_len
    return Lang(tuple(x + y for x in p.strings for y in q.strings if len(x) + len(y) <= L), L)


def trunc_star(p: Lang, max_len: Optional[int] = None) -> Lang:
    """Kleene star cut at ``max_len``: grow S from {eps} by S.p until stable."""
    L = p.max_len if max_len is None else max_len
    pieces = [s for s in p.strings if len(s) <= L]
    current = {""}
    frontier = {""}
    while frontier:
        grown = {x + y for x in frontier for y in pieces if len(x) + len(y) <= L}
        frontier = grown - current
        current |= frontier
    return Lang(tuple(current), L)


def build_regular_sets(
    alphabet: Sequence[str], max_len: int, limits: Optional[Limits] = None
) -> Instance:
    alphabet = list(alphabet)
    if not alphabet:
        raise BadAlphabet("alphabet must not be empty")
    for a in alphabet:
        if not isinstance(a, str) or len(a) != 1:
            raise BadAlphabet(f"alphabet symbols must be single characters, got {a!r}")
        if a in "{},%[]()-> " or a.isspace():
            raise BadAlphabet(f"{a!r} clashes with the element text syntax")
    if len(set(alphabet)) != len(alphabet):
        raise BadAlphabet("alphabet symbols must be distinct")
    if not isinstance(max_len, int) or max_len < 0:
        raise InvalidSpec(f"max_len must be a non-negative integer, got {max_len!r}")
    if max_len < 1:
        raise OutOfUniverse(f"singleton {{{alphabet[0]}}} does not fit max_len {max_len}")
    universe = Universe("lang", alphabet=tuple(alphabet), max_len=max_len)
    base = [Lang((), max_len), Lang(("",), max_len)] + [Lang((a,), max_len) for a in alphabet]
    ops = (
        Operation("union", 2, trunc_union),
        Operation("concat", 2, trunc_concat),
        Operation("star", 1, trunc_star),
    )
    origin = {"builder": "regular", "params": {"alphabet": alphabet, "max_len": max_len}}
    return Instance(universe, tuple(base), ops, _limits(limits), origin)


def build_custom_modular(
    modulus: int, base: Sequence[int], ops: Sequence, limits: Optional[Limits] = None
) -> Instance:
    """Residues mod ``modulus`` under named operations.

    ``ops`` entries are names ("add", "neg", ...) or dicts such as
    ``{"op": "affine", "a": 2, "b": 1}``.
    """
    if not isinstance(modulus, int) or modulus < 2:
        raise InvalidSpec(f"modulus must be an integer >= 2, got {modulus!r}")
    built = []
    for entry in ops:
        if isinstance(entry, str):
            built.append(modular_op(entry, modulus))
            continue
        if not isinstance(entry, dict) or "op" not in entry:
            raise InvalidSpec(f"bad operation entry {entry!r}")
        extra = set(entry) - {"op", "a", "b", "c"}
        if extra:
            raise InvalidSpec(f"unknown keys {sorted(extra)} in operation {entry!r}")
        kw = {k: entry[k] for k in ("a", "b", "c") if k in entry}
        for k, v in kw.items():
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidSpec(f"operation parameter {k} must be an integer, got {v!r}")
        built.append(modular_op(entry["op"], modulus, **kw))
    universe = Universe("intmod", modulus=modulus)
    residues = []
    for b in base:
        if isinstance(b, bool) or not isinstance(b, int):
            raise InvalidSpec(f"base residues must be integers, got {b!r}")
        if b % modulus not in residues:
            residues.append(b % modulus)
    origin = {
        "builder": "custom-modular",
        "params": {"modulus": modulus, "base": list(base), "ops": list(ops)},
    }
    return Instance(
        universe,
        tuple(IntMod(r, modulus) for r in residues),
        tuple(built),
        _limits(limits),
        origin,
    )
