"""Text forms of elements, instance spec files and JSON run reports.

Element text forms::

    2  or  2%5        IntMod (modulus taken from the instance when omitted)
    [2,0]%6           VecMod
    (3->2)            Indexed: position 3 holds value 2
    {a,ab} {} {eps}   Lang; "eps" is the empty word
    p                 Sym
"""

from __future__ import annotations

import io
import json
import re
from pathlib import Path
from typing import IO, Any, Dict, List, Optional, Sequence

from .descriptions import Description, DescriptionReport
from .engine import SaturationResult
from .errors import RecsetError, SpecParseError, SpecValidationError
from .instances import (
    RecurrenceSpec,
    build_custom_modular,
    build_cyclic_group,
    build_identity_closure,
    build_recurrence,
    build_regular_sets,
    build_span,
    modular_op,
    vector_op,
)
from .model import (
    Element,
    Instance,
    IntMod,
    Limits,
    Operation,
    Sym,
    Universe,
    canonicalize_element,
)
from .verify import ClosureReport, Escape, InductionReport

VERSION = 1

_INT = re.compile(r"(-?\d+)(?:%(\d+))?\Z")
_VEC = re.compile(r"\[(-?\d+(?:,-?\d+)*)?\](?:%(\d+))?\Z")
_IDX = re.compile(r"\((\d+)->(-?\d+)\)\Z")
_LANG = re.compile(r"\{([^{}]*)\}\Z")


# -- elements ---------------------------------------------------------------------


def format_element(e: Element) -> str:
    return str(e)


def parse_element(text: Any, universe: Universe) -> Element:
    """Parse an element's text form (JSON integers are accepted for IntMod)."""
    if isinstance(text, int) and not isinstance(text, bool) and universe.kind == "intmod":
        return canonicalize_element(text, universe)
    if not isinstance(text, str):
        raise SpecParseError(f"element must be a string, got {text!r}")
    s = text.strip()
    kind = universe.kind
    try:
        if kind == "intmod":
            m = _INT.match(s)
            if not m:
                raise SpecParseError(f"cannot parse integer residue {text!r}")
            if m.group(2) is not None and int(m.group(2)) != universe.modulus:
                raise SpecParseError(f"{text!r} has modulus {m.group(2)}, expected {universe.modulus}")
            return canonicalize_element(int(m.group(1)), universe)
        if kind == "vecmod":
            m = _VEC.match(s)
            if not m:
                raise SpecParseError(f"cannot parse vector {text!r}")
            if m.group(2) is not None and int(m.group(2)) != universe.modulus:
                raise SpecParseError(f"{text!r} has modulus {m.group(2)}, expected {universe.modulus}")
            coords = [int(c) for c in m.group(1).split(",")] if m.group(1) else []
            return canonicalize_element(coords, universe)
        if kind == "indexed":
            m = _IDX.match(s)
            if not m:
                raise SpecParseError(f"cannot parse indexed value {text!r}")
            return canonicalize_element((int(m.group(1)), int(m.group(2))), universe)
        if kind == "lang":
            m = _LANG.match(s)
            if not m:
                raise SpecParseError(f"cannot parse language {text!r}")
            body = m.group(1).strip()
            words = [w.strip() for w in body.split(",")] if body else []
            return canonicalize_element(["" if w == "eps" else w for w in words], universe)
        return canonicalize_element(s, universe)
    except SpecParseError:
        raise
    except RecsetError as exc:
        raise SpecParseError(f"{text!r}: {exc}") from exc


def parse_element_list(doc: Any, universe: Universe, what: str = "element list") -> List[Element]:
    if not isinstance(doc, list):
        raise SpecValidationError(what, "expected a JSON array of element strings")
    return [parse_element(x, universe) for x in doc]


def load_json(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


# -- instance spec files ------------------------------------------------------------

_TOP_KEYS = {"version", "builder", "params", "limits"}
_LIMIT_KEYS = ("max_order", "max_elements", "max_tuple_evals")
_PARAMS = {
    "identity": ({"elements"}, {"modulus"}),
    "cyclic": ({"modulus", "generator"}, {"flavor"}),
    "recurrence": ({"coeffs", "initial", "horizon"}, {"k", "constant"}),
    "span": ({"modulus", "dimension", "generators"}, set()),
    "regular": ({"alphabet", "max_len"}, set()),
    "custom-modular": ({"modulus", "base", "ops"}, set()),
}


def _int_field(params: dict, name: str, default=None, required=True) -> Optional[int]:
    v = params.get(name, default)
    if v is None and not required:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecValidationError(f"params.{name}", f"expected an integer, got {v!r}")
    return v


def _int_list(params: dict, name: str) -> List[int]:
    v = params.get(name)
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise SpecValidationError(f"params.{name}", f"expected a list of integers, got {v!r}")
    return v


def parse_limits(doc: Any) -> Limits:
    if doc is None:
        return Limits()
    if not isinstance(doc, dict):
        raise SpecValidationError("limits", "expected an object")
    unknown = set(doc) - set(_LIMIT_KEYS)
    if unknown:
        raise SpecValidationError("limits", f"unknown keys {sorted(unknown)}")
    try:
        return Limits(**doc)
    except RecsetError as exc:
        raise SpecValidationError("limits", str(exc)) from exc


def parse_instance_spec(doc: Any) -> Instance:
    """Build an Instance from a decoded spec document, rejecting unknown keys."""
    if not isinstance(doc, dict):
        raise SpecValidationError("<root>", "expected a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SpecValidationError("<root>", f"unknown keys {sorted(unknown)}")
    if doc.get("version", VERSION) != VERSION:
        raise SpecValidationError("version", f"unsupported version {doc.get('version')!r}")
    builder = doc.get("builder")
    if builder not in _PARAMS:
        raise SpecValidationError("builder", f"expected one of {sorted(_PARAMS)}, got {builder!r}")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise SpecValidationError("params", "expected an object")
    required, optional = _PARAMS[builder]
    missing = required - set(params)
    if missing:
        raise SpecValidationError("params", f"missing {sorted(missing)} for builder {builder}")
    extra = set(params) - required - optional
    if extra:
        raise SpecValidationError("params", f"unknown keys {sorted(extra)} for builder {builder}")
    limits = parse_limits(doc.get("limits"))

    try:
        if builder == "identity":
            return _identity_from(params, limits)
        if builder == "cyclic":
            flavor = params.get("flavor", "additive")
            return build_cyclic_group(
                _int_field(params, "modulus"), _int_field(params, "generator"), flavor, limits
            )
        if builder == "recurrence":
            coeffs = _int_list(params, "coeffs")
            k = _int_field(params, "k", default=len(coeffs))
            spec = RecurrenceSpec(
                k=k,
                coeffs=coeffs,
                constant=_int_field(params, "constant", default=0),
                initial=_int_list(params, "initial"),
                horizon=_int_field(params, "horizon"),
            )
            return build_recurrence(spec, limits)
        if builder == "span":
            gens = params["generators"]
            if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
                raise SpecValidationError("params.generators", "expected a list of coordinate lists")
            for g in gens:
                _int_list({"generators": g}, "generators")
            return build_span(
                _int_field(params, "modulus"), _int_field(params, "dimension"), gens, limits
            )
        if builder == "regular":
            alphabet = params["alphabet"]
            if isinstance(alphabet, str):
                alphabet = list(alphabet)
            if not isinstance(alphabet, list):
                raise SpecValidationError("params.alphabet", "expected a list of symbols")
            return build_regular_sets(alphabet, _int_field(params, "max_len"), limits)
        ops = params["ops"]
        if not isinstance(ops, list):
            raise SpecValidationError("params.ops", "expected a list")
        return build_custom_modular(
            _int_field(params, "modulus"), _int_list(params, "base"), ops, limits
        )
    except SpecValidationError:
        raise
    except RecsetError as exc:
        raise SpecValidationError(f"params ({builder})", f"{type(exc).__name__}: {exc}") from exc


def _identity_from(params: dict, limits: Limits) -> Instance:
    raw = params["elements"]
    if not isinstance(raw, list) or not raw:
        raise SpecValidationError("params.elements", "expected a non-empty list")
    if all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
        modulus = _int_field(params, "modulus", required=False)
        elements = [IntMod(x, modulus) for x in raw]
    elif all(isinstance(x, str) for x in raw):
        if "modulus" in params:
            raise SpecValidationError("params.modulus", "only valid with integer elements")
        elements = [Sym(x) for x in raw]
    else:
        raise SpecValidationError("params.elements", "use all integers or all symbol names")
    return build_identity_closure(elements, limits)


def load_instance_spec(path) -> Instance:
    return parse_instance_spec(load_json(path))


def instance_to_spec(instance: Instance) -> Dict[str, Any]:
    """Inverse of ``parse_instance_spec`` for builder-made instances."""
    if instance.origin is None:
        raise ValueError("instance was not made by a named builder and has no spec form")
    lim = instance.limits
    return {
        "version": VERSION,
        "builder": instance.origin["builder"],
        "params": json.loads(json.dumps(instance.origin["params"])),
        "limits": {k: getattr(lim, k) for k in _LIMIT_KEYS},
    }


def parse_op_spec(text: str, universe: Universe) -> Operation:
    """``add``, ``mul``, ``neg``, ``double``, ``succ``, ``affine:A:B`` or ``scale:C``."""
    name, *args = text.split(":")
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise SpecParseError(f"operation parameters must be integers in {text!r}") from None
    want = {"affine": 2, "scale": 1}.get(name, 0)
    if len(nums) != want:
        raise SpecParseError(f"{name} takes {want} parameter(s) in {text!r}")
    try:
        if universe.kind == "intmod" and universe.modulus is not None:
            if name == "affine":
                return modular_op("affine", universe.modulus, a=nums[0], b=nums[1])
            if name == "scale":
                return modular_op("scale", universe.modulus, c=nums[0])
            return modular_op(name, universe.modulus)
        if universe.kind == "vecmod":
            if name == "scale":
                return vector_op("scale", universe.modulus, universe.dimension, c=nums[0])
            return vector_op(name, universe.modulus, universe.dimension)
    except RecsetError as exc:
        raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"extra operations are not available for {universe.kind} universes")


# -- reports ---------------------------------------------------------------------------


def _strs(elements: Sequence[Element]) -> List[str]:
    return [format_element(e) for e in elements]


def saturation_report(result: SaturationResult, quiet: bool = False) -> Dict[str, Any]:
    """The common report body. Key order here is the documented output order."""
    ops = result.instance.ops
    ordered = sorted(result.order_map)
    report: Dict[str, Any] = {
        "strata": [_strs(s) for s in result.strata],
        "orders": {format_element(e): result.order_map[e] for e in ordered},
    }
    if not quiet:
        witnesses = {}
        for e in ordered:
            w = result.witness_map[e]
            witnesses[format_element(e)] = (
                "base" if w.is_base else {"op": ops[w.op_id].name, "args": _strs(w.args)}
            )
        report["witnesses"] = witnesses
    report["stats"] = [
        {
            "stratum": p,
            "tuples": s.tuples,
            "evaluator_calls": s.evaluator_calls,
            "undefined": s.undefined,
            "new": s.new,
        }
        for p, s in enumerate(result.stats, start=1)
    ]
    report["termination"] = result.termination
    report["mode"] = result.mode.replace("_", "-")
    report["version"] = VERSION
    return report


def escape_json(x: Escape) -> Dict[str, Any]:
    return {"op": x.op_name, "args": _strs(x.args), "result": format_element(x.result)}


def closure_json(report: ClosureReport) -> Dict[str, Any]:
    return {
        "closed": report.closed,
        "counterexamples": [escape_json(x) for x in report.counterexamples],
    }


def induction_json(report: InductionReport) -> Dict[str, Any]:
    return {
        "conclusion": report.conclusion,
        "base_failures": _strs(report.base_failures),
        "preservation_failures": [escape_json(x) for x in report.preservation_failures],
        "exhaustive_check": _strs(report.exhaustive_check),
    }


def description_json(d: Description) -> Dict[str, Any]:
    return {"seq": _strs(d.seq), "length": d.length, "target": format_element(d.target)}


def validation_json(r: DescriptionReport) -> Dict[str, Any]:
    return {"valid": r.valid, "index": r.index, "reason": r.reason}


def dumps_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, separators=(",", ":")) + "\n"


def emit_report(report: Dict[str, Any], stream: IO) -> None:
    """Write one newline-terminated UTF-8 JSON document to ``stream``."""
    text = dumps_report(report)
    if isinstance(stream, io.TextIOBase):
        buf = getattr(stream, "buffer", None)
        if buf is None:
            stream.write(text)
            stream.flush()
            return
        stream.flush()
        stream = buf
    stream.write(text.encode("utf-8"))
    stream.flush()
