"""``recset`` command line.

Every subcommand takes an instance spec file, saturates it and prints one JSON
report on stdout. Exit codes: 0 success, 1 refuted / hypothesis violated,
2 input error, 3 output error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import descriptions, verify
from .engine import NAIVE, SEMI_NAIVE, order_of, saturate
from .errors import DescriptionTooLong, NotInM, RecsetError
from .serialize import (
    closure_json,
    description_json,
    emit_report,
    escape_json,
    format_element,
    induction_json,
    load_instance_spec,
    load_json,
    parse_element,
    parse_element_list,
    parse_op_spec,
    saturation_report,
    validation_json,
)

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recset", description="Saturate and verify recursively defined sets.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def command(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("spec", help="instance spec JSON file")
        p.add_argument("--mode", choices=["naive", "semi-naive"], default="semi-naive")
        p.add_argument("--quiet", action="store_true", help="omit witnesses from the report")
        return p

    command("saturate", "compute the stratification")

    p = command("order", "order of one element")
    p.add_argument("element")

    p = command("derive", "derivation sequence for one element")
    p.add_argument("element")
    p.add_argument("--style", choices=[descriptions.PAPER, descriptions.COMPACT], default="paper")
    p.add_argument("--pad", type=int, default=0, metavar="H")
    p.add_argument("--max-length", type=int, default=descriptions.DEFAULT_MAX_LENGTH)

    p = command("validate-desc", "check a derivation sequence file")
    p.add_argument("desc_file")
    p.add_argument("target")

    p = command("check-closed", "check a set file is recursively closed")
    p.add_argument("set_file")

    for name in ("verify-minimal", "verify-intersection"):
        p = command(name, "brute-force subset check against saturation")
        p.add_argument("--universe", required=True, help="JSON element list playing the carrier")

    p = command("extend-base", "add derivable base elements; M must not change")
    p.add_argument("elements", nargs="+")

    p = command("extend-ops", "add operations M is closed under; M must not change")
    p.add_argument("op_specs", nargs="+", metavar="OP", help="add, mul, neg, double, succ, affine:A:B, scale:C")

    p = command("prop-check", "property induction over M")
    p.add_argument("--predicate", required=True, choices=list(verify.PREDICATES))
    p.add_argument("--odd", action="store_true", help="parity: require odd instead of even")
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--divisor", type=int)
    p.add_argument("--max-length", type=int)
    return parser


def _run(args) -> tuple:
    instance = load_instance_spec(args.spec)
    mode = NAIVE if args.mode == "naive" else SEMI_NAIVE
    result = saturate(instance, mode)
    report = saturation_report(result, quiet=args.quiet)
    universe = instance.universe
    code = EXIT_OK
    cmd = args.command

    if cmd == "order":
        e = parse_element(args.element, universe)
        try:
            payload = {"element": format_element(e), "order": order_of(result, e), "status": "found"}
        except NotInM as exc:
            status = "absent" if exc.proven_absent else "unknown"
            payload = {"element": format_element(e), "order": None, "status": status}
            code = EXIT_REFUTED
        report["order"] = payload

    elif cmd == "derive":
        e = parse_element(args.element, universe)
        if e not in result:
            status = "absent" if result.reached_fixpoint else "unknown"
            report["description"] = {"target": format_element(e), "status": status}
            code = EXIT_REFUTED
        else:
            d = descriptions.extract_description(result, e, args.style, args.max_length)
            d = descriptions.pad_description(d, args.pad, instance)
            check = descriptions.validate_description(instance, d.seq, e)
            payload = {"style": args.style, "pad": args.pad}
            payload.update(description_json(d))
            payload["valid"] = check.valid
            report["description"] = payload
            code = EXIT_OK if check.valid else EXIT_REFUTED

    elif cmd == "validate-desc":
        seq = parse_element_list(load_json(args.desc_file), universe, "description file")
        target = parse_element(args.target, universe)
        check = descriptions.validate_description(instance, seq, target)
        report["validation"] = dict(validation_json(check), length=len(seq))
        code = EXIT_OK if check.valid else EXIT_REFUTED

    elif cmd == "check-closed":
        cand = parse_element_list(load_json(args.set_file), universe, "set file")
        closure = verify.is_recursively_closed(cand, instance)
        report["closure"] = closure_json(closure)
        code = EXIT_OK if closure.closed else EXIT_REFUTED

    elif cmd in ("verify-minimal", "verify-intersection"):
        elems = parse_element_list(load_json(args.universe), universe, "universe file")
        if cmd == "verify-minimal":
            found, key = verify.brute_minimal_closed(instance, elems), "minimal"
        else:
            found, key = verify.brute_intersection_closed(instance, elems), "intersection"
        equal = result.reached_fixpoint and found == result.elements
        report[key] = {
            "set": [format_element(x) for x in sorted(found)],
            "equals_saturation": equal,
        }
        code = EXIT_OK if equal else EXIT_REFUTED

    elif cmd == "extend-base":
        extra = [parse_element(x, universe) for x in args.elements]
        r = verify.check_base_extension(instance, extra)
        report["extend_base"] = {
            "derivability": {format_element(b): ok for b, ok in r.derivability.items()},
            "hypothesis_holds": r.hypothesis_holds,
            "violations": [format_element(b) for b in r.violations],
            "sets_equal": r.sets_equal,
        }
        code = EXIT_OK if r.ok else EXIT_REFUTED

    elif cmd == "extend-ops":
        extra = [parse_op_spec(s, universe) for s in args.op_specs]
        r = verify.check_op_extension(instance, extra)
        report["extend_ops"] = {
            "hypothesis_holds": r.hypothesis_holds,
            "counterexamples": [escape_json(x) for x in r.m_closed_under_extras.counterexamples],
            "sets_equal": r.sets_equal,
        }
        code = EXIT_OK if r.ok else EXIT_REFUTED

    elif cmd == "prop-check":
        pred = verify.make_predicate(
            args.predicate,
            instance,
            odd=args.odd,
            lo=args.lo,
            hi=args.hi,
            divisor=args.divisor,
            max_length=args.max_length,
        )
        r = verify.check_property_induction(instance, pred)
        report["induction"] = dict(predicate=args.predicate, **induction_json(r))
        code = EXIT_OK if r.proven else EXIT_REFUTED

    return code, report


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    try:
        code, report = _run(args)
    except DescriptionTooLong as exc:
        print(f"recset: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RecsetError, OSError) as exc:
        print(f"recset: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        emit_report(report, sys.stdout)
    except OSError as exc:
        print(f"recset: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
