# Command-line front end.
#   apq --p 2 --q 3 verify --sequence "S(4),F*,G*,P(0)"
#   apq --p 3 --q 4 check-theorem --format json
# Exit codes: 0 ok, 1 well-formed negative answer, 2 usage error,
# 3 realization could not be certified.

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import strata
from .catalog import (
    Catalog,
    check_descriptor,
    descriptor_class,
    normalize,
    parse_descriptor,
    parse_sequence,
)
from .errors import CertificationError, DescriptorSyntaxError, UsageError
from .exactnum import format_rational, parse_rational
from .homcalc import bilinear_form_data, defect, euler_matrix, end_dim, euler_form, ext1_dim, hom_dim, is_isomorphic
from .quiverrep import build_quiver, representation_to_json, sincere, supp

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shared(parser: argparse.ArgumentParser, top: bool) -> None:
    # Shared flags are accepted before or after the subcommand; the
    # subcommand copies use SUPPRESS so they only override when given.
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--tau-max", type=int, default=d(None), help="tau window T (default 2*lcm(p,q)+p+q)")
    parser.add_argument("--format", choices=("json", "tsv", "text"), default=d("text"))
    parser.add_argument("--seed", type=int, default=d(0), help="realization seed (APQ_SEED overrides)")
    parser.add_argument("--lambda", dest="lam", default=d("1"), help="parameter of the homogeneous pool module")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes for searches")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="apq", description="Modules over the path algebra of A~(p,q) and their stratifying systems.")
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--q", type=int, required=True)
    _shared(ap, top=True)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("inspect", help="dimension data of one module")
    sp.add_argument("--desc", required=True)
    sp.add_argument("--maps", action="store_true", help="include the realized matrices")
    _shared(sp, top=False)

    for name in ("hom", "ext"):
        sp = sub.add_parser(name, help=f"dim {'Hom' if name == 'hom' else 'Ext^1'}(left, right)")
        sp.add_argument("--left", required=True)
        sp.add_argument("--right", required=True)
        _shared(sp, top=False)

    sp = sub.add_parser("verify", help="check a sequence for the stratifying conditions")
    sp.add_argument("--sequence", required=True, help="comma-separated descriptors, F* and G* allowed")
    sp.add_argument("--dot", action="store_true", help="emit the nonzero Hom graph as DOT")
    _shared(sp, top=False)

    sp = sub.add_parser("enumerate", help="brute-force the modules Y with (F, G, Y) stratifying")
    sp.add_argument("--side", required=True, choices=strata.SIDES)
    sp.add_argument("--compare", action="store_true")
    _shared(sp, top=False)

    sp = sub.add_parser("complete", help="brute-force the completions M of (F, G, Y)")
    sp.add_argument("--y", required=True)
    sp.add_argument("--compare", action="store_true")
    _shared(sp, top=False)

    sp = sub.add_parser("check-theorem", help="compare brute force with the closed-form lists")
    _shared(sp, top=False)

    sp = sub.add_parser("forms", help="Cartan and Coxeter matrices, null root")
    _shared(sp, top=False)
    return ap


# -- output ---------------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ",".join(_cell(v) for v in value)
    return str(value)


def _emit(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    sep = "\t" if fmt == "tsv" else ": "
    for key, value in payload.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            cols = list(value[0])
            out.write(f"{key}\n")
            if fmt == "tsv":
                out.write("\t".join(cols) + "\n")
            for row in value:
                line = "\t".join(_cell(row.get(c)) for c in cols)
                out.write(line + "\n" if fmt == "tsv" else f"  {line}\n")
        elif isinstance(value, list) and value and isinstance(value[0], list):
            out.write(f"{key}\n")
            for row in value:
                out.write(("\t" if fmt == "tsv" else "  ") + "\t".join(_cell(c) for c in row) + "\n")
        elif isinstance(value, dict):
            for k, v in value.items():
                out.write(f"{key}.{k}{sep}{_cell(v)}\n")
        else:
            out.write(f"{key}{sep}{_cell(value)}\n")


def _dot(descs, report: strata.VerificationReport) -> str:
    lines = ["digraph sequence {", "  rankdir=LR;"]
    for k, d in enumerate(descs, start=1):
        lines.append(f'  n{k} [label="{k}: {d}"];')
    bad = {(v.j, v.i) for v in report.violations if v.kind == "hom"}
    for a, b, dim in report.hom_edges:
        style = ', color="red"' if (a, b) in bad else ""
        lines.append(f'  n{a} -> n{b} [label="{dim}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- commands -------------------------------------------------------------


def _desc(text: str, quiver):
    return check_descriptor(parse_descriptor(text), quiver)


def _cmd_inspect(args, quiver, out) -> int:
    desc = _desc(args.desc, quiver)
    rep, cert = Catalog(quiver, args.seed).realize_certified(desc)
    e = end_dim(rep)
    payload = {
        "descriptor": str(desc),
        "normal_form": str(normalize(desc, quiver)),
        "class": descriptor_class(desc, quiver),
        "dims": list(rep.dims),
        "supp": sorted(supp(rep)),
        "sincere": sincere(rep),
        "defect": defect(quiver, rep.dims),
        "end": e,
        "self_ext": e - euler_form(quiver, rep.dims, rep.dims),
        "retries": cert.retries,
    }
    if args.maps:
        payload["representation"] = representation_to_json(rep)
    _emit(payload, args.format, out)
    return EXIT_OK


def _cmd_pair(args, quiver, out) -> int:
    catalog = Catalog(quiver, args.seed)
    left = catalog.realize(_desc(args.left, quiver))
    right = catalog.realize(_desc(args.right, quiver))
    value = hom_dim(left, right) if args.command == "hom" else ext1_dim(left, right)
    if args.format == "json":
        _emit({args.command: value}, "json", out)
    else:
        out.write(f"{value}\n")
    return EXIT_OK


def _cmd_verify(args, quiver, out) -> int:
    descs = [check_descriptor(d, quiver) for d in parse_sequence(args.sequence, quiver)]
    report = strata.verify_sequence(descs, quiver, args.seed)
    report.T = args.tau_max
    if args.dot:
        out.write(_dot(descs, report))
    else:
        _emit(report.to_json(), args.format, out)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def _cmd_enumerate(args, quiver, out) -> int:
    found = strata.enumerate_Y(args.side, args.tau_max, quiver, args.seed, args.jobs)
    payload = {"side": args.side, "T": args.tau_max, "found": _names(found)}
    code = EXIT_OK
    if args.compare:
        expected = strata.predicted_Y(args.side, args.tau_max, quiver)
        payload["expected"] = _names(expected)
        payload["missing"] = _names(expected - found)
        payload["extra"] = _names(found - expected)
        code = EXIT_OK if found == expected else EXIT_NEGATIVE
    _emit(payload, args.format, out)
    return code


def _cmd_complete(args, quiver, out) -> int:
    y = _desc(args.y, quiver)
    found = strata.find_completion(y, args.tau_max, quiver, args.seed, args.jobs, lam=args.lam)
    payload = {"Y": str(y), "T": args.tau_max, "found": _names(found)}
    code = EXIT_OK
    if args.compare:
        predicted = strata.predicted_completion(y, quiver)
        catalog = Catalog(quiver, args.seed)
        target = catalog.realize(predicted)
        match = len(found) == 1 and is_isomorphic(catalog.realize(next(iter(found))), target, args.seed)
        payload["predicted"] = str(predicted)
        payload["match"] = match
        code = EXIT_OK if match else EXIT_NEGATIVE
    _emit(payload, args.format, out)
    return code


def _cmd_check(args, quiver, out) -> int:
    report = strata.check_theorem(quiver, args.tau_max, args.seed, args.jobs)
    _emit(report.to_json(), args.format, out)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def _cmd_forms(args, quiver, out) -> int:
    data = bilinear_form_data(quiver)

    def rows(m):
        return [[format_rational(x) for x in row] for row in m.tolist()]

    payload = {
        "p": quiver.p,
        "q": quiver.q,
        "euler": rows(euler_matrix(quiver)),
        "cartan": rows(data.cartan),
        "coxeter": rows(data.coxeter),
        "null_root": list(data.null_root),
    }
    _emit(payload, args.format, out)
    return EXIT_OK


def _names(descs) -> list[str]:
    return [str(d) for d in sorted(descs, key=strata._order)]


COMMANDS = {
    "inspect": _cmd_inspect,
    "hom": _cmd_pair,
    "ext": _cmd_pair,
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
    "complete": _cmd_complete,
    "check-theorem": _cmd_check,
    "forms": _cmd_forms,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if "APQ_SEED" in os.environ:
            try:
                args.seed = int(os.environ["APQ_SEED"])
            except ValueError:
                raise UsageError(f"APQ_SEED must be an integer, got {os.environ['APQ_SEED']!r}") from None
        try:
            args.lam = parse_rational(str(args.lam))
        except ValueError as exc:
            raise UsageError(f"--lambda: {exc}") from None
        if args.lam == 0:
            raise UsageError("--lambda must be nonzero")
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        quiver = build_quiver(args.p, args.q)
        if args.tau_max is None:
            args.tau_max = strata.default_window(args.p, args.q)
        if args.tau_max < 0:
            raise UsageError("--tau-max must be non-negative")
        return COMMANDS[args.command](args, quiver, out)
    except DescriptorSyntaxError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except CertificationError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
