"""Command-line front end.

Exit status: 0 ran, 1 usage error, 2 validation error, 3 numerical inconsistency.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import maps, states
from .config import DEFAULT_TOLERANCES
from .criteria import HANKEL_DEFAULT, HANKEL_RAW
from .errors import InputError, NumericalInconsistencyError, ValidationError
from .sweep import (
    FamilySpec,
    dumps,
    emit_report,
    emit_results,
    find_boundary,
    run_check,
    run_survey,
    run_sweep,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fixed(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--fix expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise InputError(f"--fix value for {name!r} is not a number") from None
    return out


def build_parser():
    p = _Parser(prog="rmoments", description="Moment-based separability criteria for bipartite states.")
    p.add_argument("--rank-tol", type=float, default=DEFAULT_TOLERANCES.rank)
    p.add_argument("--verdict-tol", type=float, default=DEFAULT_TOLERANCES.verdict)
    p.add_argument("--hankel-mode", choices=[HANKEL_DEFAULT, HANKEL_RAW], default=HANKEL_DEFAULT)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="evaluate criteria on a state file")
    c.add_argument("--state", required=True)
    c.add_argument("--criteria", default="all")
    c.add_argument("--format", choices=["json", "csv", "table"], default="json")

    s = sub.add_parser("sweep", help="evaluate criteria along a family parameter")
    s.add_argument("--family", required=True)
    s.add_argument("--param", required=True)
    s.add_argument("--from", dest="start", type=float, required=True)
    s.add_argument("--to", dest="stop", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--criteria", required=True)
    s.add_argument("--fix", action="append", metavar="NAME=VALUE", help="hold another parameter fixed")
    s.add_argument("--out", help="output path; stdout if omitted")
    s.add_argument("--format", choices=["csv", "json", "table"], help="default: from --out suffix, else csv")
    s.add_argument("--workers", type=int, default=None)

    b = sub.add_parser("boundary", help="bisect for a criterion's verdict flip")
    b.add_argument("--family", required=True)
    b.add_argument("--param", required=True)
    b.add_argument("--criterion", required=True)
    b.add_argument("--lo", type=float, required=True)
    b.add_argument("--hi", type=float, required=True)
    b.add_argument("--tol", type=float, default=1e-6)
    b.add_argument("--fix", action="append", metavar="NAME=VALUE")

    v = sub.add_parser("survey", help="detection counts over seeded random states")
    v.add_argument("--dims", required=True, help="MxN, e.g. 3x3")
    v.add_argument("--samples", type=int, required=True)
    v.add_argument("--rank", type=int, required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--criteria", default="all")
    v.add_argument("--sampler", choices=["density", "separable"], default="density")
    v.add_argument("--workers", type=int, default=None)

    d = sub.add_parser("dump", help="print a rearranged matrix (debug)")
    d.add_argument("--state", required=True)
    d.add_argument("--map", choices=["realign", "pt"], required=True)
    return p


def _run(args, out):
    tol = replace(DEFAULT_TOLERANCES, rank=args.rank_tol, verdict=args.verdict_tol)
    mode = args.hankel_mode
    if args.command == "check":
        results = run_check(args.state, args.criteria, tol, mode)
        out.write(emit_results(results, args.format))
    elif args.command == "sweep":
        spec = FamilySpec(args.family, args.param, args.start, args.stop, args.steps, _fixed(args.fix))
        report = run_sweep(spec, args.criteria, tol, mode, workers=args.workers)
        fmt = args.format
        if fmt is None:
            suffix = Path(args.out).suffix.lstrip(".") if args.out else ""
            fmt = suffix if suffix in ("csv", "json") else "csv"
        text = emit_report(report, fmt)
        if args.out:
            Path(args.out).write_text(text)
        else:
            out.write(text)
    elif args.command == "boundary":
        spec = FamilySpec(args.family, args.param, fixed=_fixed(args.fix), steps=1)
        value = find_boundary(spec, args.criterion, args.lo, args.hi, args.tol, tol, mode)
        out.write(dumps({"family": args.family, "param": args.param, "criterion": args.criterion,
                         "boundary": value, "tol": args.tol}) + "\n")
    elif args.command == "survey":
        report = run_survey(states.BipartiteDims.parse(args.dims), args.samples, args.rank, args.seed,
                            args.criteria, args.sampler, tol, mode, workers=args.workers)
        out.write(dumps(report) + "\n")
    elif args.command == "dump":
        rho = states.load_state(args.state, tol)
        rm = maps.realign(rho) if args.map == "realign" else maps.partial_transpose(rho)
        out.write(rm.to_json())


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        _run(args, out)
    except ValidationError as exc:
        print(f"rmoments: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InputError as exc:
        print(f"rmoments: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalInconsistencyError as exc:
        print(f"rmoments: numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
