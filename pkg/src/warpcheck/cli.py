"""Command-line front end: ``warpcheck run | list-models | check-params``."""

import argparse
import json
import sys
from dataclasses import replace

from .errors import ParseError, UsageError, ValidationError, WarpcheckError
from .scenario import CHECKS, MODEL_KINDS, emit_report, params_report, parse_scenario, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _tolerance(text):
    key, sep, val = text.partition("=")
    if not sep or key not in CHECKS:
        raise argparse.ArgumentTypeError(f"expected CHECK=VALUE with CHECK in {', '.join(CHECKS)}")
    try:
        return key, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {val!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="warpcheck",
        description="Verify Einstein warped products over sampled chart points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario")
    run.add_argument("--report", help="write the JSON report to this path")
    run.add_argument("--format", choices=["json", "text"], default="text",
                     help="format printed to stdout (default: text)")
    run.add_argument("--seed", type=int, help="override the sampling seed")
    run.add_argument("--samples", type=int, help="override the sample count")
    run.add_argument("--tolerance", type=_tolerance, action="append", default=[],
                     metavar="CHECK=VAL", help="override a check tolerance (repeatable)")

    sub.add_parser("list-models", help="list model kinds usable in scenarios")

    cp = sub.add_parser("check-params", help="evaluate the corollary predicates only")
    cp.add_argument("scenario")
    return parser


def _run(args):
    scn = parse_scenario(args.scenario)
    sampling = scn.sampling
    if args.seed is not None:
        sampling = replace(sampling, seed=args.seed)
    if args.samples is not None:
        sampling = replace(sampling, count=args.samples)
    tolerances = dict(scn.tolerances)
    tolerances.update(dict(args.tolerance))
    scn = replace(scn, sampling=sampling, tolerances=tolerances)
    report = run_scenario(scn)
    if args.report:
        with open(args.report, "wb") as fh:
            fh.write(emit_report(report, "json"))
    sys.stdout.write(emit_report(report, args.format).decode())
    return report.exit_status


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-models":
            for kind, text in MODEL_KINDS.items():
                print(f"{kind:<12} {text}")
            return EXIT_OK
        if args.command == "check-params":
            print(json.dumps(params_report(parse_scenario(args.scenario)), sort_keys=True, indent=2))
            return EXIT_OK
        return _run(args)
    except (ParseError, ValidationError, UsageError, OSError) as exc:
        print(f"warpcheck: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WarpcheckError, ArithmeticError) as exc:
        print(f"warpcheck: numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
