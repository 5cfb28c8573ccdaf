"""Command line entry point.

Exit status: 0 success, 1 invalid input, 2 lift not closed under
``--require-closed``, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .emit import emit_outputs
from .errors import ConsistencyError, InputError
from .jobspec import parse_input
from .pipeline import report_from_lift, lift_job

EXIT_OK, EXIT_INPUT, EXIT_NOT_CLOSED, EXIT_CONSISTENCY = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pqlift", description="Lift toric moment webs and test closure.")
    sub = p.add_subparsers(dest="verb", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="job file (JSON)")
    common.add_argument("--allow-non-kaehler", action="store_true", help="accept edges with t <= 0")
    common.add_argument("--require-closed", action="store_true", help="exit 2 unless the lift closes")
    outputs = argparse.ArgumentParser(add_help=False)
    outputs.add_argument("--json", metavar="PATH", help="write the full report")
    outputs.add_argument("--svg", metavar="PATH", help="draw the planar web")
    outputs.add_argument("--lines3d", metavar="PATH", help="write the lifted polylines")
    sub.add_parser("check", parents=[common], help="validate and print the closure verdict")
    sub.add_parser("lift", parents=[common, outputs], help="run the full pipeline and write outputs")
    sub.add_parser("report", parents=[common, outputs], help="like lift, and print the report on stdout")
    return p


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = parse_input(args.input)
        flags = dataclasses.replace(
            spec.flags,
            allow_non_kaehler=spec.flags.allow_non_kaehler or args.allow_non_kaehler,
            require_closed=spec.flags.require_closed or args.require_closed,
        )
        spec = dataclasses.replace(spec, flags=flags)
        report = report_from_lift(spec.mode, lift_job(spec))
        if args.verb == "check":
            summary = {
                "closed": report.closed,
                "kaehler": report.kaehler,
                "residuals": report.residuals,
                "warnings": list(report.warnings),
            }
            print(json.dumps(summary, sort_keys=True))
        else:
            emit_outputs(report, {"json": args.json, "svg": args.svg, "lines3d": args.lines3d})
            if args.verb == "report":
                sys.stdout.write(report.to_json())
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if spec.flags.require_closed and not report.closed:
        print("lift does not close", file=sys.stderr)
        return EXIT_NOT_CLOSED
    return EXIT_OK


def main() -> None:
    sys.exit(run())
