"""Command-line interface.

Subcommands:

* ``bsv verify <file>``: parse and run a scenario file;
* ``bsv builtin s1s2 | pencil --t0 --t1 | appendix --lemma <id>``;
* ``bsv report --schema``: print the JSON report schema.

Exit code 0 iff the report contains no Fail status.  The default field for
builtins is fp:10009; override with --field q|qw|fp:<p> or the environment
variable BSV_PRIME.
"""

from __future__ import annotations

import argparse
import os
import sys

from .catalog import build_appendix, build_pencil, build_s1s2
from .coeff import DEFAULT_PRIME, field_by_name, fp_mode
from .scenario import emit_report, parse_scenario, run_checks

REPORT_SCHEMA = {
    "schema": "1",
    "type": "object",
    "properties": {
        "schema": {"const": "1"},
        "scenario": {"type": "string"},
        "field": {"type": "string", "description": "q, qw or fp:<p>"},
        "prime": {"type": ["integer", "null"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "status": {
                        "enum": ["Pass", "Fail", "Witnessed", "Asserted", "CertifiedModP"]
                    },
                    "details": {"type": "string"},
                },
            },
        },
        "obstruction": {
            "type": ["object", "null"],
            "properties": {
                "gamma_order": {"type": "integer"},
                "H_order": {"type": "integer"},
                "Hprime_order": {"type": ["integer", "null"]},
                "quotient_order": {"type": ["integer", "null"]},
                "nontrivial": {"type": ["boolean", "null"]},
                "checklist": {"type": "array"},
            },
        },
        "local_models": {"type": "object"},
        "timing": {"type": "number", "description": "seconds; excluded from determinism"},
        "toolchain": {"type": "object"},
    },
}


def _default_field(args):
    if args.field:
        return field_by_name(args.field)
    prime = int(os.environ.get("BSV_PRIME", DEFAULT_PRIME))
    return fp_mode(prime)


def _finish(report, args) -> int:
    payload = emit_report(report, "json" if args.json else "text")
    if args.out:
        with open(args.out, "wb") as f:
            f.write(payload)
    else:
        sys.stdout.write(payload.decode())
    if args.figure:
        from .figures import render_report_figure

        target = args.figure
        if target == "auto":
            target = (args.out + ".png") if args.out else (report.scenario + ".png")
        render_report_figure(report, target)
    return 1 if report.has_fail() else 0


def _add_common(p):
    p.add_argument("--field", help="coefficient field: q, qw or fp:<p>")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", help="write the report to a file")
    p.add_argument(
        "--figure",
        nargs="?",
        const="auto",
        help="render a status-panel figure (PNG); without a value, derived from --out or the scenario name",
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="bsv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a scenario file")
    pv.add_argument("file")
    _add_common(pv)

    pb = sub.add_parser("builtin", help="run a builtin scenario")
    pb.add_argument("name", choices=["s1s2", "pencil", "appendix"])
    pb.add_argument("--t0", type=int, default=1, help="family parameter (default 1)")
    pb.add_argument("--t1", type=int, default=1, help="family parameter (default 1)")
    pb.add_argument("--t2", type=int, default=1, help="second plane-pencil parameter (default 1)")
    pb.add_argument("--lemma", help="appendix id: a1, a2, a3, a4, a5, cartier, a7")
    _add_common(pb)

    pr = sub.add_parser("report", help="report utilities")
    pr.add_argument("--schema", action="store_true", help="print the JSON report schema")

    args = ap.parse_args(argv)

    if args.command == "report":
        import json

        sys.stdout.write(json.dumps(REPORT_SCHEMA, indent=2, sort_keys=True) + "\n")
        return 0

    if args.command == "verify":
        with open(args.file, encoding="utf-8") as f:
            text = f.read()
        override = field_by_name(args.field) if args.field else None
        doc = parse_scenario(text, field_override=override)
        return _finish(run_checks(doc), args)

    # builtin
    field = _default_field(args)
    if args.name == "s1s2":
        doc = build_s1s2(field)
    elif args.name == "pencil":
        doc = build_pencil(args.t0, args.t1, field)
    else:
        if not args.lemma:
            ap.error("appendix requires --lemma")
        doc = build_appendix(args.lemma, field, t0=args.t0, t1=args.t1, t2=args.t2)
    return _finish(run_checks(doc), args)


if __name__ == "__main__":
    sys.exit(main())
