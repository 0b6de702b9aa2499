"""Command-line front end.

Exit codes: 0 success, 1 property counterexample or cross-check
mismatch, 2 step-budget exhaustion, 3 usage error.
"""

import argparse
import json
import sys

from . import core, properties, reports
from ._version import __version__
from .affine import ResidueClass
from .errors import BudgetExceeded
from .sieve import leaf_cross_check, sieve

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_class(text):
    try:
        modulus, remainder = (int(part) for part in text.split(","))
        return ResidueClass(modulus, remainder)
    except ValueError as exc:
        raise _UsageError(f"bad class {text!r}: {exc}") from exc


def _parse_modulus(text):
    try:
        if "^" in text:
            base, exponent = text.split("^")
            value = int(base) ** int(exponent)
        else:
            value = int(text)
    except ValueError as exc:
        raise _UsageError(f"bad modulus {text!r}") from exc
    if value < 1:
        raise _UsageError(f"modulus budget must be positive, got {text!r}")
    return value


def _build_parser():
    parser = _Parser(prog="collatz-sieve")
    parser.add_argument(
        "--version",
        action="version",
        version=f"collatz-sieve {__version__} ({core.BACKEND} kernel)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    traj = sub.add_parser("traj", help="trajectory and per-start summary")
    traj.add_argument("n", type=int)
    traj.add_argument("--max-steps", type=int, default=None)
    traj.add_argument("--json", action="store_true")

    verify = sub.add_parser("verify", help="sequential-forward range verification")
    verify.add_argument("--from", dest="lo", type=int, required=True)
    verify.add_argument("--to", dest="hi", type=int, required=True)
    verify.add_argument("--chunk", type=int, default=None)
    verify.add_argument("--json", action="store_true")

    sieve_cmd = sub.add_parser("sieve", help="symbolic residue-class exploration")
    sieve_cmd.add_argument("--class", dest="residue_class", required=True)
    sieve_cmd.add_argument("--max-steps", type=int, required=True)
    sieve_cmd.add_argument("--max-modulus", required=True)
    sieve_cmd.add_argument("--export", choices=["json", "dot"])
    sieve_cmd.add_argument("--out")
    sieve_cmd.add_argument("--samples", type=int, default=100)
    sieve_cmd.add_argument("--json", action="store_true")

    props = sub.add_parser("properties", help="run the identity audits")
    props.add_argument("--limit", type=int, required=True)
    props.add_argument("--only")
    props.add_argument("--top", type=int, default=0)

    report = sub.add_parser("report", help="emit a report document")
    report_sub = report.add_subparsers(dest="report_kind", required=True)

    table3 = report_sub.add_parser("table3", help="(n, pso, tso) summary table")
    table3.add_argument("--from", dest="lo", type=int, default=1)
    table3.add_argument("--to", dest="hi", type=int, default=200)
    table3.add_argument("--out")

    hist = report_sub.add_parser("histogram", help="stopping-order tallies")
    hist.add_argument("--class", dest="residue_class", required=True)
    hist.add_argument("--x-from", type=int, required=True)
    hist.add_argument("--x-to", type=int, required=True)
    hist.add_argument("--parity", choices=["all", "even", "odd"], default="all")
    hist.add_argument("--diff", choices=sorted(reports.REFERENCE_PSO_COUNTS))
    hist.add_argument("--out")

    cov = report_sub.add_parser("coverage", help="classified-density ledger")
    cov.add_argument(
        "--root",
        action="append",
        help="stage root M,R; repeatable (default: the four classes mod 4)",
    )
    cov.add_argument("--max-steps", type=int, required=True)
    cov.add_argument("--max-modulus", required=True)
    cov.add_argument("--out")

    return parser


def _emit_document(doc, out):
    if out is None:
        sys.stdout.write(doc.to_csv())
        return
    if out.endswith(".csv"):
        text = doc.to_csv()
    elif out.endswith(".json"):
        text = doc.to_json()
    else:
        raise _UsageError(f"cannot tell CSV from JSON for {out!r}; use .csv or .json")
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _cmd_traj(args):
    terms = core.trajectory(args.n, max_steps=args.max_steps)
    summary = core.summarize(args.n, max_steps=args.max_steps)
    display_tso = len(terms) if args.n == 1 else summary.tso
    if args.json:
        doc = {
            "n": args.n,
            "trajectory": terms,
            "tso": display_tso,
            "pso": summary.pso,
            "pst": summary.pst,
            "peak": summary.peak,
        }
        print(json.dumps(doc))
    else:
        print(f"n={args.n}")
        print("trajectory: " + ", ".join(str(t) for t in terms))
        pso_text = "NA" if summary.pso is None else str(summary.pso)
        pst_text = "NA" if summary.pst is None else str(summary.pst)
        print(f"tso={display_tso} pso={pso_text} pst={pst_text} peak={summary.peak}")
    return EXIT_OK


def _cmd_verify(args):
    report = core.verify_range(args.lo, args.hi, chunk_size=args.chunk)
    if args.json:
        print(json.dumps(report.__dict__))
    else:
        print(f"verified {report.lo}..{report.hi}: {report.verified} numbers")
        print(f"max pso  {report.max_pso} at n={report.arg_pso}")
        print(f"max tso  {report.max_tso} at n={report.arg_tso}")
        print(f"max peak {report.max_peak} at n={report.arg_peak}")
        print(f"cache: {report.cache_hits} hits / {report.cache_entries} entries")
    return EXIT_OK


def _cmd_sieve(args):
    root = _parse_class(args.residue_class)
    max_modulus = _parse_modulus(args.max_modulus)
    if args.export and not args.out:
        raise _UsageError("--export needs --out PATH")
    result = sieve(root, args.max_steps, max_modulus)
    check = leaf_cross_check(result, args.samples) if args.samples > 0 else None
    if args.json:
        doc = {
            "root": str(root),
            "budgets": {"max_steps": args.max_steps, "max_modulus": max_modulus},
            "nodes": len(result.nodes),
            "terminal_leaves": [
                {"class": str(n.residue_class), "pso": n.status.pso}
                for n in result.terminal_leaves()
            ],
            "leaf_counts_by_pso": result.leaf_counts_by_pso(),
            "eventually_terminal": len(result.eventually_terminal_leaves()),
            "exhausted": len(result.exhausted_leaves()),
            "max_modulus_reached": result.max_modulus_reached,
            "cross_check": None
            if check is None
            else {
                "samples_per_leaf": check.samples_per_leaf,
                "members_checked": check.members_checked,
                "mismatches": len(check.mismatches),
            },
        }
        print(json.dumps(doc))
    else:
        print(f"root {root}, budgets: {args.max_steps} steps, modulus {max_modulus}")
        print(
            f"nodes {len(result.nodes)}, terminal {len(result.terminal_leaves())}, "
            f"eventually-terminal {len(result.eventually_terminal_leaves())}, "
            f"exhausted {len(result.exhausted_leaves())}"
        )
        for leaf in result.terminal_leaves():
            print(f"  {leaf.residue_class}  PSO {leaf.status.pso}")
        counts = result.leaf_counts_by_pso()
        print("leaf classes per pso: " + ", ".join(f"{k}:{v}" for k, v in counts.items()))
        if check is not None:
            verdict = "ok" if check.ok else f"{len(check.mismatches)} MISMATCHES"
            print(
                f"cross-check: {verdict} "
                f"({check.members_checked} members, {check.samples_per_leaf}/leaf)"
            )
    if args.export:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(reports.export_tree(result, args.export))
    if check is not None and not check.ok:
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_properties(args):
    only = args.only.split(",") if args.only else None
    try:
        results = properties.run_checks(args.limit, only)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    failed = False
    for report in results:
        if report.passed:
            print(
                f"PASS {report.property_id} limit={report.limit} "
                f"vacuous={report.vacuous_skipped}"
            )
        else:
            failed = True
            print(
                f"FAIL {report.property_id} limit={report.limit} "
                f"witness={report.witness}"
            )
    if args.top > 0:
        pairs = properties.top_tso(2, args.limit, args.top)
        print("top tso: " + ", ".join(f"{n}:{t}" for n, t in pairs))
    return EXIT_MISMATCH if failed else EXIT_OK


def _cmd_report(args):
    if args.report_kind == "table3":
        doc = reports.table_summary(args.lo, args.hi)
    elif args.report_kind == "histogram":
        residue_class = _parse_class(args.residue_class)
        doc = reports.pso_histogram(residue_class, args.x_from, args.x_to, args.parity)
        if args.diff:
            doc = reports.histogram_diff(doc, args.diff)
    else:
        roots = [_parse_class(text) for text in args.root] if args.root else [
            ResidueClass(4, c) for c in range(4)
        ]
        max_modulus = _parse_modulus(args.max_modulus)
        stages = [sieve(root, args.max_steps, max_modulus) for root in roots]
        doc = reports.coverage_report(stages)
    _emit_document(doc, args.out)
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "traj":
            return _cmd_traj(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "sieve":
            return _cmd_sieve(args)
        if args.command == "properties":
            return _cmd_properties(args)
        return _cmd_report(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
