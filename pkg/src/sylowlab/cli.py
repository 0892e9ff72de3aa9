"""Command-line front end: one subcommand per experiment.

Exit codes: 0 all gates pass, 1 a gate failed, 2 usage error, 3 a resource
cap (enumeration or set-product work) was exceeded.  JSON goes to stdout (or
--out) with sorted keys; --format csv emits per-trial rows instead.  Exact
rational values are serialized as strings like "7/8".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .experiments import (
    DEFAULT_GATES,
    ExperimentReport,
    bnp_criterion,
    coverage_prob,
    opposite_pair_prob,
    parse_gates,
    triple_product_stats,
    verify_toffoli,
    verify_uuuv,
    _jsonable,
)
from .bruhat import cell_of, decompose, in_big_cell
from .lietype import all_families, order_exact, params_for
from .matgroup import (
    DEFAULT_ENUM_CAP,
    EnumerationCapError,
    GroupSpec,
    format_matrix,
    group_spec,
    parse_matrix,
)
from .setprod import DEFAULT_WORK_CAP, WorkCapError
from .suite import suite_run

_VARIANT_NAMES = {"sl": "universal", "psl": "simple"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sylowlab",
        description="explicit SL/PSL toolkit: decompositions, set products, "
        "seeded experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def group_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", default="A", help="Lie family (A for explicit groups)")
        p.add_argument("--rank", type=int, required=True, help="rank l; matrices are (l+1)x(l+1)")
        p.add_argument("--q", type=int, required=True, help="field order, a prime power <= 64")
        p.add_argument("--variant", choices=("sl", "psl"), default="psl")

    def output_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--no-timing", action="store_true", help="omit runtime fields")

    def experiment_args(p: argparse.ArgumentParser, trials_default: int) -> None:
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--gates", help="path to a key = value gate overrides file")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: SYLOWLAB_THREADS or 1)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--per-trial", action="store_true",
                       help="include per-trial arrays in JSON output")
        p.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
        output_args(p)

    p = sub.add_parser("params", help="Lie-family parameter table rows")
    p.add_argument("--family", default=None)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    output_args(p)

    p = sub.add_parser("order", help="exact order breakdown for a configuration")
    group_args(p)
    output_args(p)

    p = sub.add_parser("bruhat", help="decompose one matrix")
    group_args(p)
    p.add_argument("--matrix", required=True,
                   help="rows separated by ';', entries by ',' (e.g. '0,6;4,3')")
    output_args(p)

    p = sub.add_parser("verify-uuuv", help="exact check that U V U V fills the group")
    group_args(p)
    p.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    output_args(p)

    p = sub.add_parser("toffoli", help="exact Weyl-translated UVU cover check")
    group_args(p)
    p.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    output_args(p)

    p = sub.add_parser("opposite-prob", help="big-cell frequency vs the exact value")
    group_args(p)
    experiment_args(p, trials_default=100_000)

    p = sub.add_parser("triple-size", help="triple Sylow-conjugate product sizes")
    group_args(p)
    experiment_args(p, trials_default=1000)

    p = sub.add_parser("coverage", help="k-factor Sylow-conjugate coverage frequency")
    group_args(p)
    p.add_argument("--k", type=int, required=True, help="number of conjugate factors")
    experiment_args(p, trials_default=200)

    p = sub.add_parser("criterion", help="product-fills-the-group size criterion")
    p.add_argument("--sizes", required=True, help="comma-separated subset sizes")
    p.add_argument("--group-order", type=int, required=True)
    p.add_argument("--rep-bound", type=int, default=2)
    p.add_argument("--t", type=int, default=None,
                   help="factor count; must match the number of sizes")
    output_args(p)

    p = sub.add_parser("suite", help="run the full acceptance battery")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--gates", help="path to a key = value gate overrides file")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    output_args(p)

    return parser


def _spec_from_args(args) -> GroupSpec:
    if args.family != "A":
        raise ValueError(
            f"only family A groups are built explicitly; got {args.family!r}"
        )
    if args.rank is None or not 1 <= args.rank <= 3:
        raise ValueError("rank must be 1, 2 or 3 for explicit matrix groups")
    return group_spec(args.q, args.rank + 1, args.variant.upper())


def _gates_from_args(args):
    if getattr(args, "gates", None):
        return parse_gates(Path(args.gates).read_text())
    return DEFAULT_GATES


def _threads_from_args(args) -> int:
    value = getattr(args, "threads", None)
    if value is None:
        raw = os.environ.get("SYLOWLAB_THREADS", "1").strip() or "1"
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"SYLOWLAB_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError("thread count must be at least 1")
    return value


def _emit(text: str, args) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_doc(doc: dict, args) -> None:
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args)


def _emit_report(report: ExperimentReport, args) -> int:
    if getattr(args, "format", "json") == "csv":
        _emit(report.csv_text(), args)
    else:
        doc = report.to_doc(
            no_timing=args.no_timing,
            include_per_trial=getattr(args, "per_trial", False),
        )
        _emit_doc(doc, args)
    return 0 if report.passed else 1


def _cmd_params(args) -> int:
    if args.family is None:
        _emit_doc({"families": all_families()}, args)
        return 0
    params = params_for(args.family, args.rank)
    _emit_doc(params.row_json(args.q), args)
    return 0


def _cmd_order(args) -> int:
    _spec_from_args(args)
    breakdown = order_exact(
        params_for("A", args.rank), args.q, _VARIANT_NAMES[args.variant]
    )
    _emit_doc(
        {
            "group_order": breakdown.group_order,
            "sylow_order": breakdown.sylow_order,
            "torus_order": breakdown.torus_order,
            "borel_order": breakdown.borel_order,
        },
        args,
    )
    return 0


def _cmd_bruhat(args) -> int:
    spec = _spec_from_args(args)
    g = parse_matrix(spec, args.matrix)
    form = decompose(g)
    doc = {
        "spec": spec.name,
        "matrix": format_matrix(g),
        "u1": format_matrix(form.u1),
        "w": list(form.w),
        "h": format_matrix(form.h),
        "u2": format_matrix(form.u2),
        "cell": list(cell_of(g)),
        "in_big_cell": in_big_cell(g),
        "recomposes": form.recompose() == g,
    }
    _emit_doc(doc, args)
    return 0


def _cmd_verify_uuuv(args) -> int:
    report = verify_uuuv(_spec_from_args(args), args.work_cap, args.enum_cap)
    _emit_doc(report.to_doc(no_timing=args.no_timing), args)
    return 0 if report.passed else 1


def _cmd_toffoli(args) -> int:
    report = verify_toffoli(_spec_from_args(args), args.work_cap, args.enum_cap)
    _emit_doc(report.to_doc(no_timing=args.no_timing), args)
    return 0 if report.passed else 1


def _cmd_opposite_prob(args) -> int:
    report = opposite_pair_prob(
        _spec_from_args(args),
        args.trials,
        args.seed,
        _gates_from_args(args),
        _threads_from_args(args),
    )
    return _emit_report(report, args)


def _cmd_triple_size(args) -> int:
    report = triple_product_stats(
        _spec_from_args(args),
        args.trials,
        args.seed,
        _gates_from_args(args),
        _threads_from_args(args),
        args.work_cap,
    )
    return _emit_report(report, args)


def _cmd_coverage(args) -> int:
    report = coverage_prob(
        _spec_from_args(args),
        args.k,
        args.trials,
        args.seed,
        _gates_from_args(args),
        _threads_from_args(args),
        args.work_cap,
    )
    return _emit_report(report, args)


def _cmd_criterion(args) -> int:
    try:
        sizes = [int(v) for v in args.sizes.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"--sizes must be comma-separated integers, got {args.sizes!r}")
    record = bnp_criterion(sizes, args.group_order, args.rep_bound, t=args.t)
    _emit_doc(_jsonable(record), args)
    return 0 if record["holds"] else 1


def _cmd_suite(args) -> int:
    result = suite_run(
        seed=args.seed,
        gates=_gates_from_args(args),
        threads=_threads_from_args(args),
        enum_cap=args.enum_cap,
        work_cap=args.work_cap,
    )
    for r in result.results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"criterion {r.criterion:2d} {verdict}  {r.name}", file=sys.stderr)
    _emit_doc(result.to_doc(no_timing=args.no_timing), args)
    return 0 if result.passed else 1


_COMMANDS = {
    "params": _cmd_params,
    "order": _cmd_order,
    "bruhat": _cmd_bruhat,
    "verify-uuuv": _cmd_verify_uuuv,
    "toffoli": _cmd_toffoli,
    "opposite-prob": _cmd_opposite_prob,
    "triple-size": _cmd_triple_size,
    "coverage": _cmd_coverage,
    "criterion": _cmd_criterion,
    "suite": _cmd_suite,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except (EnumerationCapError, WorkCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
