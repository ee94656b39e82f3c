"""Command line front end.

Examples:
    jbtriple run axioms --space 2x2 --trials 200 --seed 7
    jbtriple run distance --space 2x2,3x2 --out report.json
    jbtriple run linf-sum --space 2x2,2x3 --format csv --out records.csv
    jbtriple inspect --inline "diag(3,0)"
    jbtriple inspect --file element.json --ops dist,conorm --json

Exit status: 0 when every record passed, 1 on failures or I/O problems,
2 on usage errors.  JBTRIPLE_RTOL overrides the default tolerance when the
--rtol flag is absent.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .elements import SpaceDescriptor
from .errors import TripleError
from .geometry import geometry_report
from .serialization import load_element, parse_inline
from .suites import ENV_RTOL, SUITE_NAMES, ExperimentConfig, SuiteReport, run_suite
from .version import VERSION

_OPS = ("dist", "lambda", "conorm", "classify")

_BASE_FIELDS = ("space", "element_norm", "rank_per_block", "alpha_q")
_OP_FIELDS = {
    "dist": ("dist_extreme_formula", "dist_extreme_oracle", "dist_agreement"),
    "lambda": ("lambda_kind", "lambda_value", "lambda_note"),
    "conorm": ("gamma_q", "gamma_cstar_squared", "regular", "m_q"),
    "classify": ("continuity_class", "bp_quasi_invertible"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jbtriple", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"jbtriple {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a named experiment suite")
    run.add_argument("suite", choices=SUITE_NAMES)
    run.add_argument("--space", default="2x2", help="factor shapes, e.g. 2x2 or 2x2,3x2")
    run.add_argument("--trials", type=int, default=200)
    run.add_argument("--seed", type=int, default=20260801)
    run.add_argument("--rtol", type=float, default=None,
                     help=f"predicate tolerance (default 1e-9, or ${ENV_RTOL})")
    run.add_argument("--epsilons", default=None,
                     help="decreasing schedule for the richness suite, e.g. 0.1,0.01")
    run.add_argument("--out", default=None, help="write the report here instead of stdout")
    run.add_argument("--format", choices=("json", "csv"), default="json")

    inspect = sub.add_parser("inspect", help="report on a single element")
    source = inspect.add_mutually_exclusive_group(required=True)
    source.add_argument("--file", default=None, help="element JSON document")
    source.add_argument("--inline", default=None, help="inline expression, e.g. 'diag(2,1);zeros(2x3)'")
    inspect.add_argument("--ops", default=",".join(_OPS),
                         help=f"comma list from {{{','.join(_OPS)}}}")
    inspect.add_argument("--json", action="store_true", help="machine output instead of text")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    kwargs = {
        "space": SpaceDescriptor.parse(args.space),
        "trials": args.trials,
        "seed": args.seed,
    }
    if args.rtol is not None:
        kwargs["rtol"] = args.rtol
    if args.epsilons is not None:
        kwargs["epsilons"] = tuple(float(t) for t in args.epsilons.split(","))
    config = ExperimentConfig(**kwargs)
    report = run_suite(args.suite, config)
    payload = report.to_json() if args.format == "json" else report.to_csv()
    if args.out is not None:
        Path(args.out).write_text(payload)
    else:
        print(payload)
    _print_summary(report)
    return 0 if report.passed() else 1


def _print_summary(report: SuiteReport) -> None:
    status = "PASS" if report.passed() else "FAIL"
    line = (
        f"[{status}] suite={report.suite} space={report.config.space} "
        f"trials={report.config.trials} pass={report.pass_count} fail={report.fail_count} "
        f"wall={report.wall_time_s:.2f}s"
    )
    if not report.passed():
        line += f" failing_digests={','.join(report.failing_digests()[:5])}"
    print(line, file=sys.stderr)


def _cmd_inspect(args: argparse.Namespace) -> int:
    ops = [tok.strip() for tok in args.ops.split(",") if tok.strip()]
    unknown = [op for op in ops if op not in _OPS]
    if unknown:
        print(f"unknown ops: {', '.join(unknown)} (choose from {', '.join(_OPS)})", file=sys.stderr)
        return 2
    element = load_element(args.file) if args.file is not None else parse_inline(args.inline)
    report = geometry_report(element).to_dict()
    fields = list(_BASE_FIELDS)
    for op in ops:
        fields.extend(_OP_FIELDS[op])
    selected = {k: report[k] for k in fields}
    if args.json:
        print(json.dumps(selected, sort_keys=True, indent=2))
    else:
        width = max(len(k) for k in selected)
        for key in fields:
            print(f"{key:<{width}}  {selected[key]}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_inspect(args)
    except (TripleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
