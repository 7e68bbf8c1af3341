"""Command-line entry point: ``planted <subcommand> ...``.

Exit codes: 0 success, 2 configuration error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analytics, exact, harness
from .detectors import DEFAULT_MARGIN, build_tournament_partition, edge_count_detect, y_detect
from .errors import CapacityError, ConfigError
from .graph import format_edge_list, read_edge_list
from .samplers import ModelKind, ModelParams, SeededRng, sample_null, sample_planted


def _prob(text: str):
    """Decimal or ``a/b`` rational."""
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _int_list(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (u64)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", type=Path, default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(prog="planted", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    model = dict(choices=[k.value for k in ModelKind], default="matching")

    s = sub.add_parser("sample", parents=[common], help="draw a graph from the null or planted law")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=_prob, required=True)
    s.add_argument("--model", **model)
    which = s.add_mutually_exclusive_group()
    which.add_argument("--null", dest="planted", action="store_false")
    which.add_argument("--planted", dest="planted", action="store_true")
    s.set_defaults(planted=True)

    d = sub.add_parser("detect", parents=[common], help="run a detector on a graph file")
    d.add_argument("--in", dest="infile", type=Path, required=True)
    d.add_argument("--model", **model)
    d.add_argument("--p", type=_prob, required=True)
    d.add_argument("--detector", choices=("yvar", "edgecount"), default="yvar")
    d.add_argument("--margin", type=_prob, default=DEFAULT_MARGIN)
    d.add_argument("--threshold-sd", type=float, default=0.0)

    e = sub.add_parser("exact", parents=[common], help="exact TV / chi-square for n <= 6")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--model", **model)
    e.add_argument("--p", type=_rational, required=True)

    c = sub.add_parser("collisions", parents=[common], help="collision pmf table")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--model", **model)
    c.add_argument("--mode", choices=("formula", "brute", "mc"), default="formula")
    c.add_argument("--pairs", type=int, default=100_000)
    c.add_argument("--exact", action="store_true", help="print probabilities as a/b")

    b = sub.add_parser("bounds", parents=[common], help="chi-square diagnostics over an n sweep")
    b.add_argument("--model", **model)
    b.add_argument("--p-expr", required=True, help="c*n^-a, or a comma list of them")
    b.add_argument("--n-list", type=_int_list, required=True)

    r = sub.add_parser("risk-sweep", parents=[common], help="Monte Carlo risk over n x p cells")
    r.add_argument("--n-list", type=_int_list, required=True)
    r.add_argument("--p-expr", default="", help="c*n^-a, or a comma list of them")
    r.add_argument("--model", **model)
    r.add_argument("--detector", choices=sorted(harness.DETECTORS), default="yvar")
    r.add_argument("--trials", type=int, default=200)
    r.add_argument("--engine", choices=harness.ENGINES, default="graph")
    r.add_argument("--margin", type=float, default=float(DEFAULT_MARGIN))
    r.add_argument("--threshold-sd", type=float, default=0.0)

    m = sub.add_parser("chi2-mc", parents=[common], help="Monte Carlo chi-square via collisions")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--model", **model)
    m.add_argument("--p", type=_prob, required=True)
    m.add_argument("--pairs", type=int, default=100_000)
    return parser


def _rows_to_text(columns, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(columns, row)) for row in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _cmd_sample(args) -> str:
    params = ModelParams(args.n, args.model, args.p)
    rng = SeededRng(args.seed, 0)
    if args.planted:
        g, h = sample_planted(params, rng)
        return format_edge_list(g, h)
    return format_edge_list(sample_null(params, rng))


def _cmd_detect(args) -> str:
    g, _ = read_edge_list(args.infile)
    params = ModelParams(g.n, args.model, args.p)
    if args.detector == "yvar":
        outcome = y_detect(g, build_tournament_partition(g.n), params, args.margin)
    else:
        outcome = edge_count_detect(g, params, args.threshold_sd)
    return json.dumps(outcome.to_dict()) + "\n"


def _cmd_exact(args) -> str:
    report = exact.exact_divergences(ModelParams(args.n, args.model, args.p))
    return json.dumps(report.to_dict(), indent=2) + "\n"


def _cmd_collisions(args, fmt) -> str:
    kind = ModelKind.parse(args.model)
    if args.mode == "formula":
        if kind is not ModelKind.MATCHING:
            raise ConfigError("the inclusion-exclusion formula covers matchings; use --mode brute or mc")
        pmf = analytics.collision_pmf_matching_table(args.n)
    elif args.mode == "brute":
        pmf = exact.brute_collision_pmf(args.n, kind)
    else:
        samples = harness.sample_collisions(args.n, kind, args.pairs, args.seed)
        counts = {}
        for v in samples.tolist():
            counts[v] = counts.get(v, 0) + 1
        pmf = {k: Fraction(v, args.pairs) for k, v in sorted(counts.items())}
    rows = [(k, _frac_str(v) if args.exact else float(v)) for k, v in sorted(pmf.items())]
    return _rows_to_text(("k", "probability"), rows, fmt)


def _cmd_bounds(args, fmt) -> str:
    kind = ModelKind.parse(args.model)
    rows = []
    for n in args.n_list:
        for p in harness.evaluate_p_list(args.p_expr, n):
            params = ModelParams(n, kind, p)
            if kind is ModelKind.MATCHING:
                rows.append((n, p, kind.value, "poisson-diagnostic", analytics.chi2_diagnostic_matching(params)))
            else:
                rows.append((n, p, kind.value, "binomial-bound", analytics.chi2_bound_tree(params)))
    return _rows_to_text(("n", "p", "model", "method", "chi2"), rows, fmt)


def _cmd_risk_sweep(args, fmt) -> str:
    config = harness.ExperimentConfig(
        n_list=args.n_list, p_expr=args.p_expr, model=args.model, detector=args.detector,
        trials=args.trials, seed=args.seed, engine=args.engine, threads=args.threads,
        margin=args.margin, threshold_sd=args.threshold_sd,
    )
    records = harness.risk_sweep(config)
    return harness.records_to_json(records) if fmt == "json" else harness.records_to_csv(records)


def _cmd_chi2_mc(args, fmt) -> str:
    est = harness.estimate_chi2_mc(ModelParams(args.n, args.model, args.p), args.pairs, args.seed)
    row = {"n": args.n, "p": float(args.p), "model": args.model, "seed": args.seed, **est.to_dict()}
    if fmt == "csv":
        return _rows_to_text(tuple(row), [tuple(row.values())], "csv")
    return json.dumps(row, indent=2) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sample":
            text = _cmd_sample(args)
        elif args.command == "detect":
            text = _cmd_detect(args)
        elif args.command == "exact":
            text = _cmd_exact(args)
        elif args.command == "collisions":
            text = _cmd_collisions(args, args.format or "csv")
        elif args.command == "bounds":
            text = _cmd_bounds(args, args.format or "csv")
        elif args.command == "risk-sweep":
            text = _cmd_risk_sweep(args, args.format or "csv")
        else:
            text = _cmd_chi2_mc(args, args.format or "json")
    except CapacityError as exc:
        print(f"planted: capacity error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, OSError) as exc:
        print(f"planted: error: {exc}", file=sys.stderr)
        return 2
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
