"""Command line front end.

Subcommands::

    lexstab stability -i fam.tsv -o s.csv
    lexstab distances -i fam.tsv -o d.csv [--rate R]
    lexstab rank      -i s.csv -o outdir
    lexstab compare   --a ie.csv --b an.csv [-o overlap.csv]
    lexstab tree      -i d.csv [-o tree.nwk]
    lexstab simulate  --n 50 --m 200 --seed 7 -o outdir

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
Diagnostics go to stderr as ``error:<code>: message``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import LexstabError
from .family import (
    LanguageDistanceMatrix,
    StabilityReport,
    distance_matrix,
    separation_times,
    stability_all,
)
from .lexicon import NormalizationConfig, canonical_label, read_dataset, write_dataset
from .phylogeny import to_newick, upgma
from .ranking import (
    DEFAULT_BIN_WIDTH,
    linear_fit,
    overlap_ratio,
    pearson_correlation,
    rank_curve,
    stability_histogram,
    unmatched_labels,
)
from .simulate import SimConfig, evolve, recovery_score, write_truth

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

STABILITY_HEADER = ["meaning", "label", "S", "coverage"]
RANK_HEADER = ["rank", "label", "S", "fit", "residual"]
HISTOGRAM_HEADER = ["bin_lo", "bin_hi", "count"]
OVERLAP_HEADER = ["n", "m", "p"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt_s(value: Optional[float], full: bool) -> str:
    if value is None:
        return ""
    return repr(value) if full else format(value, ".6g")


def fmt_full(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return repr(float(value))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _fit_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return lo, hi


def _rate_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return lo, hi


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# stability CSV

def stability_csv(report: StabilityReport, full_precision: bool = False) -> str:
    rows = [
        [i, label, fmt_s(s, full_precision), cov]
        for i, (label, s, cov) in enumerate(zip(report.labels, report.stability, report.coverage))
    ]
    return _csv_text(STABILITY_HEADER, rows)


def read_stability_csv(path) -> StabilityReport:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != STABILITY_HEADER:
            raise LexstabError(f"{path}: expected header {','.join(STABILITY_HEADER)}")
        labels, values, coverage = [], [], []
        for row in reader:
            labels.append(canonical_label(row["label"]))
            values.append(float(row["S"]) if row["S"].strip() else None)
            coverage.append(int(row["coverage"]))
    return StabilityReport(path.stem, tuple(labels), tuple(values), tuple(coverage))


# matrix CSV

def matrix_csv(names, values, formatter=fmt_full) -> str:
    rows = [[name] + [formatter(v) for v in row] for name, row in zip(names, values)]
    return _csv_text(["language"] + list(names), rows)


def read_matrix_csv(path) -> LanguageDistanceMatrix:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise LexstabError(f"{path}: empty matrix file")
    names = rows[0][1:]
    body = rows[1:]
    if len(body) != len(names) or any(len(r) != len(names) + 1 for r in body):
        raise LexstabError(f"{path}: matrix is not square")
    if [r[0] for r in body] != names:
        raise LexstabError(f"{path}: row labels differ from column labels")
    try:
        values = np.array([[float(x) for x in r[1:]] for r in body])
    except ValueError as exc:
        raise LexstabError(f"{path}: {exc}")
    return LanguageDistanceMatrix(tuple(names), values)


# subcommands

def cmd_stability(args) -> int:
    dataset = _load_dataset(args)
    report = stability_all(dataset, args.synonyms, args.min_coverage, args.threads)
    _emit(stability_csv(report, args.full_precision), args.out)
    return EXIT_OK


def cmd_distances(args) -> int:
    dataset = _load_dataset(args)
    matrix = distance_matrix(dataset, args.synonyms, args.threads)
    _emit(matrix_csv(matrix.names, matrix.values), args.out)
    if args.rate is not None:
        times = separation_times(matrix, args.rate)
        text = matrix_csv(matrix.names, times)
        if args.out is None or args.out == "-":
            sys.stdout.write("\n" + text)
        else:
            out = Path(args.out)
            out.with_name(out.stem + ".time" + out.suffix).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_rank(args) -> int:
    report = read_stability_csv(args.input)
    curve = rank_curve(report)
    lo, hi = args.fit_range
    fit = linear_fit(curve, lo, hi)
    hist = stability_histogram(report, args.bin_width)
    full = args.full_precision

    predicted = fit.predict(curve.ranks)
    rank_rows = [
        [rank, label, fmt_s(s, full), fmt_s(float(p), full), fmt_s(float(r), full)]
        for (rank, label, s), p, r in zip(curve.rows(), predicted, fit.residuals)
    ]
    hist_rows = [
        [format(float(lo_), ".10g"), format(float(hi_), ".10g"), int(c)]
        for lo_, hi_, c in zip(hist.edges[:-1], hist.edges[1:], hist.counts)
    ]
    n_top = max(1, len(curve) // 10)
    summary = {
        "family": report.family,
        "n_ranked": len(curve),
        "undefined": list(curve.undefined),
        "tie_rule": curve.tie_rule,
        "fit_range": [fit.lo, fit.hi],
        "slope": fit.slope,
        "intercept": fit.intercept,
        "top_decile_mean_residual": float(np.mean(fit.residuals[:n_top])),
        "bottom_decile_mean_residual": float(np.mean(fit.residuals[-n_top:])),
        "bin_width": args.bin_width,
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "rank.csv").write_text(_csv_text(RANK_HEADER, rank_rows), encoding="utf-8")
    (out / "histogram.csv").write_text(_csv_text(HISTOGRAM_HEADER, hist_rows), encoding="utf-8")
    summary_text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    (out / "fit.json").write_text(summary_text, encoding="utf-8")
    sys.stdout.write(summary_text)
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = read_stability_csv(args.a), read_stability_csv(args.b)
    r = pearson_correlation(a, b)
    curve = overlap_ratio(a, b)
    only_a, only_b = unmatched_labels(a, b)
    for label in only_a:
        print(f"note: {label} unmatched, only in {a.family}", file=sys.stderr)
    for label in only_b:
        print(f"note: {label} unmatched, only in {b.family}", file=sys.stderr)
    rows = [[int(n), int(m), fmt_full(float(p))] for n, m, p in zip(curve.n, curve.m, curve.p)]
    table = _csv_text(OVERLAP_HEADER, rows)
    sys.stdout.write(f"pearson={fmt_full(r)}\nshared={curve.n_items}\n")
    if args.out is None or args.out == "-":
        sys.stdout.write(table)
    else:
        Path(args.out).write_text(table, encoding="utf-8")
    return EXIT_OK


def cmd_tree(args) -> int:
    matrix = read_matrix_csv(args.input)
    tree = upgma(matrix.values, matrix.names)
    _emit(to_newick(tree) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.config:
        config = SimConfig.from_dict(json.loads(Path(args.config).read_text(encoding="utf-8")))
    else:
        config = SimConfig.log_uniform(
            args.n, args.m, args.rate_range, seed=args.seed, mutation_rate=args.mu
        )
    result = evolve(config)
    report = stability_all(result.dataset, threads=args.threads)
    score = recovery_score(result.truth, report)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "dataset.tsv").write_text(write_dataset(result.dataset), encoding="utf-8")
    (out / "truth.csv").write_text(write_truth(result), encoding="utf-8")
    (out / "tree.nwk").write_text(to_newick(result.tree) + "\n", encoding="utf-8")
    (out / "config.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8")
    sys.stdout.write(f"recovery_score={fmt_full(score)}\n")
    return EXIT_OK


def _load_dataset(args):
    config = NormalizationConfig(fold_diacritics=not args.no_fold)
    return read_dataset(args.input, config)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexstab", description="Automated word stability and language phylogeny.")
    parser.add_argument("--version", action="version", version=f"lexstab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", "-i", required=True)
        p.add_argument("--out", "-o")
        p.add_argument("--full-precision", action="store_true")
        p.add_argument("--threads", type=_positive_int, default=1)

    def lexicon_opts(p):
        p.add_argument("--synonyms", choices=["first", "min"], default="first")
        p.add_argument("--no-fold", action="store_true", help="keep diacritics")

    p = sub.add_parser("stability", help="per-meaning stability from a lexicon TSV")
    common(p)
    lexicon_opts(p)
    p.add_argument("--min-coverage", type=_positive_int, default=1)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("distances", help="language distance matrix from a lexicon TSV")
    common(p)
    lexicon_opts(p)
    p.add_argument("--rate", type=float, help="replacement rate; also write separation times")
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("rank", help="rank curve, linear fit and histogram from a stability CSV")
    common(p)
    p.add_argument("--fit-range", type=_fit_range, default=(51, 180), metavar="LO:HI")
    p.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH, metavar="W")
    p.set_defaults(func=cmd_rank, out_required=True)

    p = sub.add_parser("compare", help="correlation and top-n overlap of two stability CSVs")
    common(p, needs_input=False)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tree", help="UPGMA tree from a matrix CSV, as Newick")
    common(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("simulate", help="synthetic family with known replacement rates")
    common(p, needs_input=False)
    p.add_argument("--n", type=_positive_int, default=50)
    p.add_argument("--m", type=_positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu", type=float, default=0.1, help="per-character mutation rate")
    p.add_argument("--rate-range", type=_rate_range, default=(0.05, 5.0), metavar="LO:HI")
    p.add_argument("--config", help="JSON SimConfig; overrides --n/--m/--seed/--mu/--rate-range")
    p.set_defaults(func=cmd_simulate, out_required=True)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "out_required", False) and not args.out:
            raise UsageError(f"{args.command} needs --out DIR")
        if getattr(args, "rate", None) is not None and not args.rate > 0:
            raise UsageError("--rate must be positive")
    except UsageError as exc:
        print(f"error:usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ValueError as exc:
        # LexstabError and malformed numbers in input files alike
        print(f"error:{getattr(exc, 'code', 'data')}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, TypeError, KeyError) as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
