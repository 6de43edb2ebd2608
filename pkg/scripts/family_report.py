"""One-shot analysis of a lexicon TSV (or two, for a cross-family comparison).

Prints the most stable meanings, the rank-curve fit and the UPGMA tree.

    python scripts/family_report.py ie.tsv
    python scripts/family_report.py ie.tsv an.tsv --top 20
"""
import argparse

from lexstab.family import distance_matrix, stability_all
from lexstab.lexicon import read_dataset, validate
from lexstab.phylogeny import to_newick, upgma
from lexstab.ranking import linear_fit, overlap_ratio, pearson_correlation, rank_curve


def describe(path, top, synonyms):
    dataset = read_dataset(path)
    check = validate(dataset)
    print(f"== {dataset.name}: N={check.n_languages} M={check.n_meanings} missing={check.n_missing}")
    report = stability_all(dataset, synonyms)
    curve = rank_curve(report)
    for rank, label, s in curve.rows()[:top]:
        print(f"{rank:4d}  {label:<12s} {s:.5f}")
    if len(curve) >= 180:
        fit = linear_fit(curve)
        print(f"fit 51..180: slope={fit.slope:.5f} intercept={fit.intercept:.4f}")
    print(to_newick(upgma(*_matrix(dataset, synonyms))))
    return report


def _matrix(dataset, synonyms):
    m = distance_matrix(dataset, synonyms)
    return m.values, m.names


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("tsv", nargs="+")
    parser.add_argument("--top", type=int, default=20)
    parser.add_argument("--synonyms", choices=["first", "min"], default="first")
    args = parser.parse_args()

    reports = [describe(path, args.top, args.synonyms) for path in args.tsv]
    if len(reports) == 2:
        a, b = reports
        curve = overlap_ratio(a, b)
        print(f"pearson={pearson_correlation(a, b):.4f} shared={curve.n_items}")
        for n in (5, 10, 20, 50, 100):
            if n <= curve.n_items:
                print(f"p({n})={curve.p[n - 1]:.3f}")


if __name__ == "__main__":
    main()
