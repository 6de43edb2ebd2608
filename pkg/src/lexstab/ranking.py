"""Distribution, ranking and cross-family comparison of stability values."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DegenerateRange,
    EmptyReport,
    InsufficientOverlap,
    InvalidBinWidth,
    InvalidN,
    RangeOutOfBounds,
    ZeroVariance,
)
from .family import StabilityReport

DEFAULT_BIN_WIDTH = 0.02
DEFAULT_FIT_RANGE = (51, 180)
TIE_RULE = "descending S, ties by ascending meaning index"


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _bin_edges(width):
    n_bins = round(1.0 / width)
    if not math.isclose(n_bins * width, 1.0, rel_tol=1e-9):
        n_bins = math.ceil(1.0 / width)
    edges = np.arange(n_bins + 1) * width
    edges[-1] = 1.0
    return edges


def stability_histogram(report: StabilityReport, bin_width: float = DEFAULT_BIN_WIDTH) -> Histogram:
    """Uniform bins over [0, 1].

    Bins are half-open ``[lo, hi)`` except the last, which is closed so that
    S = 1 is counted.
    """
    if not (0 < bin_width <= 1) or not math.isfinite(bin_width):
        raise InvalidBinWidth(f"bin width must lie in (0, 1], got {bin_width}")
    edges = _bin_edges(bin_width)
    values = np.array(list(report.defined().values()), dtype=float)
    index = np.searchsorted(edges, values, side="right") - 1
    index = np.clip(index, 0, len(edges) - 2)
    counts = np.bincount(index, minlength=len(edges) - 1)
    return Histogram(edges, counts)


@dataclass(frozen=True)
class RankCurve:
    labels: tuple[str, ...]
    values: tuple[float, ...]
    undefined: tuple[str, ...] = ()
    tie_rule: str = TIE_RULE

    def __len__(self):
        return len(self.labels)

    @property
    def ranks(self) -> np.ndarray:
        return np.arange(1, len(self.labels) + 1)

    def rows(self):
        return list(zip(self.ranks.tolist(), self.labels, self.values))


def rank_curve(report: StabilityReport) -> RankCurve:
    defined = [(s, k) for k, s in enumerate(report.stability) if s is not None]
    if not defined:
        raise EmptyReport(f"report {report.family!r} has no defined stability value")
    defined.sort(key=lambda sk: (-sk[0], sk[1]))
    undefined = tuple(label for label, s in zip(report.labels, report.stability) if s is None)
    return RankCurve(
        tuple(report.labels[k] for _, k in defined),
        tuple(s for s, _ in defined),
        undefined,
    )


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    lo: int
    hi: int
    residuals: np.ndarray = field(repr=False)

    def predict(self, rank):
        return self.intercept + self.slope * np.asarray(rank, dtype=float)


def linear_fit(curve: RankCurve, lo: int = DEFAULT_FIT_RANGE[0], hi: int = DEFAULT_FIT_RANGE[1]) -> LinearFit:
    """Least-squares line of S against rank over ranks ``lo..hi`` inclusive.

    Residuals (observed minus line) are returned for every rank of the curve.
    """
    if lo >= hi:
        raise DegenerateRange(f"fit range {lo}:{hi} holds fewer than 2 ranks")
    if lo < 1 or hi > len(curve):
        raise RangeOutOfBounds(f"fit range {lo}:{hi} outside ranks 1..{len(curve)}")
    ranks = curve.ranks.astype(float)
    values = np.asarray(curve.values, dtype=float)
    x, y = ranks[lo - 1 : hi], values[lo - 1 : hi]
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    residuals = values - (intercept + slope * ranks)
    return LinearFit(slope, intercept, lo, hi, residuals)


def shared_labels(a: StabilityReport, b: StabilityReport) -> list[str]:
    """Labels with a defined S in both reports, in the order of ``a``."""
    db = b.defined()
    return [label for label in a.defined() if label in db]


def unmatched_labels(a: StabilityReport, b: StabilityReport) -> tuple[list[str], list[str]]:
    shared = set(shared_labels(a, b))
    return (
        [label for label in a.labels if label not in shared],
        [label for label in b.labels if label not in shared],
    )


def pearson_correlation(a: StabilityReport, b: StabilityReport) -> float:
    labels = shared_labels(a, b)
    if len(labels) < 2:
        raise InsufficientOverlap(f"{len(labels)} shared meanings with defined S; need at least 2")
    da, db = a.defined(), b.defined()
    x = np.array([da[label] for label in labels])
    y = np.array([db[label] for label in labels])
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy = float(np.dot(xc, xc)), float(np.dot(yc, yc))
    if sxx == 0 or syy == 0:
        raise ZeroVariance("stability is constant across shared meanings in one of the reports")
    r = float(np.dot(xc, yc)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _shared_rankings(a, b):
    labels = set(shared_labels(a, b))
    ra = [label for label in rank_curve(a).labels if label in labels]
    rb = [label for label in rank_curve(b).labels if label in labels]
    return ra, rb


def overlap_counts(ranking_a, ranking_b) -> np.ndarray:
    """m(n) for n = 1..len: shared labels among the two top-n prefixes."""
    if len(ranking_a) != len(ranking_b):
        raise ValueError("rankings must have equal length")
    seen_a, seen_b = set(), set()
    m, counts = 0, []
    for x, y in zip(ranking_a, ranking_b):
        if x == y:
            m += 1
        else:
            m += (x in seen_b) + (y in seen_a)
        seen_a.add(x)
        seen_b.add(y)
        counts.append(m)
    return np.array(counts, dtype=np.int64)


def top_n_overlap(a: StabilityReport, b: StabilityReport, n: int) -> int:
    ra, rb = _shared_rankings(a, b)
    if not 1 <= n <= len(ra):
        raise InvalidN(f"n={n} outside 1..{len(ra)} shared meanings")
    return len(set(ra[:n]) & set(rb[:n]))


@dataclass(frozen=True)
class OverlapCurve:
    n: np.ndarray
    m: np.ndarray
    p: np.ndarray
    n_items: int


def overlap_ratio(a: StabilityReport, b: StabilityReport) -> OverlapCurve:
    """m(n) and p(n) = m(n) / (n^2 / M), M the number of shared meanings."""
    ra, rb = _shared_rankings(a, b)
    if not ra:
        raise InsufficientOverlap("no shared meaning with defined S")
    return overlap_curve(ra, rb)


def overlap_curve(ranking_a, ranking_b) -> OverlapCurve:
    m = overlap_counts(ranking_a, ranking_b)
    total = len(m)
    n = np.arange(1, total + 1, dtype=np.int64)
    # one rounding step, so identical rankings give exactly total / n
    p = (m * total) / (n * n)
    return OverlapCurve(n, m, p, total)


@dataclass(frozen=True)
class ShuffleBaseline:
    n: np.ndarray
    mean_m: np.ndarray
    stderr_m: np.ndarray
    expected_m: np.ndarray
    trials: int


def shuffle_baseline(n_items: int, trials: int = 1000, seed: Optional[int] = 0) -> ShuffleBaseline:
    """m(n) for independently shuffled rankings of ``n_items`` labels.

    The expected count is exactly ``n^2 / n_items`` (hypergeometric mean).
    """
    rng = np.random.default_rng(seed)
    counts = np.empty((trials, n_items), dtype=np.int64)
    items = np.arange(n_items)
    for t in range(trials):
        counts[t] = overlap_counts(rng.permutation(items).tolist(), rng.permutation(items).tolist())
    n = np.arange(1, n_items + 1)
    return ShuffleBaseline(
        n,
        counts.mean(axis=0),
        counts.std(axis=0, ddof=1) / math.sqrt(trials) if trials > 1 else np.zeros(n_items),
        n * n / n_items,
        trials,
    )
