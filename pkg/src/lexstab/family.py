"""Family-wide metrics: per-meaning stability and language-pair distances.

All averages are taken with :func:`math.fsum`, which is correctly rounded and
therefore independent of summation order. Serial, threaded and brute-force
recomputations agree bit for bit.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import IndexOutOfBounds, NoSharedMeanings, NonPositiveRate, SaturatedDistance
from .lexicon import FamilyDataset
from .metric import normalized_distance, normalized_distance_many

SynonymPolicy = Literal["first", "min"]
POLICIES = ("first", "min")
# word pairs per worker task
CHUNK_SIZE = 50_000


def _check_policy(policy):
    if policy not in POLICIES:
        raise ValueError(f"unknown synonym policy {policy!r}; expected one of {POLICIES}")


def _check_language(dataset, a):
    if not 0 <= a < dataset.n_languages:
        raise IndexOutOfBounds(f"language index {a} outside 0..{dataset.n_languages - 1}")


def _check_meaning(dataset, i):
    if not 0 <= i < dataset.n_meanings:
        raise IndexOutOfBounds(f"meaning index {i} outside 0..{dataset.n_meanings - 1}")


def item_pair_distance(
    dataset: FamilyDataset, a: int, b: int, i: int, policy: SynonymPolicy = "first"
) -> Optional[float]:
    """Normalized distance between the words for meaning ``i`` in languages ``a`` and ``b``.

    None when either word is missing. With ``policy="min"`` all synonym
    combinations are tried and the closest pair wins.
    """
    _check_policy(policy)
    _check_language(dataset, a)
    _check_language(dataset, b)
    _check_meaning(dataset, i)
    if a == b:
        raise ValueError("item_pair_distance needs two distinct languages")
    fa, fb = dataset.forms(a, i), dataset.forms(b, i)
    if fa is None or fb is None:
        return None
    if policy == "first":
        return normalized_distance(fa[0], fb[0])
    return min(normalized_distance(x, y) for x in fa for y in fb)


def stability(
    dataset: FamilyDataset, i: int, policy: SynonymPolicy = "first", min_coverage: int = 1
) -> tuple[Optional[float], int]:
    """Return ``(S, pair_coverage)`` for meaning ``i``.

    S is one minus the mean distance over the unordered language pairs where
    both words exist. It is None if fewer than ``min_coverage`` such pairs exist.
    """
    _check_meaning(dataset, i)
    distances = []
    for a, b in combinations(range(dataset.n_languages), 2):
        d = item_pair_distance(dataset, a, b, i, policy)
        if d is not None:
            distances.append(d)
    coverage = len(distances)
    if coverage == 0 or coverage < min_coverage:
        return None, coverage
    return 1.0 - math.fsum(distances) / coverage, coverage


@dataclass(frozen=True)
class StabilityReport:
    family: str
    labels: tuple[str, ...]
    stability: tuple[Optional[float], ...]
    coverage: tuple[int, ...]
    n_languages: Optional[int] = None

    @property
    def n_meanings(self) -> int:
        return len(self.labels)

    def defined(self) -> dict[str, float]:
        return {label: s for label, s in zip(self.labels, self.stability) if s is not None}

    def __getitem__(self, label: str) -> Optional[float]:
        return self.stability[self.labels.index(label)]


def _pair_index(n):
    return list(combinations(range(n), 2))


def pair_distance_table(
    dataset: FamilyDataset, policy: SynonymPolicy = "first", threads: int = 1
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Distances for every meaning and unordered language pair.

    Returns an ``(M, P)`` float array, NaN where a word is missing, and the
    list of the P pairs in ascending order.
    """
    _check_policy(policy)
    pairs = _pair_index(dataset.n_languages)
    n_pairs = len(pairs)
    cells, left, right = [], [], []
    for i in range(dataset.n_meanings):
        for p, (a, b) in enumerate(pairs):
            fa, fb = dataset.forms(a, i), dataset.forms(b, i)
            if fa is None or fb is None:
                continue
            if policy == "first":
                fa, fb = fa[:1], fb[:1]
            for x in fa:
                for y in fb:
                    cells.append(i * n_pairs + p)
                    left.append(x)
                    right.append(y)

    values = _run_chunked(left, right, threads)
    table = np.full(dataset.n_meanings * n_pairs, np.inf)
    if cells:
        np.minimum.at(table, np.asarray(cells, dtype=np.int64), values)
    table[np.isinf(table)] = np.nan
    return table.reshape(dataset.n_meanings, n_pairs), pairs


def _run_chunked(left, right, threads):
    chunk = CHUNK_SIZE
    if threads <= 1 or len(left) <= chunk:
        return normalized_distance_many(left, right)
    bounds = [(k, min(k + chunk, len(left))) for k in range(0, len(left), chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda kb: normalized_distance_many(left[kb[0]:kb[1]], right[kb[0]:kb[1]]), bounds)
        return np.concatenate(list(parts))


def _defined(row):
    return row[~np.isnan(row)].tolist()


def stability_all(
    dataset: FamilyDataset,
    policy: SynonymPolicy = "first",
    min_coverage: int = 1,
    threads: int = 1,
) -> StabilityReport:
    table, _ = pair_distance_table(dataset, policy, threads)
    values, coverage = [], []
    for row in table:
        distances = _defined(row)
        coverage.append(len(distances))
        if not distances or len(distances) < min_coverage:
            values.append(None)
        else:
            values.append(1.0 - math.fsum(distances) / len(distances))
    return StabilityReport(dataset.name, dataset.meanings, tuple(values), tuple(coverage), dataset.n_languages)


def language_distance(
    dataset: FamilyDataset, a: int, b: int, policy: SynonymPolicy = "first"
) -> tuple[float, int]:
    """Mean word distance over meanings present in both languages, with that count."""
    distances = []
    for i in range(dataset.n_meanings):
        d = item_pair_distance(dataset, a, b, i, policy)
        if d is not None:
            distances.append(d)
    if not distances:
        raise NoSharedMeanings(f"{dataset.languages[a]!r} and {dataset.languages[b]!r} share no meaning")
    return math.fsum(distances) / len(distances), len(distances)


@dataclass(frozen=True)
class LanguageDistanceMatrix:
    names: tuple[str, ...]
    values: np.ndarray
    coverage: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.names)


def distance_matrix(
    dataset: FamilyDataset, policy: SynonymPolicy = "first", threads: int = 1
) -> LanguageDistanceMatrix:
    table, pairs = pair_distance_table(dataset, policy, threads)
    n = dataset.n_languages
    values = np.zeros((n, n))
    coverage = np.zeros((n, n), dtype=np.int64)
    for p, (a, b) in enumerate(pairs):
        distances = _defined(table[:, p])
        if not distances:
            raise NoSharedMeanings(f"{dataset.languages[a]!r} and {dataset.languages[b]!r} share no meaning")
        values[a, b] = values[b, a] = math.fsum(distances) / len(distances)
        coverage[a, b] = coverage[b, a] = len(distances)
    return LanguageDistanceMatrix(dataset.languages, values, coverage)


def separation_time(d: float, rate: float) -> float:
    """Divergence time from lexical distance: ``-ln(1 - d) / (2 * rate)``.

    Shared similarity ``1 - d`` decays as ``exp(-2 * rate * t)`` when both
    lineages change independently at ``rate``.
    """
    if not rate > 0 or not math.isfinite(rate):
        raise NonPositiveRate(f"rate must be positive and finite, got {rate}")
    if d >= 1:
        raise SaturatedDistance(f"distance {d} has no finite separation time")
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    return -math.log1p(-d) / (2 * rate)


def separation_times(matrix: LanguageDistanceMatrix, rate: float) -> np.ndarray:
    """Elementwise :func:`separation_time`; saturated entries become ``inf``."""
    out = np.zeros_like(matrix.values)
    n = len(matrix)
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            try:
                out[a, b] = separation_time(float(matrix.values[a, b]), rate)
            except SaturatedDistance:
                out[a, b] = math.inf
    return out


def label_subset(report: StabilityReport, labels: Sequence[str]) -> StabilityReport:
    index = {label: k for k, label in enumerate(report.labels)}
    keep = [index[label] for label in labels]
    return StabilityReport(
        report.family,
        tuple(report.labels[k] for k in keep),
        tuple(report.stability[k] for k in keep),
        tuple(report.coverage[k] for k in keep),
        report.n_languages,
    )
