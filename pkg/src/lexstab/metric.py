"""Levenshtein edit distance and its length-normalized variant.

Two routes compute the same integers:

* :func:`levenshtein` -- scalar two-row dynamic program, the reference.
* :func:`levenshtein_many` -- the same recurrence vectorized with numpy over
  a batch of word pairs. Used by the family-wide computations.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions and substitutions."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    # b is the shorter word; rows have len(b) + 1 cells
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def normalized_distance(a: str, b: str) -> float:
    """Edit distance divided by the length of the longer word, in [0, 1].

    >>> normalized_distance("ab", "ac")
    0.5
    >>> normalized_distance("abcdefgh", "abcdefgx")
    0.125
    """
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


def _encode(words: Sequence[str], pad: int) -> tuple[np.ndarray, np.ndarray]:
    lengths = np.fromiter((len(w) for w in words), dtype=np.int64, count=len(words))
    width = max(int(lengths.max()), 1)
    # fixed-width UCS4 array viewed as code points; cells past each word get the pad code
    codes = np.asarray(words, dtype=f"<U{width}").view(np.uint32).reshape(len(words), width)
    codes = codes.astype(np.int64)
    codes[np.arange(width) >= lengths[:, None]] = pad
    return codes, lengths


def levenshtein_many(left: Sequence[str], right: Sequence[str]) -> np.ndarray:
    """Edit distances of ``left[k]`` vs ``right[k]`` for every k, as int64.

    Rows of the DP table are filled for all pairs at once. Within a row the
    insertion chain ``cur[j] = min(cur[j-1] + 1, t[j])`` is resolved as
    ``j + cummin(t[j] - j)``, so only the outer loop runs in Python.
    """
    if len(left) != len(right):
        raise ValueError("left and right must have the same length")
    n_pairs = len(left)
    if n_pairs == 0:
        return np.zeros(0, dtype=np.int64)
    # distinct pad codes never match each other or a real code point
    a, len_a = _encode(left, pad=-1)
    b, len_b = _encode(right, pad=-2)
    width_a, width_b = a.shape[1], b.shape[1]
    rows = np.arange(n_pairs)
    cols = np.arange(width_b + 1, dtype=np.int64)

    previous = np.broadcast_to(cols, (n_pairs, width_b + 1)).copy()
    result = len_b.copy()  # distance when a is empty
    for i in range(1, width_a + 1):
        cost = (a[:, i - 1 : i] != b).astype(np.int64)
        candidate = np.empty_like(previous)
        candidate[:, 0] = i
        candidate[:, 1:] = np.minimum(previous[:, 1:] + 1, previous[:, :-1] + cost)
        current = np.minimum.accumulate(candidate - cols, axis=1) + cols
        done = len_a == i
        if done.any():
            result[done] = current[rows[done], len_b[done]]
        previous = current
    return result


def normalized_distance_many(left: Sequence[str], right: Sequence[str]) -> np.ndarray:
    counts = levenshtein_many(left, right)
    longest = np.fromiter((max(len(x), len(y)) for x, y in zip(left, right)), dtype=np.int64, count=len(left))
    out = np.zeros(len(left), dtype=np.float64)
    nonzero = longest > 0
    out[nonzero] = counts[nonzero] / longest[nonzero]
    return out
