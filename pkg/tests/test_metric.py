import random

import pytest
from hypothesis import given, strategies as st

from lexstab.metric import levenshtein, levenshtein_many, normalized_distance, normalized_distance_many

from oracles import all_words, recursive_levenshtein


@pytest.mark.parametrize("a, b, expected", [("sun", "sun", 0), ("to", "ta", 1), ("kitten", "sitting", 3)])
def test_levenshtein_examples(a, b, expected):
    assert levenshtein(a, b) == expected
    assert levenshtein_many([a], [b]).tolist() == [expected]


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("ab", "ac", 0.5),
        ("abcdefgh", "abcdefgx", 0.125),
        ("mano", "mano", 0.0),
        ("kitten", "sitting", 3 / 7),
        ("ab", "cd", 1.0),
    ],
)
def test_normalized_examples(a, b, expected):
    assert normalized_distance(a, b) == expected
    assert normalized_distance_many([a], [b]).tolist() == [expected]


def test_length_counts_code_points():
    assert normalized_distance("ñu", "nu") == 0.5
    assert levenshtein("a b", "ab") == 1


words = st.text(alphabet="abc", min_size=1, max_size=7)


@given(words, words)
def test_symmetry_range_identity(a, b):
    d = normalized_distance(a, b)
    assert d == normalized_distance(b, a)
    assert 0.0 <= d <= 1.0
    assert (d == 0) == (a == b)
    assert levenshtein(a, b) <= max(len(a), len(b))


@given(st.text(alphabet="ab", min_size=1, max_size=6), st.text(alphabet="xy", min_size=1, max_size=6))
def test_disjoint_alphabets_equal_length_is_one(a, b):
    b = (b * 6)[: len(a)]
    assert normalized_distance(a, b) == 1.0


@given(st.lists(st.tuples(st.text(max_size=9), st.text(max_size=9)), max_size=30))
def test_batch_matches_scalar_unicode(pairs):
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    assert levenshtein_many(left, right).tolist() == [levenshtein(a, b) for a, b in pairs]


def test_exhaustive_short_words_against_oracle():
    vocab = list(all_words("abc", 4))
    assert len(vocab) == 120
    left = [a for a in vocab for b in vocab]
    right = [b for a in vocab for b in vocab]
    batch = levenshtein_many(left, right).tolist()
    for a, b, k in zip(left, right, batch):
        expected = recursive_levenshtein(a, b)
        assert levenshtein(a, b) == expected
        assert k == expected


def test_batch_with_nul_and_empty():
    assert levenshtein_many(["a\x00", "", ""], ["a", "", "xyz"]).tolist() == [1, 0, 3]


def test_batch_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        levenshtein_many(["a"], [])


def test_batch_random_long_words():
    rng = random.Random(3)
    left = ["".join(rng.choice("abcde") for _ in range(rng.randint(1, 20))) for _ in range(500)]
    right = ["".join(rng.choice("abcde") for _ in range(rng.randint(1, 20))) for _ in range(500)]
    assert levenshtein_many(left, right).tolist() == [levenshtein(a, b) for a, b in zip(left, right)]
