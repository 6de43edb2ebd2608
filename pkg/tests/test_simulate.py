import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lexstab.errors import InsufficientData, InvalidConfig, InvalidLeafCount, ZeroVariance
from lexstab.family import StabilityReport, pair_distance_table, stability_all
from lexstab.lexicon import parse_dataset, write_dataset
from lexstab.metric import normalized_distance
from lexstab.phylogeny import cophenetic_matrix
from lexstab.simulate import (
    SimConfig,
    _rng,
    evolve,
    random_tree,
    random_word,
    recovery_score,
    write_truth,
)


def test_random_tree_two_leaves():
    tree = random_tree(2, seed=5)
    assert tree.height == 1.0
    assert len(tree.children) == 2
    assert all(c.is_leaf for c in tree.children)


@given(st.integers(2, 60), st.integers(0, 2**64 - 1))
@settings(deadline=None, max_examples=40)
def test_random_tree_shape(n, seed):
    tree = random_tree(n, seed)
    assert len(tree.leaves()) == n
    assert len(tree.internal_nodes()) == n - 1
    assert all(len(node.children) == 2 for node in tree.internal_nodes())
    assert tree.height == 1.0
    assert all(length > 0 for _, _, length in tree.edges())
    assert len(set(tree.leaf_names())) == n


def test_random_tree_deterministic():
    a, b = random_tree(30, 9), random_tree(30, 9)
    assert pickle.dumps(a) == pickle.dumps(b)
    assert pickle.dumps(a) != pickle.dumps(random_tree(30, 10))


def test_random_tree_invalid():
    with pytest.raises(InvalidLeafCount):
        random_tree(1, 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_languages=1, n_meanings=1, rates=(1.0,)),
        dict(n_languages=2, n_meanings=0, rates=()),
        dict(n_languages=2, n_meanings=2, rates=(1.0,)),
        dict(n_languages=2, n_meanings=1, rates=(-1.0,)),
        dict(n_languages=2, n_meanings=1, rates=(math.inf,)),
        dict(n_languages=2, n_meanings=1, rates=(1.0,), mutation_rate=-0.1),
        dict(n_languages=2, n_meanings=1, rates=(1.0,), min_length=5, max_length=3),
        dict(n_languages=2, n_meanings=1, rates=(1.0,), alphabet_size=27),
        dict(n_languages=2, n_meanings=1, rates=(1.0,), seed=-1),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(InvalidConfig):
        SimConfig(**kwargs)


def test_config_roundtrip():
    config = SimConfig.log_uniform(10, 20, seed=3, mutation_rate=0.2)
    assert config.generator == "PCG64"
    assert SimConfig.from_dict(config.to_dict()) == config
    assert all(0.05 <= r <= 5.0 for r in config.rates)


def test_zero_rates_conserve_words():
    config = SimConfig(12, 15, (0.0,) * 15, mutation_rate=0.0, seed=4)
    result = evolve(config)
    table, _ = pair_distance_table(result.dataset)
    assert not table.any()
    report = stability_all(result.dataset)
    assert report.stability == (1.0,) * 15


def test_words_shape():
    config = SimConfig(8, 30, (1.0,) * 30, alphabet_size=4, seed=2)
    result = evolve(config)
    assert result.dataset.n_languages == 8 and result.dataset.n_meanings == 30
    assert len(result.truth) == 30
    for forms in result.dataset.entries.values():
        (word,) = forms
        assert 3 <= len(word) <= 9
        assert set(word) <= set("abcd")


def test_deterministic_bitwise():
    config = SimConfig.log_uniform(20, 40, seed=123)
    a, b = evolve(config), evolve(config)
    assert write_dataset(a.dataset) == write_dataset(b.dataset)
    assert pickle.dumps(a) == pickle.dumps(b)
    other = evolve(SimConfig.log_uniform(20, 40, seed=124))
    assert write_dataset(other.dataset) != write_dataset(a.dataset)


def test_meanings_use_independent_streams():
    # meaning i depends only on its own rate and stream, not on the others
    base = SimConfig(10, 3, (0.5, 0.5, 0.5), seed=8)
    changed = SimConfig(10, 3, (0.5, 4.0, 0.5), seed=8)
    a, b = evolve(base).dataset, evolve(changed).dataset
    for lang in range(10):
        assert a.forms(lang, 0) == b.forms(lang, 0)
        assert a.forms(lang, 2) == b.forms(lang, 2)


def test_saturated_rates_match_random_word_baseline():
    config = SimConfig(20, 60, (1e6,) * 60, mutation_rate=0.0, seed=21)
    report = stability_all(evolve(config).dataset)
    mean_s = np.mean(report.stability)

    rng = _rng(999, 7)
    samples = [normalized_distance(random_word(rng, config), random_word(rng, config)) for _ in range(20_000)]
    expected = 1 - np.mean(samples)
    # 60 meanings x 190 pairs; sampling error of the baseline is ~1e-3
    assert mean_s == pytest.approx(expected, abs=0.01)


def test_mutation_only_tracks_tree_depth():
    # no replacement: expected per-site difference after separation 2h is
    # 1 - P(same), with substitutions moving to a uniformly different letter
    config = SimConfig(30, 80, (0.0,) * 80, mutation_rate=0.3, min_length=9, max_length=9, seed=5)
    result = evolve(config)
    names = list(result.dataset.languages)
    coph = cophenetic_matrix(result.tree, names)
    table, pairs = pair_distance_table(result.dataset)
    k = config.alphabet_size
    predicted = [(k - 1) / k * (1 - math.exp(-k / (k - 1) * config.mutation_rate * coph[a, b])) for a, b in pairs]
    # hamming-only changes; Levenshtein can only be lower, so compare loosely from above
    assert table.mean() <= np.mean(predicted) + 0.01
    assert table.mean() >= 0.7 * np.mean(predicted)


def test_two_rate_classes_order():
    wins = 0
    for seed in range(100):
        rates = (0.1,) * 10 + (1.5,) * 10
        config = SimConfig(50, 20, rates, mutation_rate=0.0, seed=seed)
        report = stability_all(evolve(config).dataset)
        low, high = np.mean(report.stability[:10]), np.mean(report.stability[10:])
        wins += low > high
    assert wins >= 95


def test_recovery_score_examples():
    truth = [0.1, 0.5, 1.0, 2.0]
    rep = StabilityReport("x", tuple("abcd"), (0.9, 0.7, 0.4, 0.1), (1,) * 4)
    assert recovery_score(truth, rep) == pytest.approx(-1.0)
    tied = StabilityReport("x", tuple("abcd"), (0.9, 0.7, 0.7, None), (1,) * 4)
    assert recovery_score(truth, tied) == pytest.approx(-math.sqrt(3) / 2)
    with pytest.raises(InsufficientData):
        recovery_score(truth[:3], rep)
    with pytest.raises(InsufficientData):
        recovery_score(truth, StabilityReport("x", tuple("abcd"), (0.9, None, None, None), (1,) * 4))
    with pytest.raises(ZeroVariance):
        recovery_score([1.0] * 4, rep)


def test_recovery_score_null_case():
    m = 400
    rng = np.random.default_rng(0)
    truth = rng.random(m)
    rep = StabilityReport("x", tuple(str(k) for k in range(m)), tuple(rng.random(m).tolist()), (1,) * m)
    assert abs(recovery_score(truth, rep)) < 3 / math.sqrt(m)


def test_truth_csv_and_tsv_export():
    result = evolve(SimConfig.log_uniform(5, 4, seed=1))
    lines = write_truth(result).splitlines()
    assert lines[0] == "label,rate"
    assert [l.split(",")[0] for l in lines[1:]] == list(result.dataset.meanings)
    assert [float(l.split(",")[1]) for l in lines[1:]] == list(result.truth)
    again = parse_dataset(write_dataset(result.dataset), name=result.dataset.name)
    assert again == result.dataset
