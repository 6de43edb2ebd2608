"""Synthetic lexical evolution with known per-meaning replacement rates.

A random ultrametric tree (root height 1) carries a root lexicon down to its
leaves. Along an edge of length t, the word for meaning i is replaced by a
fresh random word with probability ``1 - exp(-rate_i * t)``; otherwise each
character is independently substituted by a different letter with
probability ``1 - exp(-mutation_rate * t)``.

Randomness comes from numpy's PCG64 bit generator. The tree is drawn from
the stream ``SeedSequence(seed, spawn_key=(0,))`` and meaning i evolves on
its own stream ``SeedSequence(seed, spawn_key=(1, i))``, so meanings can be
simulated in any order, or in parallel, with identical output.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from string import ascii_lowercase
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import InsufficientData, InvalidConfig, InvalidLeafCount, ZeroVariance
from .family import StabilityReport
from .lexicon import FamilyDataset
from .phylogeny import Node

GENERATOR = "PCG64"
TREE_STREAM = 0
MEANING_STREAM = 1
RATE_STREAM = 2


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def random_tree(n_leaves: int, seed: int, names: Optional[Sequence[str]] = None) -> Node:
    """Yule tree rescaled to root height 1.

    Grown forward in time: with k lineages the next split comes after an
    Exp(k) wait and hits a uniformly chosen lineage. A final Exp(n) wait
    separates the last split from the present.
    """
    if n_leaves < 2:
        raise InvalidLeafCount(f"a tree needs at least 2 leaves, got {n_leaves}")
    if names is None:
        width = len(str(n_leaves))
        names = [f"L{k + 1:0{width}d}" for k in range(n_leaves)]
    if len(names) != n_leaves:
        raise InvalidLeafCount(f"{len(names)} names for {n_leaves} leaves")
    rng = _rng(seed, TREE_STREAM)

    root = Node(height=0.0)  # heights hold birth times until the final pass
    lineages = [Node(), Node()]
    root.children = list(lineages)
    now = 0.0
    while len(lineages) < n_leaves:
        now += rng.exponential(1.0 / len(lineages))
        k = int(rng.integers(len(lineages)))
        parent = lineages[k]
        parent.height = now
        kids = [Node(), Node()]
        parent.children = kids
        lineages[k : k + 1] = kids
    now += rng.exponential(1.0 / len(lineages))

    for leaf, name in zip(lineages, names):
        leaf.name = name
    for node in root.walk():
        node.height = 0.0 if node.is_leaf else (now - node.height) / now
    root.height = 1.0
    return root


@dataclass(frozen=True)
class SimConfig:
    n_languages: int
    n_meanings: int
    rates: tuple[float, ...]
    mutation_rate: float = 0.1
    min_length: int = 3
    max_length: int = 9
    alphabet_size: int = 26
    seed: int = 0
    generator: str = field(default=GENERATOR, init=False)

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        self.validate()

    def validate(self):
        if self.n_languages < 2 or self.n_meanings < 1:
            raise InvalidConfig(f"need N >= 2 and M >= 1, got N={self.n_languages}, M={self.n_meanings}")
        if len(self.rates) != self.n_meanings:
            raise InvalidConfig(f"{len(self.rates)} rates for {self.n_meanings} meanings")
        if any(not math.isfinite(r) or r < 0 for r in self.rates):
            raise InvalidConfig("replacement rates must be finite and non-negative")
        if not math.isfinite(self.mutation_rate) or self.mutation_rate < 0:
            raise InvalidConfig("mutation rate must be finite and non-negative")
        if not 1 <= self.min_length <= self.max_length:
            raise InvalidConfig(f"bad word length range [{self.min_length}, {self.max_length}]")
        if not 2 <= self.alphabet_size <= len(ascii_lowercase):
            raise InvalidConfig(f"alphabet size must be 2..26, got {self.alphabet_size}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")

    @classmethod
    def log_uniform(
        cls,
        n_languages: int,
        n_meanings: int,
        rate_range: tuple[float, float] = (0.05, 5.0),
        seed: int = 0,
        **kwargs,
    ) -> "SimConfig":
        """Config whose rates are drawn log-uniformly from ``rate_range`` on a dedicated stream."""
        lo, hi = rate_range
        if not 0 < lo <= hi:
            raise InvalidConfig(f"bad rate range {rate_range}")
        rng = _rng(seed, RATE_STREAM)
        rates = np.exp(rng.uniform(math.log(lo), math.log(hi), size=n_meanings))
        return cls(n_languages, n_meanings, tuple(rates.tolist()), seed=seed, **kwargs)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rates"] = list(self.rates)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        d = {k: v for k, v in d.items() if k != "generator"}
        return cls(**d)


@dataclass(frozen=True)
class SimResult:
    dataset: FamilyDataset
    truth: tuple[float, ...]
    tree: Node
    config: SimConfig


def meaning_labels(n_meanings: int) -> tuple[str, ...]:
    width = len(str(n_meanings))
    return tuple(f"M{k + 1:0{width}d}" for k in range(n_meanings))


def random_word(rng: np.random.Generator, config: SimConfig) -> str:
    length = int(rng.integers(config.min_length, config.max_length + 1))
    letters = rng.integers(config.alphabet_size, size=length)
    return "".join(ascii_lowercase[c] for c in letters)


def _mutate(word: str, p: float, rng: np.random.Generator, alphabet_size: int) -> str:
    hits = rng.random(len(word)) < p
    if not hits.any():
        return word
    chars = list(word)
    for k in np.flatnonzero(hits):
        # uniform over the other letters
        shift = int(rng.integers(1, alphabet_size))
        chars[k] = ascii_lowercase[(ascii_lowercase.index(chars[k]) + shift) % alphabet_size]
    return "".join(chars)


def evolve_meaning(tree: Node, rate: float, config: SimConfig, rng: np.random.Generator) -> dict[str, str]:
    """Leaf name -> word for one meaning, walking the tree in pre-order."""
    words = {id(tree): random_word(rng, config)}
    out = {}
    for node in tree.walk():
        word = words[id(node)]
        if node.is_leaf:
            out[node.name] = word
            continue
        for child in node.children:
            t = node.height - child.height
            if rng.random() < -math.expm1(-rate * t):
                child_word = random_word(rng, config)
            else:
                child_word = _mutate(word, -math.expm1(-config.mutation_rate * t), rng, config.alphabet_size)
            words[id(child)] = child_word
    return out


def evolve(config: SimConfig, tree: Optional[Node] = None) -> SimResult:
    config.validate()
    if tree is None:
        tree = random_tree(config.n_languages, config.seed)
    languages = tuple(tree.leaf_names())
    if len(languages) != config.n_languages:
        raise InvalidConfig(f"tree has {len(languages)} leaves, config wants {config.n_languages}")
    index = {name: a for a, name in enumerate(languages)}
    entries = {}
    for i, rate in enumerate(config.rates):
        words = evolve_meaning(tree, rate, config, _rng(config.seed, MEANING_STREAM, i))
        for name, word in words.items():
            entries[(index[name], i)] = (word,)
    dataset = FamilyDataset(languages, meaning_labels(config.n_meanings), entries, name=f"sim-{config.seed}")
    return SimResult(dataset, config.rates, tree, config)


def recovery_score(truth: Sequence[float], report: StabilityReport) -> float:
    """Spearman correlation (midranks) between true rates and estimated S.

    Strongly negative when S orders meanings by how slowly they change.
    """
    if len(truth) != report.n_meanings:
        raise InsufficientData(f"{len(truth)} rates for {report.n_meanings} meanings")
    pairs = [(r, s) for r, s in zip(truth, report.stability) if s is not None]
    if len(pairs) < 2:
        raise InsufficientData("need at least 2 meanings with a defined S")
    x = rankdata([r for r, _ in pairs])
    y = rankdata([s for _, s in pairs])
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy = float(np.dot(xc, xc)), float(np.dot(yc, yc))
    if sxx == 0 or syy == 0:
        raise ZeroVariance("rates or stabilities are all tied")
    return float(np.dot(xc, yc)) / math.sqrt(sxx * syy)


def write_truth(result: SimResult) -> str:
    lines = ["label,rate"]
    lines += [f"{label},{rate!r}" for label, rate in zip(result.dataset.meanings, result.truth)]
    return "\n".join(lines) + "\n"
