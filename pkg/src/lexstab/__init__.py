"""Word stability and language distances from normalized Levenshtein distance."""

__version__ = "0.1.0"

from .family import (
    LanguageDistanceMatrix,
    StabilityReport,
    distance_matrix,
    item_pair_distance,
    language_distance,
    separation_time,
    stability,
    stability_all,
)
from .lexicon import FamilyDataset, NormalizationConfig, normalize_word, parse_dataset, validate, write_dataset
from .metric import levenshtein, normalized_distance
from .phylogeny import Node, to_newick, upgma
from .ranking import (
    linear_fit,
    overlap_ratio,
    pearson_correlation,
    rank_curve,
    stability_histogram,
    top_n_overlap,
)
from .simulate import SimConfig, evolve, random_tree, recovery_score
