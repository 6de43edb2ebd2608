"""Word-list ingestion: normalization, the TSV dataset format, validation.

A dataset is a languages x meanings table. Each cell holds one or more
synonym forms, or nothing when the word is missing for that language.

TSV layout::

    meaning<TAB>Italian<TAB>French
    HAND<TAB>mano<TAB>main
    STONE<TAB>pietra, sasso<TAB>pierre
"""
from __future__ import annotations

import re
import unicodedata
from types import MappingProxyType
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .errors import DuplicateLanguage, DuplicateMeaning, EmptyDataset, RaggedRow

SYNONYM_SEPARATORS = re.compile(r"[,;]")
HEADER_KEY = "meaning"


@dataclass(frozen=True)
class NormalizationConfig:
    fold_diacritics: bool = True


DEFAULT_NORMALIZATION = NormalizationConfig()


def _fold(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return unicodedata.normalize("NFC", stripped)


def normalize_word(raw: str, config: NormalizationConfig = DEFAULT_NORMALIZATION) -> Optional[str]:
    """Canonical form of a transcribed word, or None if nothing is left.

    NFC composition, lowercasing, optional diacritic folding, then trimming.
    Lowercasing can emit decomposed sequences, so the result is recomposed.
    """
    text = unicodedata.normalize("NFC", raw)
    text = unicodedata.normalize("NFC", text.lower())
    if config.fold_diacritics:
        text = _fold(text)
    text = text.strip()
    return text or None


def canonical_label(raw: str) -> str:
    return unicodedata.normalize("NFC", raw).strip().upper()


def split_cell(cell: str, config: NormalizationConfig = DEFAULT_NORMALIZATION) -> tuple[str, ...]:
    forms = (normalize_word(part, config) for part in SYNONYM_SEPARATORS.split(cell))
    return tuple(f for f in forms if f is not None)


@dataclass(frozen=True)
class FamilyDataset:
    """Immutable languages x meanings table of word forms.

    ``entries`` maps ``(language_index, meaning_index)`` to a non-empty tuple
    of forms; an absent key is missing data.
    """

    languages: tuple[str, ...]
    meanings: tuple[str, ...]
    entries: Mapping[tuple[int, int], tuple[str, ...]]
    name: str = "family"

    def __post_init__(self):
        object.__setattr__(self, "languages", tuple(self.languages))
        object.__setattr__(self, "meanings", tuple(canonical_label(m) for m in self.meanings))
        if len(self.languages) < 2 or len(self.meanings) < 1:
            raise EmptyDataset(
                f"need at least 2 languages and 1 meaning, got N={len(self.languages)}, M={len(self.meanings)}"
            )
        _check_unique(self.languages, DuplicateLanguage, "language")
        _check_unique(self.meanings, DuplicateMeaning, "meaning")
        clean = {}
        for (a, i), forms in self.entries.items():
            if not (0 <= a < len(self.languages) and 0 <= i < len(self.meanings)):
                raise IndexError(f"entry key {(a, i)} outside the {self.n_languages}x{self.n_meanings} table")
            forms = tuple(forms)
            if forms:
                clean[(a, i)] = forms
        object.__setattr__(self, "entries", MappingProxyType(clean))

    def __reduce__(self):
        return (type(self), (self.languages, self.meanings, dict(self.entries), self.name))

    @property
    def n_languages(self) -> int:
        return len(self.languages)

    @property
    def n_meanings(self) -> int:
        return len(self.meanings)

    def forms(self, language: int, meaning: int) -> Optional[tuple[str, ...]]:
        return self.entries.get((language, meaning))

    def language_index(self, name: str) -> int:
        return self.languages.index(name)

    def meaning_index(self, label: str) -> int:
        return self.meanings.index(canonical_label(label))

    def permute_languages(self, order: Iterable[int]) -> "FamilyDataset":
        """Dataset with languages reordered so that new position k holds old ``order[k]``."""
        order = list(order)
        inverse = {old: new for new, old in enumerate(order)}
        entries = {(inverse[a], i): f for (a, i), f in self.entries.items()}
        return FamilyDataset(tuple(self.languages[o] for o in order), self.meanings, entries, self.name)


def _check_unique(items, error, what):
    seen = set()
    for item in items:
        if item in seen:
            raise error(f"duplicate {what} {item!r}")
        seen.add(item)


def parse_dataset(
    source: str,
    config: NormalizationConfig = DEFAULT_NORMALIZATION,
    name: str = "family",
) -> FamilyDataset:
    lines = [line.rstrip("\r") for line in source.lstrip("\ufeff").split("\n")]
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise EmptyDataset("no header row")
    header = lines[0].split("\t")
    languages = tuple(h.strip() for h in header[1:])
    _check_unique(languages, DuplicateLanguage, "language")

    meanings = []
    entries = {}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(header):
            raise RaggedRow(f"line {lineno}: {len(cells)} cells under a {len(header)}-column header")
        meaning = len(meanings)
        meanings.append(canonical_label(cells[0]))
        for language, cell in enumerate(cells[1:]):
            forms = split_cell(cell, config)
            if forms:
                entries[(language, meaning)] = forms
    return FamilyDataset(languages, tuple(meanings), entries, name)


def write_dataset(dataset: FamilyDataset) -> str:
    """Serialize to the TSV format read by :func:`parse_dataset`."""
    rows = ["\t".join((HEADER_KEY,) + dataset.languages)]
    for i, label in enumerate(dataset.meanings):
        cells = [label]
        for a in range(dataset.n_languages):
            forms = dataset.forms(a, i) or ()
            for form in forms:
                if SYNONYM_SEPARATORS.search(form) or "\t" in form or "\n" in form:
                    raise ValueError(f"form {form!r} cannot be written: contains a separator")
            cells.append(", ".join(forms))
        rows.append("\t".join(cells))
    return "\n".join(rows) + "\n"


def read_dataset(path, config: NormalizationConfig = DEFAULT_NORMALIZATION) -> FamilyDataset:
    from pathlib import Path

    path = Path(path)
    return parse_dataset(path.read_text(encoding="utf-8"), config, name=path.stem)


@dataclass
class ValidationReport:
    n_languages: int
    n_meanings: int
    missing: list[tuple[str, str]] = field(default_factory=list)
    missing_by_language: dict[str, int] = field(default_factory=dict)
    missing_by_meaning: dict[str, int] = field(default_factory=dict)
    pair_coverage: dict[str, int] = field(default_factory=dict)
    low_coverage: list[str] = field(default_factory=list)

    @property
    def n_missing(self) -> int:
        return len(self.missing)


def validate(dataset: FamilyDataset, min_coverage: int = 1) -> ValidationReport:
    """Summarize gaps; meanings with fewer than ``min_coverage`` defined pairs are flagged."""
    report = ValidationReport(dataset.n_languages, dataset.n_meanings)
    report.missing_by_language = dict.fromkeys(dataset.languages, 0)
    for i, label in enumerate(dataset.meanings):
        present = 0
        for a, language in enumerate(dataset.languages):
            if dataset.forms(a, i) is None:
                report.missing.append((language, label))
                report.missing_by_language[language] += 1
            else:
                present += 1
        report.missing_by_meaning[label] = dataset.n_languages - present
        pairs = present * (present - 1) // 2
        report.pair_coverage[label] = pairs
        if pairs < min_coverage:
            report.low_coverage.append(label)
    return report


def defined_pairs(dataset: FamilyDataset, meaning: int) -> list[tuple[int, int]]:
    present = [a for a in range(dataset.n_languages) if dataset.forms(a, meaning) is not None]
    return list(combinations(present, 2))
