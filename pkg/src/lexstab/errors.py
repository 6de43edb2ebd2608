"""Exception hierarchy.

Every error carries a short ``code`` used by the command line front end
for its ``error:<code>:`` diagnostics.
"""


class LexstabError(ValueError):
    code = "data"


class DuplicateLanguage(LexstabError):
    code = "duplicate-language"


class DuplicateMeaning(LexstabError):
    code = "duplicate-meaning"


class RaggedRow(LexstabError):
    code = "ragged-row"


class EmptyDataset(LexstabError):
    code = "empty-dataset"


class IndexOutOfBounds(LexstabError, IndexError):
    code = "index-out-of-bounds"


class NoSharedMeanings(LexstabError):
    code = "no-shared-meanings"


class SaturatedDistance(LexstabError):
    code = "saturated-distance"


class NonPositiveRate(LexstabError):
    code = "non-positive-rate"


class InvalidBinWidth(LexstabError):
    code = "invalid-bin-width"


class EmptyReport(LexstabError):
    code = "empty-report"


class RangeOutOfBounds(LexstabError):
    code = "range-out-of-bounds"


class DegenerateRange(LexstabError):
    code = "degenerate-range"


class InsufficientOverlap(LexstabError):
    code = "insufficient-overlap"


class ZeroVariance(LexstabError):
    code = "zero-variance"


class InvalidN(LexstabError):
    code = "invalid-n"


class InvalidMatrix(LexstabError):
    code = "invalid-matrix"


class InvalidLeafCount(LexstabError):
    code = "invalid-leaf-count"


class InvalidConfig(LexstabError):
    code = "invalid-config"


class InsufficientData(LexstabError):
    code = "insufficient-data"
