"""Deterministic, bit-reproducible sorting of IEEE-754 data.

Sorting follows the totalOrder of all bit patterns (-0 < +0, NaNs above
infinity ordered by payload), is stable, idempotent, and produces
byte-identical output regardless of thread count or memory budget.
"""

from .core import SortTrace, is_sorted, merge, merge_origins, sort, sort_indices, sort_with_trace
from .datagen import (
    CorpusSpec,
    DuplicateHeavy,
    Gaussian,
    SpecialValues,
    Uniform,
    generate,
    write_corpus,
)
from .errors import (
    ComputationError,
    FormatError,
    ReproSortError,
    RunIntegrityError,
    UsageError,
    WidthMismatchError,
)
from .external import (
    ExternalConfig,
    ExternalSummary,
    RunDescriptor,
    external_sort,
    form_runs,
    kway_merge,
)
from .metrics import (
    CurveKind,
    CurveSpec,
    DisorderReport,
    INDEX_LOG,
    INDEX_SQUARED,
    UNIT,
    VALUE_SQUARED,
    compute_report,
    curved_disorder,
    inversion_count,
    permutation_entropy_baseline,
    residual_tie_entropy,
)
from .order import (
    FloatArray,
    FloatValue,
    Width,
    cmp_total,
    decode_key,
    encode_key,
    inf_value,
    nan_value,
    value_equal,
    zero_value,
)
from .parallel import MergePlan, parallel_sort, plan_merge
from .repro import SequenceDigest, digest_file, digest_sequence

__version__ = "0.1.0"

__all__ = [
    "ComputationError",
    "CorpusSpec",
    "CurveKind",
    "CurveSpec",
    "DisorderReport",
    "DuplicateHeavy",
    "ExternalConfig",
    "ExternalSummary",
    "FloatArray",
    "FloatValue",
    "FormatError",
    "Gaussian",
    "INDEX_LOG",
    "INDEX_SQUARED",
    "MergePlan",
    "ReproSortError",
    "RunDescriptor",
    "RunIntegrityError",
    "SequenceDigest",
    "SortTrace",
    "SpecialValues",
    "UNIT",
    "Uniform",
    "UsageError",
    "VALUE_SQUARED",
    "Width",
    "WidthMismatchError",
    "cmp_total",
    "compute_report",
    "curved_disorder",
    "decode_key",
    "digest_file",
    "digest_sequence",
    "encode_key",
    "external_sort",
    "form_runs",
    "generate",
    "inf_value",
    "inversion_count",
    "is_sorted",
    "kway_merge",
    "merge",
    "merge_origins",
    "nan_value",
    "parallel_sort",
    "permutation_entropy_baseline",
    "plan_merge",
    "residual_tie_entropy",
    "sort",
    "sort_indices",
    "sort_with_trace",
    "value_equal",
    "write_corpus",
    "zero_value",
]
