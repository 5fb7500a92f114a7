"""Quality auditing, cleaning and splitting for function-level
vulnerability datasets.

The package measures five data-quality attributes over C/C++ function
corpora (accuracy, uniqueness, consistency, completeness, currentness),
finds exact and near-miss code clones at scale, applies the cleaning
operations those findings motivate, and provides the statistical helpers
the review workflow needs.  ``vulnaudit.cli`` exposes the same workflows
as a command-line tool.
"""

from .corpus import (
    Attribute,
    AttributeScore,
    AuditError,
    CodeSample,
    Dataset,
    DatasetFormatError,
    InsufficientDataError,
    Label,
    ScoreBasis,
    ScoreUndefinedError,
    attribute_score,
)
from .lexer import (
    CompletenessClass,
    EndedInside,
    Token,
    TokenKind,
    TokenStream,
    classify_completeness,
    tokenize,
)
from .clones import (
    CloneCluster,
    CloneConfig,
    CloneSketch,
    CloneTier,
    Fingerprint,
    cluster,
    is_type3_pair,
    load_clusters,
    multiset_jaccard,
    save_clusters,
    set_jaccard,
    sketch,
    type1_fingerprint,
    type2_fingerprint,
)
from .metrics import (
    CurrentnessDetail,
    QualityReport,
    UniquenessConvention,
    audit,
    completeness,
    consistency,
    currentness,
    date_halves,
    jensen_shannon_divergence,
    token_distribution,
    uniqueness,
)
from .review import (
    ReasonTag,
    ReviewEntry,
    ReviewSheet,
    ReviewStateError,
    Verdict,
    accuracy_score,
    cochran_sample_size,
    cohen_kappa,
    sample_for_review,
)
from .cleaning import (
    CleaningScope,
    RemovalRecord,
    SplitAssignment,
    SplitProtocol,
    deduplicate,
    drop_incomplete,
    enforce_consistency,
    load_removal_log,
    load_split,
    random_split,
    remove_cross_set_duplicates,
    save_removal_log,
    save_split,
    temporal_split,
)
from .ingestion import ValidationSummary, load_dataset, save_dataset, validate
from .stats import (
    DegenerateInputError,
    kendall_tau,
    mann_whitney_u,
    mcc,
    normal_quantile,
)
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "AttributeScore",
    "AuditError",
    "CodeSample",
    "Dataset",
    "DatasetFormatError",
    "InsufficientDataError",
    "Label",
    "ScoreBasis",
    "ScoreUndefinedError",
    "attribute_score",
    "CompletenessClass",
    "EndedInside",
    "Token",
    "TokenKind",
    "TokenStream",
    "classify_completeness",
    "tokenize",
    "CloneCluster",
    "CloneConfig",
    "CloneSketch",
    "CloneTier",
    "Fingerprint",
    "cluster",
    "is_type3_pair",
    "load_clusters",
    "multiset_jaccard",
    "save_clusters",
    "set_jaccard",
    "sketch",
    "type1_fingerprint",
    "type2_fingerprint",
    "CurrentnessDetail",
    "QualityReport",
    "UniquenessConvention",
    "audit",
    "completeness",
    "consistency",
    "currentness",
    "date_halves",
    "jensen_shannon_divergence",
    "token_distribution",
    "uniqueness",
    "ReasonTag",
    "ReviewEntry",
    "ReviewSheet",
    "ReviewStateError",
    "Verdict",
    "accuracy_score",
    "cochran_sample_size",
    "cohen_kappa",
    "sample_for_review",
    "CleaningScope",
    "RemovalRecord",
    "SplitAssignment",
    "SplitProtocol",
    "deduplicate",
    "drop_incomplete",
    "enforce_consistency",
    "load_removal_log",
    "load_split",
    "random_split",
    "remove_cross_set_duplicates",
    "save_removal_log",
    "save_split",
    "temporal_split",
    "ValidationSummary",
    "load_dataset",
    "save_dataset",
    "validate",
    "DegenerateInputError",
    "kendall_tau",
    "mann_whitney_u",
    "mcc",
    "normal_quantile",
    "KERNEL_BACKEND",
    "__version__",
]
