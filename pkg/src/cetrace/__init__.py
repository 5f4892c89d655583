"""Analysis toolkit for collaborative-editing operation logs.

Ingests line-delimited JSON edit logs, segments them into single- and
co-author sessions under a maximum time gap, clusters edits in
time-position windows, detects border and insertion conflicts, and emits
deterministic reports and figures. Hot kernels run under numba when
available, with a pure-numpy fallback selected by CE_TRACE_BACKEND.
"""

__version__ = "0.1.0"

from .clustering import Cluster, Window, clusterize, parse_window
from .conflicts import (
    BorderCase,
    ConflictTable,
    ConflictTypeStats,
    InsertionCase,
    Outcome,
    conflict_survey,
    evaluate_border,
    evaluate_insertion,
    find_border_cases,
    find_insertion_cases,
    survey_corpus,
    survey_document,
)
from .durations import duration_label, parse_chars, parse_duration_ms
from .gap_analysis import (
    DEFAULT_GAPS_MS,
    DEFAULT_INTERVAL_BOUNDS_MS,
    ExternalDistanceHistogram,
    GapRecommendation,
    GapSweepRow,
    external_distribution,
    interval_labels,
    recommend_gap,
    sweep,
)
from .log_model import (
    Action,
    CorpusSummary,
    DocSummary,
    EditLog,
    EditOp,
    ValidationIssue,
    ValidationReport,
    corpus_summary,
    emit_canonical,
    normalize,
    parse_canonical,
)
from .render import Scene, build_scene, render_svg
from .report import ReportBundle, emit, from_json, render_bytes
from .segmentation import (
    Session,
    SessionKind,
    SessionStats,
    external_distances,
    segment,
    session_stats,
)
from .stats import IntervalEstimate, mean_ci
from .synth import GroundTruth, SplitMix64, SynthConfig, generate, random_log

__all__ = [
    "__version__",
    "Action",
    "BorderCase",
    "Cluster",
    "ConflictTable",
    "ConflictTypeStats",
    "CorpusSummary",
    "DEFAULT_GAPS_MS",
    "DEFAULT_INTERVAL_BOUNDS_MS",
    "DocSummary",
    "EditLog",
    "EditOp",
    "ExternalDistanceHistogram",
    "GapRecommendation",
    "GapSweepRow",
    "GroundTruth",
    "InsertionCase",
    "IntervalEstimate",
    "Outcome",
    "ReportBundle",
    "Scene",
    "Session",
    "SessionKind",
    "SessionStats",
    "SplitMix64",
    "SynthConfig",
    "ValidationIssue",
    "ValidationReport",
    "Window",
    "build_scene",
    "clusterize",
    "conflict_survey",
    "corpus_summary",
    "duration_label",
    "emit",
    "emit_canonical",
    "evaluate_border",
    "evaluate_insertion",
    "external_distances",
    "external_distribution",
    "find_border_cases",
    "find_insertion_cases",
    "from_json",
    "generate",
    "interval_labels",
    "mean_ci",
    "normalize",
    "parse_canonical",
    "parse_chars",
    "parse_duration_ms",
    "parse_window",
    "random_log",
    "recommend_gap",
    "render_bytes",
    "render_svg",
    "segment",
    "session_stats",
    "survey_corpus",
    "survey_document",
    "sweep",
]
