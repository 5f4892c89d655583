"""Corpus-level gap sweeps, external-distance distribution, gap choice.

The sweep reproduces the segmentation table shape: one column per
candidate gap, rows describing CAS prevalence, internal distances with
confidence intervals, session lengths and edit counts. The histogram
bins external distances at a base gap into left-closed right-open
intervals (the last interval is unbounded) and supports a simple
cumulative-coverage rule for recommending a gap.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from statistics import fmean
from typing import NamedTuple, Sequence

import numpy as np

from ._util import map_ordered
from .durations import duration_label
from .log_model import EditLog
from .segmentation import SessionKind, external_distances, segment
from .stats import IntervalEstimate, clamp_nonnegative, mean_ci

DEFAULT_GAPS_MS = (900_000, 420_000, 300_000, 120_000, 60_000, 30_000)
DEFAULT_INTERVAL_BOUNDS_MS = (
    30_000,
    60_000,
    120_000,
    180_000,
    240_000,
    300_000,
    420_000,
    900_000,
)


class CountShare(NamedTuple):
    """count out of total, with the ratio precomputed."""

    count: int
    total: int
    share: float


@dataclass(frozen=True)
class GapSweepRow:
    """One sweep column: every segmentation metric under one gap."""

    gap_ms: int
    docs_with_cas: CountShare
    cas_per_doc_avg: float | None
    cas_proportion_of_sessions: float | None
    internal_distance_sas_ms: IntervalEstimate | None
    internal_distance_cas_ms: IntervalEstimate | None
    session_length_sas_ms: float | None
    session_length_cas_ms: float | None
    edit_count_sas: float | None
    edit_count_cas: float | None
    edit_count_cas_normalized: float | None


class _DocGapMetrics(NamedTuple):
    n_sessions: int
    n_cas: int
    sas_dist_sum: int
    sas_dist_n: int
    cas_dist_sum: int
    cas_dist_n: int
    sas_len_sum: int
    sas_n: int
    cas_len_sum: int
    cas_n: int
    sas_edits: int
    cas_edits: int
    cas_norm_sum: float


def _doc_metrics(log: EditLog, gap_ms: int, normalize_scope: str) -> _DocGapMetrics:
    sessions = segment(log, gap_ms)
    doc_authors = len(log.author_names)
    n_cas = 0
    sas_dist_sum = sas_dist_n = cas_dist_sum = cas_dist_n = 0
    sas_len_sum = sas_n = cas_len_sum = cas_n = 0
    sas_edits = cas_edits = 0
    cas_norm_sum = 0.0
    for s in sessions:
        ts = log.ts[s.start : s.stop]
        dist = np.diff(ts)
        dist_sum = int(dist.sum())
        length = int(ts[-1] - ts[0])
        count = s.stop - s.start
        if s.kind is SessionKind.CAS:
            n_cas += 1
            cas_dist_sum += dist_sum
            cas_dist_n += dist.shape[0]
            cas_len_sum += length
            cas_n += 1
            cas_edits += count
            divisor = doc_authors if normalize_scope == "doc" else s.author_count
            cas_norm_sum += count / divisor
        else:
            sas_dist_sum += dist_sum
            sas_dist_n += dist.shape[0]
            sas_len_sum += length
            sas_n += 1
            sas_edits += count
    return _DocGapMetrics(
        len(sessions),
        n_cas,
        sas_dist_sum,
        sas_dist_n,
        cas_dist_sum,
        cas_dist_n,
        sas_len_sum,
        sas_n,
        cas_len_sum,
        cas_n,
        sas_edits,
        cas_edits,
        cas_norm_sum,
    )


def sweep(
    corpus: list[EditLog],
    gaps_ms: Sequence[int] = DEFAULT_GAPS_MS,
    *,
    normalize_scope: str = "session",
    cas_scope: str = "cas_docs",
    level: float = 0.99,
    jobs: int = 1,
) -> list[GapSweepRow]:
    """One row per candidate gap, averaged across documents.

    normalize_scope picks the divisor for normalized CAS edit counts:
    distinct authors in the session (default) or in the whole document.
    cas_scope picks the averaging population for CAS rows: documents
    having at least one CAS (default) or all documents.

    Raises:
        ValueError: on an empty corpus, empty/non-positive gaps, or an
            unknown scope value.
    """
    if not corpus:
        raise ValueError("empty corpus")
    if not gaps_ms or any(g <= 0 for g in gaps_ms):
        raise ValueError("gaps must be a non-empty list of positive durations")
    if len(set(gaps_ms)) != len(gaps_ms):
        raise ValueError("gaps must be distinct")
    if normalize_scope not in ("session", "doc"):
        raise ValueError(f"unknown normalize scope: {normalize_scope!r}")
    if cas_scope not in ("cas_docs", "all_docs"):
        raise ValueError(f"unknown cas scope: {cas_scope!r}")
    per_doc = map_ordered(
        lambda log: [_doc_metrics(log, g, normalize_scope) for g in gaps_ms],
        corpus,
        jobs,
    )
    rows = []
    total = len(corpus)
    for gi, gap_ms in enumerate(gaps_ms):
        metrics = [doc[gi] for doc in per_doc]
        cas_docs = [m for m in metrics if m.n_cas]
        pool = metrics if cas_scope == "all_docs" else cas_docs
        sas_dists = [m.sas_dist_sum / m.sas_dist_n for m in metrics if m.sas_dist_n]
        cas_dists = [m.cas_dist_sum / m.cas_dist_n for m in pool if m.cas_dist_n]
        sas_lens = [m.sas_len_sum / m.sas_n for m in metrics if m.sas_n]
        cas_lens = [m.cas_len_sum / m.cas_n for m in pool if m.cas_n]
        sas_edits = [m.sas_edits / m.sas_n for m in metrics if m.sas_n]
        cas_edits = [m.cas_edits / m.cas_n for m in pool if m.cas_n]
        cas_norm = [m.cas_norm_sum / m.cas_n for m in pool if m.cas_n]
        rows.append(
            GapSweepRow(
                gap_ms,
                CountShare(len(cas_docs), total, len(cas_docs) / total),
                fmean([m.n_cas for m in pool]) if pool else None,
                fmean([m.n_cas / m.n_sessions for m in pool]) if pool else None,
                clamp_nonnegative(mean_ci(sas_dists, level)) if sas_dists else None,
                clamp_nonnegative(mean_ci(cas_dists, level)) if cas_dists else None,
                fmean(sas_lens) if sas_lens else None,
                fmean(cas_lens) if cas_lens else None,
                fmean(sas_edits) if sas_edits else None,
                fmean(cas_edits) if cas_edits else None,
                fmean(cas_norm) if cas_norm else None,
            )
        )
    return rows


@dataclass(frozen=True)
class ExternalDistanceHistogram:
    """External-distance distribution at a base gap.

    Every distance lands in exactly one interval [bounds[i], bounds[i+1]),
    the last interval being unbounded. per_doc holds one proportion tuple
    per document that has at least one external distance; corpus_avg is
    the plain mean of those tuples per interval.
    """

    base_gap_ms: int
    bounds_ms: tuple[int, ...]
    per_doc: tuple[tuple[str, tuple[float, ...]], ...]
    corpus_avg: tuple[float, ...]
    n_docs_total: int


def interval_labels(bounds_ms: Sequence[int]) -> tuple[str, ...]:
    """Human-readable interval names such as '[30s, 60s)' and '[900s, )'."""
    labels = []
    for i, lo in enumerate(bounds_ms):
        if i + 1 < len(bounds_ms):
            labels.append(f"[{duration_label(lo)}, {duration_label(bounds_ms[i + 1])})")
        else:
            labels.append(f"[{duration_label(lo)}, )")
    return tuple(labels)


def external_distribution(
    corpus: list[EditLog],
    base_gap_ms: int = 30_000,
    bounds_ms: Sequence[int] = DEFAULT_INTERVAL_BOUNDS_MS,
    *,
    jobs: int = 1,
) -> ExternalDistanceHistogram:
    """Bin every document's external distances and average per interval.

    Documents with fewer than two sessions have no distances and are
    excluded from the averaging.

    Raises:
        ValueError: on an empty corpus or bounds not starting at the base
            gap or not strictly increasing.
    """
    if not corpus:
        raise ValueError("empty corpus")
    bounds = tuple(int(b) for b in bounds_ms)
    if not bounds or bounds[0] != base_gap_ms:
        raise ValueError("first interval bound must equal the base gap")
    if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
        raise ValueError("interval bounds must be strictly increasing")
    k = len(bounds)

    def doc_props(log: EditLog) -> tuple[str, tuple[float, ...]] | None:
        distances = external_distances(segment(log, base_gap_ms))
        if not distances:
            return None
        counts = [0] * k
        for d in distances:
            counts[bisect_right(bounds, d) - 1] += 1
        n = len(distances)
        return log.doc_id, tuple(c / n for c in counts)

    per_doc = tuple(p for p in map_ordered(doc_props, corpus, jobs) if p is not None)
    if per_doc:
        corpus_avg = tuple(
            fmean(props[i] for _, props in per_doc) for i in range(k)
        )
    else:
        corpus_avg = (0.0,) * k
    return ExternalDistanceHistogram(base_gap_ms, bounds, per_doc, corpus_avg, len(corpus))


@dataclass(frozen=True)
class GapRecommendation:
    """Chosen gap plus the coverage evidence behind it."""

    gap_ms: int
    threshold: float
    interval_index: int
    coverage: tuple[float, ...]
    cumulative: tuple[float, ...]


def recommend_gap(
    histogram: ExternalDistanceHistogram, threshold: float = 0.5
) -> GapRecommendation:
    """Pick the upper bound of the first interval prefix covering the threshold.

    Walking intervals in order, the recommendation is the upper bound of
    the interval at which cumulative corpus-average coverage first
    reaches the threshold. If that never happens before the unbounded
    last interval, the recommendation saturates at the last bound.

    Raises:
        ValueError: when the histogram has no contributing documents.
    """
    if not histogram.per_doc:
        raise ValueError("empty histogram")
    coverage = histogram.corpus_avg
    cumulative = []
    running = 0.0
    for c in coverage:
        running += c
        cumulative.append(running)
    bounds = histogram.bounds_ms
    index = len(bounds) - 1
    for i, cum in enumerate(cumulative):
        if cum >= threshold:
            index = i
            break
    gap = bounds[index + 1] if index + 1 < len(bounds) else bounds[-1]
    return GapRecommendation(gap, threshold, index, coverage, tuple(cumulative))
