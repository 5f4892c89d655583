"""Report bundle assembly and deterministic CSV/JSON/Markdown emission.

One ReportBundle can carry any subset of sections: corpus summary, gap
sweep, external-distance histogram, gap recommendation, conflict tables,
plus metadata. Emission is byte-deterministic: fixed section order,
fixed 2-decimal formatting for percentages, seconds and characters, CRLF
line endings for CSV (RFC-4180), and sorted metadata keys. JSON carries
full-precision values and round-trips back into an equal bundle via
from_json.

Interval cells follow the clamped notation used throughout the tables:
a lower bound clamped to zero renders as "0" and an upper proportion
bound clamped to one renders as "100", e.g. "[0-5.04%]".
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

from .clustering import Window
from .conflicts import ConflictTable, ConflictTypeStats
from .durations import duration_label
from .gap_analysis import (
    CountShare,
    ExternalDistanceHistogram,
    GapRecommendation,
    GapSweepRow,
    interval_labels,
)
from .log_model import CorpusSummary, StatLine
from .stats import IntervalEstimate

FORMATS = ("csv", "json", "md")


@dataclass(frozen=True)
class ReportBundle:
    """Everything one report run produced, ready for any output format."""

    metadata: dict[str, str]
    corpus: CorpusSummary | None = None
    sweep: tuple[GapSweepRow, ...] | None = None
    histogram: ExternalDistanceHistogram | None = None
    recommendation: GapRecommendation | None = None
    conflict_tables: tuple[ConflictTable, ...] | None = None


def _f2(x: float) -> str:
    return f"{x:.2f}"


def _num(x: float | None) -> str:
    return "n/a" if x is None else _f2(x)


def _pct(x: float | None) -> str:
    return "n/a" if x is None else _f2(100.0 * x)


def _seconds(ms: float | None) -> str:
    return "n/a" if ms is None else _f2(ms / 1000.0)


def _ci_pct(est: IntervalEstimate | None) -> str:
    if est is None:
        return "n/a"
    lo = "0" if est.lo == 0.0 else _f2(est.lo * 100.0)
    hi = "100" if est.hi == 1.0 else _f2(est.hi * 100.0)
    return f"[{lo}-{hi}%]"


def _ci_unit(est: IntervalEstimate | None, scale: float, unit: str) -> str:
    if est is None:
        return "n/a"
    lo = "0" if est.lo == 0.0 else _f2(est.lo / scale)
    hi = _f2(est.hi / scale)
    return f"[{lo}-{hi}{unit}]"


def _mean_of(est: IntervalEstimate | None) -> float | None:
    return None if est is None else est.mean


def _ci_level(table: ConflictTable) -> int:
    for stats in (table.border, table.insertion):
        for est in (
            stats.potential_over_consider,
            stats.conflict_over_potential,
            stats.time_distance_ms,
            stats.position_distance,
        ):
            if est is not None:
                return round(est.level * 100)
    return 99


Rows = list[list[str]]
Section = tuple[str, Rows]


def _corpus_rows(summary: CorpusSummary) -> Rows:
    rows: Rows = [["documents", str(summary.n_docs)]]
    rows.append(["metric", "min", "max", "avg", "std"])
    for name, line in (
        ("authors", summary.authors),
        ("edits", summary.edits),
        ("amount_of_edit", summary.amount_of_edit),
    ):
        rows.append([name, _f2(line.min), _f2(line.max), _f2(line.avg), _f2(line.std)])
    return rows


def _sweep_rows(sweep: tuple[GapSweepRow, ...]) -> Rows:
    header = ["metric"] + [duration_label(row.gap_ms) for row in sweep]
    level = 99
    for row in sweep:
        est = row.internal_distance_sas_ms or row.internal_distance_cas_ms
        if est is not None:
            level = round(est.level * 100)
            break

    def line(name: str, cells: list[str]) -> list[str]:
        return [name] + cells

    rows: Rows = [header]
    rows.append(
        line(
            "docs_with_cas",
            [
                f"{r.docs_with_cas.count} ({_f2(100.0 * r.docs_with_cas.share)}%)"
                for r in sweep
            ],
        )
    )
    rows.append(line("cas_per_doc_avg", [_num(r.cas_per_doc_avg) for r in sweep]))
    rows.append(
        line(
            "cas_proportion_of_sessions_pct",
            [_pct(r.cas_proportion_of_sessions) for r in sweep],
        )
    )
    rows.append(
        line(
            "internal_distance_sas_s",
            [_seconds(_mean_of(r.internal_distance_sas_ms)) for r in sweep],
        )
    )
    rows.append(
        line(
            f"internal_distance_sas_ci{level}",
            [_ci_unit(r.internal_distance_sas_ms, 1000.0, "s") for r in sweep],
        )
    )
    rows.append(
        line(
            "internal_distance_cas_s",
            [_seconds(_mean_of(r.internal_distance_cas_ms)) for r in sweep],
        )
    )
    rows.append(
        line(
            f"internal_distance_cas_ci{level}",
            [_ci_unit(r.internal_distance_cas_ms, 1000.0, "s") for r in sweep],
        )
    )
    rows.append(
        line("session_length_sas_s", [_seconds(r.session_length_sas_ms) for r in sweep])
    )
    rows.append(
        line("session_length_cas_s", [_seconds(r.session_length_cas_ms) for r in sweep])
    )
    rows.append(line("edits_per_sas", [_num(r.edit_count_sas) for r in sweep]))
    rows.append(line("edits_per_cas", [_num(r.edit_count_cas) for r in sweep]))
    rows.append(
        line(
            "edits_per_cas_normalized",
            [_num(r.edit_count_cas_normalized) for r in sweep],
        )
    )
    return rows


def _histogram_rows(hist: ExternalDistanceHistogram) -> Rows:
    rows: Rows = [["base_gap", duration_label(hist.base_gap_ms)]]
    rows.append(
        ["documents_with_distances", f"{len(hist.per_doc)} of {hist.n_docs_total}"]
    )
    rows.append(["interval", "proportion_pct"])
    for label, share in zip(interval_labels(hist.bounds_ms), hist.corpus_avg):
        rows.append([label, _f2(100.0 * share)])
    return rows


def _recommendation_rows(rec: GapRecommendation, hist: ExternalDistanceHistogram | None) -> Rows:
    rows: Rows = [["recommended_gap", duration_label(rec.gap_ms)]]
    rows.append(["threshold_pct", _f2(100.0 * rec.threshold)])
    rows.append(["interval", "coverage_pct", "cumulative_pct"])
    if hist is not None:
        labels = interval_labels(hist.bounds_ms)
    else:
        labels = tuple(f"interval_{i}" for i in range(len(rec.coverage)))
    for label, cov, cum in zip(labels, rec.coverage, rec.cumulative):
        rows.append([label, _f2(100.0 * cov), _f2(100.0 * cum)])
    return rows


def _conflict_rows(table: ConflictTable) -> Rows:
    level = _ci_level(table)
    b, i = table.border, table.insertion
    rows: Rows = [["base_gap", duration_label(table.base_gap_ms)]]
    if table.note:
        rows.append(["note", table.note])
    rows.append(["metric", "border", "insertion"])
    rows.append(["consider_cases", str(b.n_consider), str(i.n_consider)])
    rows.append(["potential_cases", str(b.n_potential), str(i.n_potential)])
    rows.append(["conflict_cases", str(b.n_conflict), str(i.n_conflict)])
    rows.append(
        [
            "potential_over_consider_avg_pct",
            _pct(_mean_of(b.potential_over_consider)),
            _pct(_mean_of(i.potential_over_consider)),
        ]
    )
    rows.append(
        [
            f"potential_over_consider_ci{level}",
            _ci_pct(b.potential_over_consider),
            _ci_pct(i.potential_over_consider),
        ]
    )
    rows.append(
        [
            "conflict_over_potential_avg_pct",
            _pct(_mean_of(b.conflict_over_potential)),
            _pct(_mean_of(i.conflict_over_potential)),
        ]
    )
    rows.append(
        [
            f"conflict_over_potential_ci{level}",
            _ci_pct(b.conflict_over_potential),
            _ci_pct(i.conflict_over_potential),
        ]
    )
    rows.append(
        [
            "conflict_time_distance_avg_s",
            _seconds(_mean_of(b.time_distance_ms)),
            _seconds(_mean_of(i.time_distance_ms)),
        ]
    )
    rows.append(
        [
            f"conflict_time_distance_ci{level}_s",
            _ci_unit(b.time_distance_ms, 1000.0, "s"),
            _ci_unit(i.time_distance_ms, 1000.0, "s"),
        ]
    )
    rows.append(
        [
            "conflict_position_distance_avg_c",
            _num(_mean_of(b.position_distance)),
            _num(_mean_of(i.position_distance)),
        ]
    )
    rows.append(
        [
            f"conflict_position_distance_ci{level}_c",
            _ci_unit(b.position_distance, 1.0, "c"),
            _ci_unit(i.position_distance, 1.0, "c"),
        ]
    )
    return rows


def _sections(bundle: ReportBundle) -> list[Section]:
    sections: list[Section] = []
    sections.append(
        ("metadata", [[k, bundle.metadata[k]] for k in sorted(bundle.metadata)])
    )
    if bundle.corpus is not None:
        sections.append(("corpus_summary", _corpus_rows(bundle.corpus)))
    if bundle.sweep is not None:
        sections.append(("gap_sweep", _sweep_rows(bundle.sweep)))
    if bundle.histogram is not None:
        sections.append(("external_distances", _histogram_rows(bundle.histogram)))
    if bundle.recommendation is not None:
        sections.append(
            (
                "gap_recommendation",
                _recommendation_rows(bundle.recommendation, bundle.histogram),
            )
        )
    if bundle.conflict_tables is not None:
        for table in bundle.conflict_tables:
            sections.append((f"conflicts {table.window.label()}", _conflict_rows(table)))
    return sections


def _render_csv(bundle: ReportBundle) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    first = True
    for title, rows in _sections(bundle):
        if not first:
            writer.writerow([])
        first = False
        writer.writerow([f"# {title}"])
        for row in rows:
            writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def _render_md(bundle: ReportBundle) -> bytes:
    lines: list[str] = []
    for title, rows in _sections(bundle):
        lines.append(f"## {title}")
        lines.append("")
        width = max(len(r) for r in rows)
        padded = [r + [""] * (width - len(r)) for r in rows]
        header, body = padded[0], padded[1:]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join([" --- "] * width) + "|")
        for row in body:
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    return ("\n".join(lines)).encode("utf-8")


def _est_obj(est: IntervalEstimate | None) -> dict | None:
    if est is None:
        return None
    return {
        "mean": est.mean,
        "lo": est.lo,
        "hi": est.hi,
        "n": est.n,
        "level": est.level,
        "degenerate": est.degenerate,
    }


def _est_from(obj: dict | None) -> IntervalEstimate | None:
    if obj is None:
        return None
    return IntervalEstimate(
        obj["mean"], obj["lo"], obj["hi"], obj["n"], obj["level"], obj["degenerate"]
    )


def _statline_obj(line: StatLine) -> dict:
    return {"min": line.min, "max": line.max, "avg": line.avg, "std": line.std}


def _sweep_obj(row: GapSweepRow) -> dict:
    return {
        "gap_ms": row.gap_ms,
        "docs_with_cas": {
            "count": row.docs_with_cas.count,
            "total": row.docs_with_cas.total,
            "share": row.docs_with_cas.share,
        },
        "cas_per_doc_avg": row.cas_per_doc_avg,
        "cas_proportion_of_sessions": row.cas_proportion_of_sessions,
        "internal_distance_sas_ms": _est_obj(row.internal_distance_sas_ms),
        "internal_distance_cas_ms": _est_obj(row.internal_distance_cas_ms),
        "session_length_sas_ms": row.session_length_sas_ms,
        "session_length_cas_ms": row.session_length_cas_ms,
        "edit_count_sas": row.edit_count_sas,
        "edit_count_cas": row.edit_count_cas,
        "edit_count_cas_normalized": row.edit_count_cas_normalized,
    }


def _sweep_from(obj: dict) -> GapSweepRow:
    dw = obj["docs_with_cas"]
    return GapSweepRow(
        obj["gap_ms"],
        CountShare(dw["count"], dw["total"], dw["share"]),
        obj["cas_per_doc_avg"],
        obj["cas_proportion_of_sessions"],
        _est_from(obj["internal_distance_sas_ms"]),
        _est_from(obj["internal_distance_cas_ms"]),
        obj["session_length_sas_ms"],
        obj["session_length_cas_ms"],
        obj["edit_count_sas"],
        obj["edit_count_cas"],
        obj["edit_count_cas_normalized"],
    )


def _type_obj(stats: ConflictTypeStats) -> dict:
    return {
        "consider": stats.n_consider,
        "potential": stats.n_potential,
        "conflict": stats.n_conflict,
        "potential_over_consider": _est_obj(stats.potential_over_consider),
        "conflict_over_potential": _est_obj(stats.conflict_over_potential),
        "time_distance_ms": _est_obj(stats.time_distance_ms),
        "position_distance": _est_obj(stats.position_distance),
    }


def _type_from(obj: dict) -> ConflictTypeStats:
    return ConflictTypeStats(
        obj["consider"],
        obj["potential"],
        obj["conflict"],
        _est_from(obj["potential_over_consider"]),
        _est_from(obj["conflict_over_potential"]),
        _est_from(obj["time_distance_ms"]),
        _est_from(obj["position_distance"]),
    )


def _render_json(bundle: ReportBundle) -> bytes:
    obj: dict = {"metadata": {k: bundle.metadata[k] for k in sorted(bundle.metadata)}}
    if bundle.corpus is not None:
        obj["corpus_summary"] = {
            "n_docs": bundle.corpus.n_docs,
            "authors": _statline_obj(bundle.corpus.authors),
            "edits": _statline_obj(bundle.corpus.edits),
            "amount_of_edit": _statline_obj(bundle.corpus.amount_of_edit),
        }
    if bundle.sweep is not None:
        obj["gap_sweep"] = [_sweep_obj(row) for row in bundle.sweep]
    if bundle.histogram is not None:
        hist = bundle.histogram
        obj["external_distances"] = {
            "base_gap_ms": hist.base_gap_ms,
            "bounds_ms": list(hist.bounds_ms),
            "per_doc": [[doc, list(props)] for doc, props in hist.per_doc],
            "corpus_avg": list(hist.corpus_avg),
            "n_docs_total": hist.n_docs_total,
        }
    if bundle.recommendation is not None:
        rec = bundle.recommendation
        obj["gap_recommendation"] = {
            "gap_ms": rec.gap_ms,
            "threshold": rec.threshold,
            "interval_index": rec.interval_index,
            "coverage": list(rec.coverage),
            "cumulative": list(rec.cumulative),
        }
    if bundle.conflict_tables is not None:
        obj["conflict_tables"] = [
            {
                "window": {"t_ms": t.window.t_ms, "p": t.window.p},
                "base_gap_ms": t.base_gap_ms,
                "border": _type_obj(t.border),
                "insertion": _type_obj(t.insertion),
                "note": t.note,
            }
            for t in bundle.conflict_tables
        ]
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def from_json(data: bytes | str) -> ReportBundle:
    """Rebuild a bundle from its JSON emission (field-for-field equal)."""
    obj = json.loads(data)
    corpus = None
    if "corpus_summary" in obj:
        c = obj["corpus_summary"]
        corpus = CorpusSummary(
            c["n_docs"],
            StatLine(**c["authors"]),
            StatLine(**c["edits"]),
            StatLine(**c["amount_of_edit"]),
        )
    sweep = None
    if "gap_sweep" in obj:
        sweep = tuple(_sweep_from(row) for row in obj["gap_sweep"])
    histogram = None
    if "external_distances" in obj:
        h = obj["external_distances"]
        histogram = ExternalDistanceHistogram(
            h["base_gap_ms"],
            tuple(h["bounds_ms"]),
            tuple((doc, tuple(props)) for doc, props in h["per_doc"]),
            tuple(h["corpus_avg"]),
            h["n_docs_total"],
        )
    recommendation = None
    if "gap_recommendation" in obj:
        r = obj["gap_recommendation"]
        recommendation = GapRecommendation(
            r["gap_ms"],
            r["threshold"],
            r["interval_index"],
            tuple(r["coverage"]),
            tuple(r["cumulative"]),
        )
    tables = None
    if "conflict_tables" in obj:
        tables = tuple(
            ConflictTable(
                Window(t["window"]["t_ms"], t["window"]["p"]),
                t["base_gap_ms"],
                _type_from(t["border"]),
                _type_from(t["insertion"]),
                t["note"],
            )
            for t in obj["conflict_tables"]
        )
    return ReportBundle(obj["metadata"], corpus, sweep, histogram, recommendation, tables)


def render_bytes(bundle: ReportBundle, format: str) -> bytes:
    """Serialize a bundle to csv, json, or md bytes (pure function)."""
    if format == "csv":
        return _render_csv(bundle)
    if format == "json":
        return _render_json(bundle)
    if format in ("md", "markdown"):
        return _render_md(bundle)
    raise ValueError(f"unknown format: {format!r}")


def emit(bundle: ReportBundle, format: str, sink: BinaryIO | str | Path) -> int:
    """Write a bundle to a binary sink or path; returns bytes written."""
    data = render_bytes(bundle, format)
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            fh.write(data)
    else:
        sink.write(data)
    return len(data)
