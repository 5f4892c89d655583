"""Command-line front end for the analysis pipeline.

Subcommands: validate, summary, segment, sweep, extdist, conflicts,
render, synth, selftest, adapt-sharelatex. Exit codes: 0 success,
1 usage error, 2 data error (unreadable/empty/invalid input). Output is
deterministic: identical invocations on identical inputs produce
byte-identical files, independent of --jobs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
from pathlib import Path

from . import __version__
from ._util import map_ordered
from .clustering import Window, parse_window
from .conflicts import survey_corpus
from .durations import duration_label, parse_duration_ms
from .gap_analysis import (
    DEFAULT_GAPS_MS,
    DEFAULT_INTERVAL_BOUNDS_MS,
    external_distribution,
    recommend_gap,
    sweep,
)
from .log_model import (
    DocSummary,
    EditLog,
    ValidationIssue,
    ValidationReport,
    corpus_summary,
    emit_canonical,
    normalize,
    parse_canonical,
)
from .oracles import compare_document
from .render import DEFAULT_WINDOW, build_scene, render_svg
from .report import ReportBundle, render_bytes
from .segmentation import segment
from .sharelatex import convert_sharelatex, records_to_canonical
from .synth import SplitMix64, SynthConfig, generate, random_log, truth_to_json

PAPER_WINDOWS = (Window(30_000, 10), Window(10_000, 5), Window(60_000, 20))
SELFTEST_GAPS_MS = (30_000, 60_000, 120_000, 300_000, 420_000, 900_000)


class DataError(Exception):
    """Input problem: unreadable file, empty corpus, infeasible request."""


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str) -> None:
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(self, message)


def _duration_arg(text: str) -> int:
    try:
        return parse_duration_ms(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _duration_list_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(parse_duration_ms(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _window_arg(text: str) -> Window:
    try:
        return parse_window(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _window_list_arg(text: str) -> tuple[Window, ...]:
    try:
        return tuple(parse_window(part) for part in text.split(";") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _add_common(p: argparse.ArgumentParser, *, formats: bool = True) -> None:
    p.add_argument("inputs", nargs="+", metavar="PATH", help="log files or directories of *.jsonl")
    if formats:
        p.add_argument("--format", choices=("csv", "json", "md"), default="csv")
        p.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")
    p.add_argument(
        "--jobs",
        type=_positive_int,
        default=None,
        help="parallel document workers (default: CE_TRACE_JOBS or 1)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="cetrace", description=__doc__)
    parser.add_argument("--version", action="version", version=f"cetrace {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("validate", help="ingest logs and report validation issues")
    _add_common(p, formats=False)
    p.set_defaults(func=_run_validate)

    p = sub.add_parser("summary", help="corpus overview table")
    _add_common(p)
    p.set_defaults(func=_run_summary)

    p = sub.add_parser("segment", help="per-document sessions under one gap")
    _add_common(p)
    p.add_argument("--gap", type=_duration_arg, default=30_000, help="maximum time gap (default 30s)")
    p.set_defaults(func=_run_segment)

    p = sub.add_parser("sweep", help="segmentation metrics across candidate gaps")
    _add_common(p)
    p.add_argument(
        "--gaps",
        type=_duration_list_arg,
        default=None,
        help="comma-separated gaps (default 15mn,7mn,5mn,2mn,1mn,30s)",
    )
    p.add_argument(
        "--normalize-scope",
        choices=("session", "doc"),
        default="session",
        help="divisor for normalized CAS edit counts",
    )
    p.set_defaults(func=_run_sweep)

    p = sub.add_parser("extdist", help="external-distance distribution at a base gap")
    _add_common(p)
    p.add_argument("--gap", type=_duration_arg, default=30_000, help="base gap (default 30s)")
    p.add_argument(
        "--intervals",
        type=_duration_list_arg,
        default=None,
        help="comma-separated interval bounds, first must equal the gap",
    )
    p.add_argument("--recommend", action="store_true", help="add a gap recommendation section")
    p.set_defaults(func=_run_extdist)

    p = sub.add_parser("conflicts", help="border/insertion conflict tables per window")
    _add_common(p)
    p.add_argument("--gap", type=_duration_arg, default=30_000, help="base gap (default 30s)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--window", type=_window_arg, default=None, help="single window 't,p' such as 30s,10c")
    group.add_argument(
        "--windows",
        type=_window_list_arg,
        default=None,
        help="semicolon-separated windows (default '30s,10c;10s,5c;60s,20c')",
    )
    p.add_argument(
        "--strict-def3",
        action="store_true",
        help="accept only the increasing-position orientation in border conflicts",
    )
    p.set_defaults(func=_run_conflicts)

    p = sub.add_parser("render", help="one time-position SVG per document")
    p.add_argument("inputs", nargs="+", metavar="PATH")
    p.add_argument("--gap", type=_duration_arg, default=30_000)
    p.add_argument("--window", type=_window_arg, default=DEFAULT_WINDOW)
    p.add_argument("--width", type=_positive_int, default=900)
    p.add_argument("--height", type=_positive_int, default=500)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--jobs", type=_positive_int, default=None)
    p.set_defaults(func=_run_render)

    p = sub.add_parser("synth", help="generate fixture logs with ground truth")
    p.add_argument("--seed", type=_nonnegative_int, default=1)
    p.add_argument("--docs", type=_positive_int, default=1)
    p.add_argument("--sessions", type=_positive_int, default=2)
    p.add_argument("--ops", type=_nonnegative_int, default=8, help="filler ops per session")
    p.add_argument("--authors", type=_positive_int, default=2)
    p.add_argument("--gap", type=_duration_arg, default=300_000)
    p.add_argument("--window", type=_window_arg, default=Window(30_000, 10))
    p.add_argument("--border", type=_nonnegative_int, default=0, help="planted border conflicts per doc")
    p.add_argument("--insertion", type=_nonnegative_int, default=0, help="planted insertion conflicts per doc")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.set_defaults(func=_run_synth)

    p = sub.add_parser("selftest", help="oracle-equivalence property run")
    p.add_argument("--seeds", type=_positive_int, default=250)
    p.add_argument("--max-ops", type=_positive_int, default=120)
    p.add_argument("--jobs", type=_positive_int, default=None)
    p.set_defaults(func=_run_selftest)

    p = sub.add_parser(
        "adapt-sharelatex", help="convert ShareLaTeX history exports to the canonical format"
    )
    p.add_argument("inputs", nargs="+", metavar="EXPORT")
    p.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")
    p.set_defaults(func=_run_adapt)

    return parser


def _resolve_jobs(args: argparse.Namespace) -> int:
    jobs = getattr(args, "jobs", None)
    if jobs is not None:
        return jobs
    raw = os.environ.get("CE_TRACE_JOBS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise DataError(f"CE_TRACE_JOBS must be a positive integer, got {raw!r}")
    if value < 1:
        raise DataError(f"CE_TRACE_JOBS must be a positive integer, got {raw!r}")
    return value


def _input_files(inputs: list[str]) -> list[Path]:
    files: list[Path] = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            found = sorted(path.glob("*.jsonl"))
            if not found:
                raise DataError(f"no *.jsonl files in directory {path}")
            files.extend(found)
        elif path.is_file():
            files.append(path)
        else:
            raise DataError(f"no such file or directory: {path}")
    return files


def _load_corpus(inputs: list[str]) -> tuple[list[EditLog], ValidationReport, str]:
    """Read, parse and merge all inputs; returns corpus, report, digest."""
    files = _input_files(inputs)
    digest = hashlib.sha256()
    merged = ValidationReport()
    by_doc: dict[str, list[EditLog]] = {}
    order: list[str] = []
    multi = len(files) > 1
    for path in files:
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}")
        digest.update(data)
        logs, report = parse_canonical(data)
        prefix = f"{path.name}: " if multi else ""
        merged.record_count += report.record_count
        merged.errors.extend(
            ValidationIssue(i.line, prefix + i.reason) for i in report.errors
        )
        merged.warnings.extend(prefix + w for w in report.warnings)
        for log in logs:
            if log.doc_id not in by_doc:
                by_doc[log.doc_id] = []
                order.append(log.doc_id)
            by_doc[log.doc_id].append(log)
    corpus: list[EditLog] = []
    for doc_id in order:
        parts = by_doc[doc_id]
        if len(parts) == 1:
            log = parts[0]
        else:
            ops = [op for part in parts for op in part.ops]
            log = normalize(EditLog.from_ops(doc_id, ops))
        corpus.append(log)
        merged.docs.append(
            DocSummary(doc_id, len(log.author_names), len(log), log.amount_of_edit)
        )
    return corpus, merged, digest.hexdigest()


def _require_docs(corpus: list[EditLog]) -> None:
    if not corpus:
        raise DataError("empty corpus: no valid records in the inputs")


def _metadata(command: str, corpus: list[EditLog], digest: str, params: dict[str, str]) -> dict[str, str]:
    meta = {
        "tool": f"cetrace {__version__}",
        "command": command,
        "documents": str(len(corpus)),
        "input_sha256": digest,
    }
    for key, value in params.items():
        meta[key] = value
    return meta


def _write(data: bytes, out: Path | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(data.decode("utf-8"))
        return
    out.mkdir(parents=True, exist_ok=True)
    target = out / filename
    target.write_bytes(data)
    print(f"wrote {target}")


def _warn_validation(report: ValidationReport) -> None:
    if report.errors:
        print(
            f"warning: {len(report.errors)} malformed records were skipped "
            "(run 'cetrace validate' for details)",
            file=sys.stderr,
        )


def _run_validate(args: argparse.Namespace) -> int:
    corpus, report, _ = _load_corpus(args.inputs)
    print(f"records: {report.record_count}")
    print(f"documents: {len(corpus)}")
    for doc in report.docs:
        print(
            f"  {doc.doc_id}: edits={doc.edits} authors={doc.authors} "
            f"amount={doc.amount_of_edit}"
        )
    for warning in report.warnings:
        print(f"warning: {warning}")
    for issue in report.errors:
        print(f"error: line {issue.line}: {issue.reason}")
    if report.errors:
        print(f"validation failed: {len(report.errors)} bad records")
        return 2
    print("validation passed")
    return 0


def _run_summary(args: argparse.Namespace) -> int:
    corpus, report, digest = _load_corpus(args.inputs)
    _require_docs(corpus)
    _warn_validation(report)
    bundle = ReportBundle(
        _metadata("summary", corpus, digest, {}), corpus=corpus_summary(corpus)
    )
    _write(render_bytes(bundle, args.format), args.out, f"summary.{args.format}")
    return 0


def _run_segment(args: argparse.Namespace) -> int:
    corpus, report, digest = _load_corpus(args.inputs)
    _require_docs(corpus)
    _warn_validation(report)
    header = [
        "doc",
        "session",
        "kind",
        "start_ts_ms",
        "end_ts_ms",
        "ops",
        "authors",
        "length_s",
    ]
    rows: list[list[str]] = []
    jobs = _resolve_jobs(args)
    for sessions in map_ordered(lambda log: segment(log, args.gap), corpus, jobs):
        for s in sessions:
            rows.append(
                [
                    s.doc_id,
                    str(s.index),
                    s.kind.value,
                    str(s.start_ts),
                    str(s.end_ts),
                    str(s.n_ops),
                    str(s.author_count),
                    f"{(s.end_ts - s.start_ts) / 1000.0:.2f}",
                ]
            )
    meta = _metadata("segment", corpus, digest, {"gap": duration_label(args.gap)})
    if args.format == "json":
        obj = {
            "metadata": meta,
            "sessions": [dict(zip(header, row)) for row in rows],
        }
        data = (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    elif args.format == "md":
        lines = ["## sessions", ""]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join([" --- "] * len(header)) + "|")
        lines.extend("| " + " | ".join(row) + " |" for row in rows)
        lines.append("")
        data = "\n".join(lines).encode("utf-8")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(["# sessions"])
        writer.writerow(header)
        writer.writerows(rows)
        data = buf.getvalue().encode("utf-8")
    _write(data, args.out, f"sessions.{args.format}")
    return 0


def _run_sweep(args: argparse.Namespace) -> int:
    corpus, report, digest = _load_corpus(args.inputs)
    _require_docs(corpus)
    _warn_validation(report)
    gaps = args.gaps if args.gaps else DEFAULT_GAPS_MS
    rows = sweep(
        corpus,
        gaps,
        normalize_scope=args.normalize_scope,
        jobs=_resolve_jobs(args),
    )
    meta = _metadata(
        "sweep",
        corpus,
        digest,
        {
            "gaps": ",".join(duration_label(g) for g in gaps),
            "normalize_scope": args.normalize_scope,
        },
    )
    bundle = ReportBundle(meta, sweep=tuple(rows))
    _write(render_bytes(bundle, args.format), args.out, f"sweep.{args.format}")
    return 0


def _run_extdist(args: argparse.Namespace) -> int:
    corpus, report, digest = _load_corpus(args.inputs)
    _require_docs(corpus)
    _warn_validation(report)
    bounds = args.intervals if args.intervals else DEFAULT_INTERVAL_BOUNDS_MS
    hist = external_distribution(corpus, args.gap, bounds, jobs=_resolve_jobs(args))
    recommendation = recommend_gap(hist) if args.recommend else None
    meta = _metadata(
        "extdist",
        corpus,
        digest,
        {
            "gap": duration_label(args.gap),
            "intervals": ",".join(duration_label(b) for b in bounds),
        },
    )
    bundle = ReportBundle(meta, histogram=hist, recommendation=recommendation)
    _write(render_bytes(bundle, args.format), args.out, f"extdist.{args.format}")
    return 0


def _run_conflicts(args: argparse.Namespace) -> int:
    corpus, report, digest = _load_corpus(args.inputs)
    _require_docs(corpus)
    _warn_validation(report)
    if args.windows:
        windows = args.windows
    elif args.window:
        windows = (args.window,)
    else:
        windows = PAPER_WINDOWS
    tables = survey_corpus(
        corpus,
        windows,
        args.gap,
        strict_def3=args.strict_def3,
        jobs=_resolve_jobs(args),
    )
    meta = _metadata(
        "conflicts",
        corpus,
        digest,
        {
            "gap": duration_label(args.gap),
            "windows": ";".join(w.label() for w in windows),
            "strict_def3": "true" if args.strict_def3 else "false",
        },
    )
    bundle = ReportBundle(meta, conflict_tables=tuple(tables))
    _write(render_bytes(bundle, args.format), args.out, f"conflicts.{args.format}")
    return 0


def _sanitize(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9._-]", "_", name)
    return cleaned or "doc"


def _run_render(args: argparse.Namespace) -> int:
    corpus, report, _ = _load_corpus(args.inputs)
    _require_docs(corpus)
    _warn_validation(report)
    jobs = _resolve_jobs(args)
    scenes = map_ordered(
        lambda log: build_scene(log, args.gap, args.window), corpus, jobs
    )
    args.out.mkdir(parents=True, exist_ok=True)
    taken: set[str] = set()
    for scene in scenes:
        stem = _sanitize(scene.doc_id)
        name = f"{stem}.svg"
        k = 1
        while name in taken:
            name = f"{stem}-{k}.svg"
            k += 1
        taken.add(name)
        target = args.out / name
        target.write_text(render_svg(scene, args.width, args.height), encoding="utf-8")
        print(f"wrote {target}")
    return 0


def _run_synth(args: argparse.Namespace) -> int:
    rng = SplitMix64(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for i in range(args.docs):
        config = SynthConfig(
            seed=rng.next_u64(),
            doc_id=f"synth-{i:03d}",
            n_sessions=args.sessions,
            filler_ops=args.ops,
            n_authors=args.authors,
            gap_ms=args.gap,
            window=args.window,
            border_conflicts=args.border,
            insertion_conflicts=args.insertion,
        )
        try:
            log, truth = generate(config)
        except ValueError as exc:
            raise DataError(str(exc))
        log_path = args.out / f"{config.doc_id}.jsonl"
        truth_path = args.out / f"{config.doc_id}.truth.json"
        log_path.write_bytes(emit_canonical([log]))
        truth_path.write_bytes(truth_to_json(truth))
        print(f"wrote {log_path}")
        print(f"wrote {truth_path}")
    return 0


def _run_selftest(args: argparse.Namespace) -> int:
    jobs = _resolve_jobs(args)

    def check(seed: int) -> list[str]:
        log = random_log(seed, max_ops=args.max_ops)
        gap = SELFTEST_GAPS_MS[seed % len(SELFTEST_GAPS_MS)]
        window = PAPER_WINDOWS[seed % len(PAPER_WINDOWS)]
        strict = seed % 2 == 1
        return compare_document(log, gap, window, strict_def3=strict)

    mismatches = [
        line
        for result in map_ordered(check, range(args.seeds), jobs)
        for line in result
    ]
    print(f"selftest: {args.seeds} documents checked, {len(mismatches)} mismatches")
    for line in mismatches:
        print(f"mismatch: {line}")
    return 1 if mismatches else 0


def _run_adapt(args: argparse.Namespace) -> int:
    files = _input_files(args.inputs)
    all_records: list[dict] = []
    for path in files:
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}")
        try:
            records, warnings = convert_sharelatex(data, default_doc=path.stem)
        except (ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}: {exc}")
        for warning in warnings:
            print(f"warning: {path.name}: {warning}", file=sys.stderr)
        all_records.extend(records)
    data = records_to_canonical(all_records)
    _write(data, args.out, "adapted.jsonl")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc.parser.format_usage(), end="", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version print and exit 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main(sys.argv[1:]))
