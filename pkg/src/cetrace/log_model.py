"""Canonical edit-log model: ingestion, validation, normalization.

The wire format is UTF-8 line-delimited JSON, one record per line, with
fields `doc` (string), `ts` (integer milliseconds), `author` (string),
`action` ("ins" or "del"), `pos` (integer, 0-based), `len` (integer >= 1)
and optional `content` (string whose character count equals `len`).

In memory a document is an EditLog: parallel int64 numpy columns plus an
author code table, so the analysis kernels can run on raw arrays. Logs are
immutable after normalization and safe to share across threads.
"""

from __future__ import annotations

import enum
import json
import statistics
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, NamedTuple

import numpy as np


class Action(enum.Enum):
    """The two edit kinds carried by the log."""

    INSERTION = "ins"
    DELETION = "del"


_ACTION_CODE = {Action.INSERTION: 0, Action.DELETION: 1}
_CODE_ACTION = {0: Action.INSERTION, 1: Action.DELETION}


@dataclass(frozen=True)
class EditOp:
    """One edit: who changed what, where, and when.

    pos is the recorded character index at edit time (no retroactive
    adjustment for earlier edits' shifts); for deletions it is the start
    of the deleted range. length counts characters and is at least 1.
    """

    doc_id: str
    ts: int
    author: str
    action: Action
    pos: int
    length: int
    content: str | None = None

    def __post_init__(self) -> None:
        if self.pos < 0:
            raise ValueError(f"pos must be >= 0, got {self.pos}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")
        if self.content is not None and len(self.content) != self.length:
            raise ValueError(
                f"content has {len(self.content)} characters, length says {self.length}"
            )


class EditLog:
    """All edits of one document, as parallel columns in row order.

    Rows follow ingestion order until normalize() is applied, after which
    they are sorted stably by timestamp (ties keep ingestion order).
    Author codes index author_names, which lists authors by first
    appearance in row order.
    """

    __slots__ = (
        "doc_id",
        "ts",
        "pos",
        "lengths",
        "action_codes",
        "author_codes",
        "author_names",
        "contents",
        "is_normalized",
        "_ops_cache",
    )

    def __init__(
        self,
        doc_id: str,
        ts: np.ndarray,
        pos: np.ndarray,
        lengths: np.ndarray,
        action_codes: np.ndarray,
        author_codes: np.ndarray,
        author_names: tuple[str, ...],
        contents: tuple[str | None, ...],
    ) -> None:
        self.doc_id = doc_id
        self.ts = ts
        self.pos = pos
        self.lengths = lengths
        self.action_codes = action_codes
        self.author_codes = author_codes
        self.author_names = author_names
        self.contents = contents
        self.is_normalized = bool(np.all(np.diff(ts) >= 0)) if len(ts) > 1 else True
        self._ops_cache: tuple[EditOp, ...] | None = None
        for arr in (ts, pos, lengths, author_codes):
            arr.setflags(write=False)
        action_codes.setflags(write=False)

    @classmethod
    def from_ops(cls, doc_id: str, ops: Iterable[EditOp]) -> "EditLog":
        rows = list(ops)
        names: list[str] = []
        codes = {}
        author_codes = np.empty(len(rows), dtype=np.int64)
        for i, op in enumerate(rows):
            code = codes.get(op.author)
            if code is None:
                code = len(names)
                codes[op.author] = code
                names.append(op.author)
            author_codes[i] = code
        return cls(
            doc_id,
            np.array([op.ts for op in rows], dtype=np.int64),
            np.array([op.pos for op in rows], dtype=np.int64),
            np.array([op.length for op in rows], dtype=np.int64),
            np.array([_ACTION_CODE[op.action] for op in rows], dtype=np.uint8),
            author_codes,
            tuple(names),
            tuple(op.content for op in rows),
        )

    def __len__(self) -> int:
        return int(self.ts.shape[0])

    def op(self, i: int) -> EditOp:
        """Materialize row i as an EditOp."""
        return EditOp(
            self.doc_id,
            int(self.ts[i]),
            self.author_names[self.author_codes[i]],
            _CODE_ACTION[int(self.action_codes[i])],
            int(self.pos[i]),
            int(self.lengths[i]),
            self.contents[i],
        )

    @property
    def ops(self) -> tuple[EditOp, ...]:
        if self._ops_cache is None:
            self._ops_cache = tuple(self.op(i) for i in range(len(self)))
        return self._ops_cache

    @property
    def authors(self) -> frozenset[str]:
        return frozenset(self.author_names)

    @property
    def amount_of_edit(self) -> int:
        """Total characters touched: sum of lengths."""
        return int(self.lengths.sum()) if len(self) else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EditLog):
            return NotImplemented
        return (
            self.doc_id == other.doc_id
            and np.array_equal(self.ts, other.ts)
            and np.array_equal(self.pos, other.pos)
            and np.array_equal(self.lengths, other.lengths)
            and np.array_equal(self.action_codes, other.action_codes)
            and self.author_names == other.author_names
            and np.array_equal(self.author_codes, other.author_codes)
            and self.contents == other.contents
        )

    def __repr__(self) -> str:
        return (
            f"EditLog(doc_id={self.doc_id!r}, ops={len(self)}, "
            f"authors={len(self.author_names)})"
        )


def normalize(log: EditLog) -> EditLog:
    """Sort a log stably by timestamp; idempotent, preserves the op multiset.

    Author codes are re-derived so that author_names stays in first
    appearance order of the sorted rows.
    """
    if log.is_normalized:
        return log
    order = np.argsort(log.ts, kind="stable")
    return _reindex(log, order)


def _reindex(log: EditLog, order: np.ndarray) -> EditLog:
    old_names = log.author_names
    new_codes_by_old: dict[int, int] = {}
    names: list[str] = []
    old_codes = log.author_codes[order]
    author_codes = np.empty(len(old_codes), dtype=np.int64)
    for i, oc in enumerate(old_codes.tolist()):
        code = new_codes_by_old.get(oc)
        if code is None:
            code = len(names)
            new_codes_by_old[oc] = code
            names.append(old_names[oc])
        author_codes[i] = code
    contents = tuple(log.contents[i] for i in order.tolist())
    return EditLog(
        log.doc_id,
        log.ts[order].copy(),
        log.pos[order].copy(),
        log.lengths[order].copy(),
        log.action_codes[order].copy(),
        author_codes,
        tuple(names),
        contents,
    )


class ValidationIssue(NamedTuple):
    line: int
    reason: str


class DocSummary(NamedTuple):
    doc_id: str
    authors: int
    edits: int
    amount_of_edit: int


@dataclass
class ValidationReport:
    """Outcome of one ingestion: rejects, warnings, per-doc totals."""

    record_count: int = 0
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    docs: list[DocSummary] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


_REQUIRED_FIELDS = ("doc", "ts", "author", "action", "pos", "len")
_KNOWN_FIELDS = frozenset(_REQUIRED_FIELDS + ("content",))
_ACTION_WIRE = {"ins": 0, "del": 1}


def _check_record(obj: object) -> str | None:
    """Reason the record is malformed, or None if it is well-formed."""
    if not isinstance(obj, dict):
        return "record is not a JSON object"
    for name in _REQUIRED_FIELDS:
        if name not in obj:
            return f"missing field '{name}'"
    doc = obj["doc"]
    if not isinstance(doc, str) or not doc:
        return "field 'doc' must be a non-empty string"
    ts = obj["ts"]
    if not isinstance(ts, int) or isinstance(ts, bool):
        return "field 'ts' must be an integer (milliseconds)"
    author = obj["author"]
    if not isinstance(author, str) or not author:
        return "field 'author' must be a non-empty string"
    if obj["action"] not in _ACTION_WIRE:
        return "field 'action' must be 'ins' or 'del'"
    pos = obj["pos"]
    if not isinstance(pos, int) or isinstance(pos, bool) or pos < 0:
        return "field 'pos' must be an integer >= 0"
    length = obj["len"]
    if not isinstance(length, int) or isinstance(length, bool) or length < 1:
        return "field 'len' must be an integer >= 1"
    content = obj.get("content")
    if content is not None:
        if not isinstance(content, str):
            return "field 'content' must be a string"
        if len(content) != length:
            return (
                f"content has {len(content)} characters, 'len' says {length}"
            )
    return None


class _DocAccumulator:
    __slots__ = ("ts", "pos", "lengths", "actions", "author_codes", "names", "codes", "contents")

    def __init__(self) -> None:
        self.ts: list[int] = []
        self.pos: list[int] = []
        self.lengths: list[int] = []
        self.actions: list[int] = []
        self.author_codes: list[int] = []
        self.names: list[str] = []
        self.codes: dict[str, int] = {}
        self.contents: list[str | None] = []


def parse_canonical(source: bytes | str | BinaryIO) -> tuple[list[EditLog], ValidationReport]:
    """Parse a canonical byte stream into per-document logs plus a report.

    Malformed lines are recorded with their 1-based line number and
    skipped; parsing continues. Documents appear in first-appearance
    order. Out-of-order timestamps within a document are accepted,
    sorted, and flagged with a warning.
    """
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, str):
        data = source.encode("utf-8")
    else:
        data = source.read()
    report = ValidationReport()
    accs: dict[str, _DocAccumulator] = {}
    unknown_fields: set[str] = set()
    loads = json.loads
    check = _check_record
    for lineno, raw in enumerate(data.split(b"\n"), start=1):
        if not raw.strip():
            continue
        report.record_count += 1
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            report.errors.append(ValidationIssue(lineno, f"invalid UTF-8: {exc.reason}"))
            continue
        try:
            obj = loads(text)
        except json.JSONDecodeError as exc:
            report.errors.append(ValidationIssue(lineno, f"invalid JSON: {exc.msg}"))
            continue
        reason = check(obj)
        if reason is not None:
            report.errors.append(ValidationIssue(lineno, reason))
            continue
        extra = obj.keys() - _KNOWN_FIELDS
        if extra:
            unknown_fields |= extra
        acc = accs.get(obj["doc"])
        if acc is None:
            acc = accs[obj["doc"]] = _DocAccumulator()
        author = obj["author"]
        code = acc.codes.get(author)
        if code is None:
            code = len(acc.names)
            acc.codes[author] = code
            acc.names.append(author)
        acc.ts.append(obj["ts"])
        acc.pos.append(obj["pos"])
        acc.lengths.append(obj["len"])
        acc.actions.append(_ACTION_WIRE[obj["action"]])
        acc.author_codes.append(code)
        acc.contents.append(obj.get("content"))
    if unknown_fields:
        listed = ", ".join(sorted(unknown_fields))
        report.warnings.append(f"ignored unknown fields: {listed}")
    logs: list[EditLog] = []
    for doc_id, acc in accs.items():
        log = EditLog(
            doc_id,
            np.array(acc.ts, dtype=np.int64),
            np.array(acc.pos, dtype=np.int64),
            np.array(acc.lengths, dtype=np.int64),
            np.array(acc.actions, dtype=np.uint8),
            np.array(acc.author_codes, dtype=np.int64),
            tuple(acc.names),
            tuple(acc.contents),
        )
        if not log.is_normalized:
            report.warnings.append(
                f"doc {doc_id}: timestamps out of order, sorted during ingestion"
            )
            log = normalize(log)
        logs.append(log)
        report.docs.append(
            DocSummary(doc_id, len(log.author_names), len(log), log.amount_of_edit)
        )
    return logs, report


def emit_canonical(logs: Iterable[EditLog]) -> bytes:
    """Serialize logs back to the canonical line format.

    parse_canonical(emit_canonical(logs)) reproduces normalized logs
    exactly (round trip).
    """
    out: list[str] = []
    for log in logs:
        doc_id = log.doc_id
        names = log.author_names
        ts = log.ts.tolist()
        pos = log.pos.tolist()
        lengths = log.lengths.tolist()
        actions = log.action_codes.tolist()
        codes = log.author_codes.tolist()
        wire = {0: "ins", 1: "del"}
        for i in range(len(ts)):
            rec: dict[str, object] = {
                "doc": doc_id,
                "ts": ts[i],
                "author": names[codes[i]],
                "action": wire[actions[i]],
                "pos": pos[i],
                "len": lengths[i],
            }
            content = log.contents[i]
            if content is not None:
                rec["content"] = content
            out.append(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
    out.append("")
    return "\n".join(out).encode("utf-8")


class StatLine(NamedTuple):
    """min/max/avg/std of one per-document metric."""

    min: float
    max: float
    avg: float
    std: float


@dataclass(frozen=True)
class CorpusSummary:
    n_docs: int
    authors: StatLine
    edits: StatLine
    amount_of_edit: StatLine


def _stat_line(values: list[int]) -> StatLine:
    # population std, so single-doc corpora give 0 rather than an error
    return StatLine(
        min(values),
        max(values),
        statistics.fmean(values),
        statistics.pstdev(values),
    )


def corpus_summary(logs: list[EditLog]) -> CorpusSummary:
    """Per-document min/max/avg/std of authors, edits and edit amount."""
    if not logs:
        raise ValueError("empty corpus")
    return CorpusSummary(
        len(logs),
        _stat_line([len(log.author_names) for log in logs]),
        _stat_line([len(log) for log in logs]),
        _stat_line([log.amount_of_edit for log in logs]),
    )
