"""Session segmentation under a maximum time gap.

A new session starts at every op whose time distance to the previous op
is at least the gap (distance >= gap splits, < gap joins). Sessions with
one distinct author are single-author sessions (SAS), sessions with two
or more are co-author sessions (CAS).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import kernels
from .log_model import EditLog, EditOp


class SessionKind(enum.Enum):
    SAS = "SAS"
    CAS = "CAS"


@dataclass(frozen=True, eq=False)
class Session:
    """A maximal time-contiguous run of one document's ops.

    start/stop are row bounds into the log's columns (half-open).
    """

    log: EditLog
    index: int
    start: int
    stop: int
    kind: SessionKind

    @property
    def doc_id(self) -> str:
        return self.log.doc_id

    @property
    def n_ops(self) -> int:
        return self.stop - self.start

    @property
    def start_ts(self) -> int:
        return int(self.log.ts[self.start])

    @property
    def end_ts(self) -> int:
        return int(self.log.ts[self.stop - 1])

    @property
    def author_count(self) -> int:
        return int(np.unique(self.log.author_codes[self.start : self.stop]).shape[0])

    @property
    def ops(self) -> tuple[EditOp, ...]:
        return tuple(self.log.op(i) for i in range(self.start, self.stop))

    def iter_ops(self) -> Iterator[EditOp]:
        for i in range(self.start, self.stop):
            yield self.log.op(i)


@dataclass(frozen=True)
class SessionStats:
    internal_distances_ms: tuple[int, ...]
    length_ms: int
    edit_count: int
    normalized_edit_count: float


def segment(log: EditLog, gap_ms: int) -> list[Session]:
    """Split a normalized log into sessions under the given gap.

    Raises:
        ValueError: on a non-positive gap or an unnormalized log.
    """
    if gap_ms <= 0:
        raise ValueError(f"gap must be positive, got {gap_ms}")
    if not log.is_normalized:
        raise ValueError("log not normalized")
    n = len(log)
    if n == 0:
        return []
    starts = kernels.session_starts(log.ts, gap_ms)
    bounds = starts.tolist()
    bounds.append(n)
    codes = log.author_codes
    sessions = []
    for index in range(len(bounds) - 1):
        a, b = bounds[index], bounds[index + 1]
        multi = bool((codes[a + 1 : b] != codes[a]).any()) if b - a > 1 else False
        kind = SessionKind.CAS if multi else SessionKind.SAS
        sessions.append(Session(log, index, a, b, kind))
    return sessions


def external_distances(sessions: list[Session]) -> list[int]:
    """Time distances (ms) between adjacent sessions of one document."""
    return [
        sessions[i + 1].start_ts - sessions[i].end_ts
        for i in range(len(sessions) - 1)
    ]


def session_stats(session: Session, gap_ms: int) -> SessionStats:
    """Internal distances, length, and raw/normalized edit counts.

    The normalized count divides by the number of distinct authors in
    this session, so it equals the raw count for any SAS.
    """
    ts = session.log.ts[session.start : session.stop]
    internal = np.diff(ts)
    if internal.shape[0] and int(internal.max()) >= gap_ms:
        raise ValueError("internal distance at or above the gap; wrong gap for this session")
    count = session.n_ops
    return SessionStats(
        tuple(internal.tolist()),
        session.end_ts - session.start_ts,
        count,
        count / session.author_count,
    )
