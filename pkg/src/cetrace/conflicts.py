"""Border and insertion conflict detection inside co-author sessions.

A border case is an author switch point: two time-adjacent edits X, Y by
different authors. An insertion case is a pattern X1, Y1..Yk, X2 in time
order where X1 and X2 share an author and the Y-block is the maximal
intervening run of exactly one other author (a third author's op
terminates the block, producing no case).

Each case gets one of three outcomes under a window [t, p]:

* Consider: the case exists but does not fit the window.
* Potential: the case's edits fit within the window. For a border case
  that means time and position distance of (X, Y) are both under the
  window; for an insertion case, [X1, Y1..Yk, X2] is time-ordered with
  gaps under t and some nonempty subset of the Y-block forms, with X1
  and X2 as endpoints in either orientation, a strictly monotone
  position chain with gaps under p.
* Conflict: a potential case whose immediately following edit X' (owned
  by one of the two authors involved) lands within t after the case and
  strictly inside the case's position interval.

Outcomes always satisfy Conflict implies Potential implies Consider.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from ._util import map_ordered
from .clustering import Window
from .log_model import EditLog, EditOp
from .segmentation import Session, SessionKind, segment
from .stats import IntervalEstimate, clamp_nonnegative, clamp_proportion, mean_ci


class Outcome(enum.IntEnum):
    """Case classification; the order encodes the containment lattice."""

    CONSIDER = 0
    POTENTIAL = 1
    CONFLICT = 2


@dataclass(eq=False)
class BorderCase:
    """An author switch point (X, Y) plus its follow-up edit X'."""

    doc_id: str
    session_index: int
    x: EditOp
    y: EditOp
    x_prime: EditOp | None
    x_index: int
    y_index: int
    time_distance_ms: int
    position_distance: int
    outcome: Outcome = Outcome.CONSIDER
    window: Window | None = None


@dataclass(eq=False)
class InsertionCase:
    """A pattern X1, Y-block, X2 plus its follow-up edit X'."""

    doc_id: str
    session_index: int
    x1: EditOp
    x2: EditOp
    x_prime: EditOp | None
    block: tuple[EditOp, ...]
    x1_index: int
    x2_index: int
    time_distance_ms: int
    position_distance: int
    witness: tuple[EditOp, ...] | None = None
    outcome: Outcome = Outcome.CONSIDER
    window: Window | None = None


def _require_cas(session: Session) -> None:
    if session.kind is not SessionKind.CAS:
        raise ValueError("not a co-author session")


def find_border_cases(session: Session) -> list[BorderCase]:
    """One case per author switch point, in session time order."""
    _require_cas(session)
    log = session.log
    a, b = session.start, session.stop
    switches = kernels.switch_points(log.author_codes[a:b])
    cases = []
    for local in switches.tolist():
        y_idx = a + local
        x_idx = y_idx - 1
        x = log.op(x_idx)
        y = log.op(y_idx)
        x_prime = log.op(y_idx + 1) if y_idx + 1 < b else None
        cases.append(
            BorderCase(
                log.doc_id,
                session.index,
                x,
                y,
                x_prime,
                x_idx,
                y_idx,
                y.ts - x.ts,
                abs(y.pos - x.pos),
            )
        )
    return cases


def evaluate_border(
    case: BorderCase, window: Window, *, strict_def3: bool = False
) -> Outcome:
    """Classify one border case under a window; records outcome on the case.

    strict_def3 accepts only the orientation with X' positioned between
    X and Y in increasing order; the default also accepts the mirrored
    orientation (Y, X', X).
    """
    t, p = window.t_ms, window.p
    outcome = Outcome.CONSIDER
    if case.time_distance_ms < t and case.position_distance < p:
        outcome = Outcome.POTENTIAL
        xp = case.x_prime
        if (
            xp is not None
            and xp.author in (case.x.author, case.y.author)
            and xp.ts - case.y.ts < t
            and _between(case.x.pos, xp.pos, case.y.pos, p, strict_def3)
        ):
            outcome = Outcome.CONFLICT
    case.outcome = outcome
    case.window = window
    return outcome


def _between(px: int, pxp: int, py: int, p: int, strict: bool) -> bool:
    """X' strictly between X and Y with both position gaps under p."""
    if px < pxp < py and pxp - px < p and py - pxp < p:
        return True
    if strict:
        return False
    return py < pxp < px and pxp - py < p and px - pxp < p


def find_insertion_cases(session: Session) -> list[InsertionCase]:
    """One case per maximal single-other-author block between two same-author edits."""
    _require_cas(session)
    log = session.log
    a, b = session.start, session.stop
    x1s, x2s = kernels.insertion_spans(log.author_codes[a:b])
    cases = []
    for lx1, lx2 in zip(x1s.tolist(), x2s.tolist()):
        x1_idx = a + lx1
        x2_idx = a + lx2
        x1 = log.op(x1_idx)
        x2 = log.op(x2_idx)
        x_prime = log.op(x2_idx + 1) if x2_idx + 1 < b else None
        cases.append(
            InsertionCase(
                log.doc_id,
                session.index,
                x1,
                x2,
                x_prime,
                tuple(log.op(i) for i in range(x1_idx + 1, x2_idx)),
                x1_idx,
                x2_idx,
                x2.ts - x1.ts,
                abs(x2.pos - x1.pos),
            )
        )
    return cases


def evaluate_insertion(case: InsertionCase, window: Window) -> Outcome:
    """Classify one insertion case under a window; records outcome and witness."""
    t, p = window.t_ms, window.p
    case.window = window
    case.witness = None
    case.outcome = Outcome.CONSIDER
    seq = (case.x1, *case.block, case.x2)
    for first, second in zip(seq, seq[1:]):
        if second.ts - first.ts >= t:
            return Outcome.CONSIDER
    witness = _position_witness(case, p)
    if witness is None:
        return Outcome.CONSIDER
    case.witness = witness
    case.outcome = Outcome.POTENTIAL
    xp = case.x_prime
    lo = min(case.x1.pos, case.x2.pos)
    hi = max(case.x1.pos, case.x2.pos)
    if (
        xp is not None
        and xp.author in (case.x1.author, case.block[0].author)
        and xp.ts - case.x2.ts < t
        and lo < xp.pos < hi
    ):
        case.outcome = Outcome.CONFLICT
    return case.outcome


def _position_witness(case: InsertionCase, p: int) -> tuple[EditOp, ...] | None:
    """Maximal chain of block ops linking X1 to X2 in position, or None.

    The chain takes one block op per distinct position strictly inside
    the (X1, X2) position interval; it is a valid witness exactly when
    every consecutive position gap, endpoints included, is under p. Any
    subset witness exists iff this maximal chain works, because dropping
    ops only widens gaps.
    """
    lo = min(case.x1.pos, case.x2.pos)
    hi = max(case.x1.pos, case.x2.pos)
    if lo == hi:
        return None
    by_pos: dict[int, EditOp] = {}
    for op in case.block:
        if lo < op.pos < hi and op.pos not in by_pos:
            by_pos[op.pos] = op
    if not by_pos:
        return None
    positions = sorted(by_pos)
    prev = lo
    for q in positions:
        if q - prev >= p:
            return None
        prev = q
    if hi - prev >= p:
        return None
    chain = [by_pos[q] for q in positions]
    if case.x1.pos > case.x2.pos:
        chain.reverse()
    return tuple(chain)


class TypeCounts(NamedTuple):
    """Per-document tallies for one conflict type under one window."""

    consider: int
    potential: int
    conflict: int
    conflict_dt_sum_ms: int
    conflict_dp_sum: int


class DocCounts(NamedTuple):
    """Per-document tallies under one window."""

    has_cas: bool
    border: TypeCounts
    insertion: TypeCounts


@dataclass(frozen=True)
class ConflictTypeStats:
    """Corpus aggregation for one conflict type: the four report row groups."""

    n_consider: int
    n_potential: int
    n_conflict: int
    potential_over_consider: IntervalEstimate | None
    conflict_over_potential: IntervalEstimate | None
    time_distance_ms: IntervalEstimate | None
    position_distance: IntervalEstimate | None


@dataclass(frozen=True)
class ConflictTable:
    window: Window
    base_gap_ms: int
    border: ConflictTypeStats
    insertion: ConflictTypeStats
    note: str | None = None


class _SessionCases:
    """Window-independent case material for one CAS session slice."""

    __slots__ = ("ts", "pos", "authors", "y_idx", "b_dt", "b_dp", "x1", "x2", "i_dt", "i_dp")

    def __init__(self, ts: np.ndarray, pos: np.ndarray, authors: np.ndarray) -> None:
        self.ts = ts
        self.pos = pos
        self.authors = authors
        self.y_idx = kernels.switch_points(authors)
        self.b_dt = ts[self.y_idx] - ts[self.y_idx - 1]
        self.b_dp = np.abs(pos[self.y_idx] - pos[self.y_idx - 1])
        self.x1, self.x2 = kernels.insertion_spans(authors)
        self.i_dt = ts[self.x2] - ts[self.x1]
        self.i_dp = np.abs(pos[self.x2] - pos[self.x1])


def survey_document(
    log: EditLog,
    windows: Sequence[Window],
    base_gap_ms: int,
    *,
    strict_def3: bool = False,
) -> list[DocCounts]:
    """Count case outcomes for one document, one result per window.

    The find phase (switch points, insertion spans) runs once per CAS
    session and is reused across windows.
    """
    sessions = segment(log, base_gap_ms)
    material = []
    for session in sessions:
        if session.kind is not SessionKind.CAS:
            continue
        a, b = session.start, session.stop
        material.append(
            _SessionCases(log.ts[a:b], log.pos[a:b], log.author_codes[a:b])
        )
    results = []
    symmetric = not strict_def3
    for window in windows:
        b_consider = b_potential = b_conflict = 0
        b_dt = b_dp = 0
        i_consider = i_potential = i_conflict = 0
        i_dt = i_dp = 0
        for m in material:
            out = kernels.border_outcomes(
                m.ts, m.pos, m.authors, m.y_idx, window.t_ms, window.p, symmetric
            )
            b_consider += out.shape[0]
            b_potential += int((out >= kernels.POTENTIAL).sum())
            mask = out == kernels.CONFLICT
            b_conflict += int(mask.sum())
            if mask.any():
                b_dt += int(m.b_dt[mask].sum())
                b_dp += int(m.b_dp[mask].sum())
            out = kernels.insertion_outcomes(
                m.ts, m.pos, m.authors, m.x1, m.x2, window.t_ms, window.p
            )
            i_consider += out.shape[0]
            i_potential += int((out >= kernels.POTENTIAL).sum())
            mask = out == kernels.CONFLICT
            i_conflict += int(mask.sum())
            if mask.any():
                i_dt += int(m.i_dt[mask].sum())
                i_dp += int(m.i_dp[mask].sum())
        results.append(
            DocCounts(
                bool(material),
                TypeCounts(b_consider, b_potential, b_conflict, b_dt, b_dp),
                TypeCounts(i_consider, i_potential, i_conflict, i_dt, i_dp),
            )
        )
    return results


def _aggregate_type(rows: list[TypeCounts], level: float) -> ConflictTypeStats:
    n_consider = sum(r.consider for r in rows)
    n_potential = sum(r.potential for r in rows)
    n_conflict = sum(r.conflict for r in rows)
    prop_potential = [r.potential / r.consider for r in rows if r.consider]
    prop_conflict = [r.conflict / r.potential for r in rows if r.potential]
    dt = [r.conflict_dt_sum_ms / r.conflict for r in rows if r.conflict]
    dp = [r.conflict_dp_sum / r.conflict for r in rows if r.conflict]
    return ConflictTypeStats(
        n_consider,
        n_potential,
        n_conflict,
        clamp_proportion(mean_ci(prop_potential, level)) if prop_potential else None,
        clamp_proportion(mean_ci(prop_conflict, level)) if prop_conflict else None,
        clamp_nonnegative(mean_ci(dt, level)) if dt else None,
        clamp_nonnegative(mean_ci(dp, level)) if dp else None,
    )


_EMPTY_TYPE = ConflictTypeStats(0, 0, 0, None, None, None, None)


def survey_corpus(
    corpus: list[EditLog],
    windows: Sequence[Window],
    base_gap_ms: int = 30_000,
    *,
    strict_def3: bool = False,
    level: float = 0.99,
    jobs: int = 1,
) -> list[ConflictTable]:
    """Aggregate case outcomes over a corpus, one table per window.

    Documents are the sampling unit: proportions and distances are
    averaged per document first, then summarized with a confidence
    interval across documents. Documents without the relevant cases are
    excluded from an average rather than contributing zeros.
    """
    if not corpus:
        raise ValueError("empty corpus")
    per_doc = map_ordered(
        lambda log: survey_document(log, windows, base_gap_ms, strict_def3=strict_def3),
        corpus,
        jobs,
    )
    tables = []
    for w, window in enumerate(windows):
        rows = [doc_rows[w] for doc_rows in per_doc]
        if not any(r.has_cas for r in rows):
            tables.append(
                ConflictTable(
                    window, base_gap_ms, _EMPTY_TYPE, _EMPTY_TYPE, "no co-author sessions"
                )
            )
            continue
        tables.append(
            ConflictTable(
                window,
                base_gap_ms,
                _aggregate_type([r.border for r in rows], level),
                _aggregate_type([r.insertion for r in rows], level),
            )
        )
    return tables


def conflict_survey(
    corpus: list[EditLog],
    window: Window,
    base_gap_ms: int = 30_000,
    *,
    strict_def3: bool = False,
    level: float = 0.99,
    jobs: int = 1,
) -> ConflictTable:
    """Survey a corpus under a single window (see survey_corpus)."""
    return survey_corpus(
        corpus,
        [window],
        base_gap_ms,
        strict_def3=strict_def3,
        level=level,
        jobs=jobs,
    )[0]
