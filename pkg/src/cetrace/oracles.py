"""Brute-force reference implementations and equivalence checks.

Everything here favors literal transcription of the definitions over
speed: naive loops, O(n^2) pair scans, exhaustive subset enumeration.
The optimized modules must agree exactly; compare_document reports any
divergence as human-readable mismatch strings.

Bounds: sessions above 200 ops and insertion blocks above 12 ops are
rejected ("oracle bound exceeded") to keep enumeration tractable.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .clustering import Window, clusterize
from .conflicts import (
    Outcome,
    evaluate_border,
    evaluate_insertion,
    find_border_cases,
    find_insertion_cases,
    survey_document,
)
from .log_model import EditLog, EditOp
from .segmentation import Session, SessionKind, segment

MAX_ORACLE_SESSION_OPS = 200
MAX_ORACLE_BLOCK_OPS = 12


def oracle_segment(log: EditLog, gap_ms: int) -> list[Session]:
    """Naive sessionization: walk ops, split where the gap rule says so."""
    if gap_ms <= 0:
        raise ValueError(f"gap must be positive, got {gap_ms}")
    if not log.is_normalized:
        raise ValueError("log not normalized")
    n = len(log)
    if n == 0:
        return []
    ts = log.ts.tolist()
    bounds = [0]
    for i in range(1, n):
        if ts[i] - ts[i - 1] >= gap_ms:
            bounds.append(i)
    bounds.append(n)
    codes = log.author_codes.tolist()
    sessions = []
    for index in range(len(bounds) - 1):
        a, b = bounds[index], bounds[index + 1]
        kind = SessionKind.CAS if len(set(codes[a:b])) >= 2 else SessionKind.SAS
        sessions.append(Session(log, index, a, b, kind))
    return sessions


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def oracle_clusterize(session: Session, window: Window) -> list[tuple[int, ...]]:
    """All-pairs adjacency plus union-find; members as absolute row tuples."""
    log = session.log
    a, b = session.start, session.stop
    ts = log.ts[a:b].tolist()
    pos = log.pos[a:b].tolist()
    n = b - a
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(ts[i] - ts[j]) < window.t_ms and abs(pos[i] - pos[j]) < window.p:
                uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(a + i)
    return [tuple(groups[root]) for root in sorted(groups)]


def _is_time_run(ops: Sequence[EditOp], t_ms: int) -> bool:
    # ops come in session row order, which is the (ts, ingestion) total
    # order, so strictness of the time order is already guaranteed
    return all(b.ts - a.ts < t_ms for a, b in zip(ops, ops[1:]))


def _is_position_run(ops: Sequence[EditOp], p: int) -> bool:
    return all(0 < b.pos - a.pos < p for a, b in zip(ops, ops[1:]))


def oracle_evaluate_border(
    x: EditOp,
    y: EditOp,
    x_prime: EditOp | None,
    window: Window,
    *,
    strict_def3: bool = False,
) -> Outcome:
    """Literal border evaluation on one switch point."""
    t, p = window.t_ms, window.p
    if not (y.ts - x.ts < t and abs(y.pos - x.pos) < p):
        return Outcome.CONSIDER
    if x_prime is None or x_prime.author not in (x.author, y.author):
        return Outcome.POTENTIAL
    if not _is_time_run([x, y, x_prime], t):
        return Outcome.POTENTIAL
    if _is_position_run([x, x_prime, y], p):
        return Outcome.CONFLICT
    if not strict_def3 and _is_position_run([y, x_prime, x], p):
        return Outcome.CONFLICT
    return Outcome.POTENTIAL


def oracle_evaluate_insertion(
    x1: EditOp,
    block: Sequence[EditOp],
    x2: EditOp,
    x_prime: EditOp | None,
    window: Window,
) -> Outcome:
    """Literal insertion evaluation with exhaustive witness enumeration.

    Tries every nonempty subset of the Y-block, arranged in position
    order, as the witness between X1 and X2 (either orientation).
    """
    if len(block) > MAX_ORACLE_BLOCK_OPS:
        raise ValueError(
            f"oracle bound exceeded: insertion block of {len(block)} ops"
        )
    t, p = window.t_ms, window.p
    if not _is_time_run([x1, *block, x2], t):
        return Outcome.CONSIDER
    witness_found = False
    for size in range(1, len(block) + 1):
        for subset in combinations(block, size):
            chain = sorted(subset, key=lambda op: op.pos)
            if _is_position_run([x1, *chain, x2], p) or _is_position_run(
                [x2, *chain, x1], p
            ):
                witness_found = True
                break
        if witness_found:
            break
    if not witness_found:
        return Outcome.CONSIDER
    lo = min(x1.pos, x2.pos)
    hi = max(x1.pos, x2.pos)
    if (
        x_prime is not None
        and x_prime.author in (x1.author, block[0].author)
        and x_prime.ts - x2.ts < t
        and lo < x_prime.pos < hi
    ):
        return Outcome.CONFLICT
    return Outcome.POTENTIAL


CaseEntry = tuple[str, int, int, int]


def oracle_conflicts(
    session: Session, window: Window, *, strict_def3: bool = False
) -> list[CaseEntry]:
    """All border and insertion cases of one CAS session with outcomes.

    Entries are ("border", x_row, y_row, outcome) and
    ("insertion", x1_row, x2_row, outcome) with absolute row indices,
    border cases first in row order, then insertion cases.
    """
    if session.kind is not SessionKind.CAS:
        raise ValueError("not a co-author session")
    if session.n_ops > MAX_ORACLE_SESSION_OPS:
        raise ValueError(
            f"oracle bound exceeded: session of {session.n_ops} ops"
        )
    ops = session.ops
    base = session.start
    n = len(ops)
    entries: list[CaseEntry] = []
    for i in range(1, n):
        if ops[i].author != ops[i - 1].author:
            x_prime = ops[i + 1] if i + 1 < n else None
            outcome = oracle_evaluate_border(
                ops[i - 1], ops[i], x_prime, window, strict_def3=strict_def3
            )
            entries.append(("border", base + i - 1, base + i, int(outcome)))
    for i in range(n):
        for j in range(i + 2, n):
            if ops[j].author != ops[i].author:
                continue
            interior = ops[i + 1 : j]
            others = {op.author for op in interior}
            if len(others) != 1 or ops[i].author in others:
                continue
            x_prime = ops[j + 1] if j + 1 < n else None
            outcome = oracle_evaluate_insertion(
                ops[i], interior, ops[j], x_prime, window
            )
            entries.append(("insertion", base + i, base + j, int(outcome)))
    return entries


def main_conflict_entries(
    session: Session, window: Window, *, strict_def3: bool = False
) -> list[CaseEntry]:
    """The optimized path's outcomes in the oracle's entry format."""
    entries: list[CaseEntry] = []
    for case in find_border_cases(session):
        outcome = evaluate_border(case, window, strict_def3=strict_def3)
        entries.append(("border", case.x_index, case.y_index, int(outcome)))
    for case in find_insertion_cases(session):
        outcome = evaluate_insertion(case, window)
        entries.append(("insertion", case.x1_index, case.x2_index, int(outcome)))
    return entries


def compare_document(
    log: EditLog, gap_ms: int, window: Window, *, strict_def3: bool = False
) -> list[str]:
    """Run every analysis both ways on one document; describe mismatches.

    Covers segmentation, clustering, per-case conflict outcomes, and the
    batched survey counts. An empty result means full agreement.
    """
    mismatches: list[str] = []
    doc = log.doc_id
    main_sessions = segment(log, gap_ms)
    ref_sessions = oracle_segment(log, gap_ms)
    main_shape = [(s.start, s.stop, s.kind) for s in main_sessions]
    ref_shape = [(s.start, s.stop, s.kind) for s in ref_sessions]
    if main_shape != ref_shape:
        mismatches.append(
            f"{doc}: segmentation differs at gap {gap_ms}ms: "
            f"{main_shape} vs oracle {ref_shape}"
        )
        return mismatches
    totals = {
        "border": [0, 0, 0],
        "insertion": [0, 0, 0],
    }
    any_cas = False
    for session in main_sessions:
        main_clusters = [c.members for c in clusterize(session, window)]
        ref_clusters = oracle_clusterize(session, window)
        if sorted(main_clusters) != sorted(ref_clusters):
            mismatches.append(
                f"{doc}: clusters differ in session {session.index}: "
                f"{main_clusters} vs oracle {ref_clusters}"
            )
        if session.kind is not SessionKind.CAS:
            continue
        any_cas = True
        main_entries = main_conflict_entries(session, window, strict_def3=strict_def3)
        ref_entries = oracle_conflicts(session, window, strict_def3=strict_def3)
        if main_entries != ref_entries:
            mismatches.append(
                f"{doc}: conflict outcomes differ in session {session.index}: "
                f"{main_entries} vs oracle {ref_entries}"
            )
        for kind, _, _, outcome in ref_entries:
            totals[kind][0] += 1
            if outcome >= int(Outcome.POTENTIAL):
                totals[kind][1] += 1
            if outcome == int(Outcome.CONFLICT):
                totals[kind][2] += 1
    counts = survey_document(log, [window], gap_ms, strict_def3=strict_def3)[0]
    if counts.has_cas != any_cas:
        mismatches.append(f"{doc}: survey CAS flag {counts.has_cas}, oracle {any_cas}")
    for kind, got in (("border", counts.border), ("insertion", counts.insertion)):
        want = totals[kind]
        if [got.consider, got.potential, got.conflict] != want:
            mismatches.append(
                f"{doc}: survey {kind} counts "
                f"{[got.consider, got.potential, got.conflict]} vs oracle {want}"
            )
    return mismatches
