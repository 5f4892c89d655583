"""Deterministic synthetic edit logs with ground-truth annotations.

The random source is splitmix64, chosen because it is trivial to
reimplement bit-for-bit in any language, so fixtures regenerate
identically everywhere. Two generators live here:

* random_log: unstructured logs for property tests (ties, session
  breaks, position jumps, author churn).
* generate: planned logs where the session count and the border and
  insertion conflict counts are known by construction. Planted patterns
  sit in disjoint position bands far wider than the plant window, so
  filler ops can never add or remove a conflict; a generation-time
  audit re-checks the plan and rejects infeasible configurations.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass

from .clustering import Window
from .conflicts import survey_document
from .log_model import Action, EditLog, EditOp
from .segmentation import segment

_MASK64 = (1 << 64) - 1
_EPOCH_MS = 1_500_000_000_000


class SplitMix64:
    """splitmix64 PRNG; deterministic across platforms and runs."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n); modulo bias is irrelevant here."""
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        return self.next_u64() % n


def random_log(
    seed: int,
    *,
    max_ops: int = 200,
    max_authors: int = 4,
    max_run: int = 10,
    doc_id: str | None = None,
) -> EditLog:
    """Unstructured but reproducible log for property tests.

    Timestamps mix ties, sub-window steps, and session-sized jumps;
    positions mix small walks with long jumps. Single-author runs are
    capped at max_run so the exhaustive conflict oracle stays tractable.
    """
    rng = SplitMix64(seed)
    n = 1 + rng.below(max_ops)
    n_authors = 1 + rng.below(max_authors)
    if doc_id is None:
        doc_id = f"rand-{seed}"
    ts = _EPOCH_MS + rng.below(1_000_000)
    pos = rng.below(500)
    author = rng.below(n_authors)
    run = 0
    ops = []
    letters = string.ascii_lowercase
    for _ in range(n):
        roll = rng.below(100)
        if roll < 10:
            step = 0
        elif roll < 70:
            step = rng.below(5_000)
        elif roll < 90:
            step = 5_000 + rng.below(120_000)
        else:
            step = 900_000 + rng.below(900_000)
        ts += step
        roll = rng.below(100)
        if roll < 60:
            pos = max(0, pos + rng.below(31) - 15)
        elif roll < 70:
            pass
        else:
            pos = rng.below(2_000)
        pick = rng.below(n_authors)
        if n_authors > 1 and (pick == author and run >= max_run):
            pick = (author + 1 + rng.below(n_authors - 1)) % n_authors
        run = run + 1 if pick == author else 1
        author = pick
        length = 1 + rng.below(20)
        if rng.below(100) < 70:
            action = Action.INSERTION
            content = letters[author % 26] * length if rng.below(100) < 30 else None
        else:
            action = Action.DELETION
            content = None
        ops.append(
            EditOp(doc_id, ts, f"a{author}", action, pos, length, content)
        )
    return EditLog.from_ops(doc_id, ops)


@dataclass(frozen=True)
class SynthConfig:
    """Plan for one generated document.

    border_conflicts and insertion_conflicts are exact counts of Conflict
    outcomes the document must exhibit at (gap_ms, window); filler ops
    only ever add Consider cases.
    """

    seed: int
    doc_id: str = "synth-000"
    n_sessions: int = 2
    filler_ops: int = 8
    n_authors: int = 2
    gap_ms: int = 300_000
    window: Window = Window(30_000, 10)
    border_conflicts: int = 0
    insertion_conflicts: int = 0


@dataclass(frozen=True)
class GroundTruth:
    """What a generated document is guaranteed to contain."""

    doc_id: str
    gap_ms: int
    window: Window
    n_sessions: int
    border_conflicts: int
    insertion_conflicts: int
    session_start_ts: tuple[int, ...]


def truth_to_json(truth: GroundTruth) -> bytes:
    obj = {
        "doc": truth.doc_id,
        "gap_ms": truth.gap_ms,
        "window": {"t_ms": truth.window.t_ms, "p": truth.window.p},
        "sessions": truth.n_sessions,
        "border_conflicts": truth.border_conflicts,
        "insertion_conflicts": truth.insertion_conflicts,
        "session_start_ts": list(truth.session_start_ts),
    }
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


def truth_from_json(data: bytes | str) -> GroundTruth:
    obj = json.loads(data)
    return GroundTruth(
        obj["doc"],
        obj["gap_ms"],
        Window(obj["window"]["t_ms"], obj["window"]["p"]),
        obj["sessions"],
        obj["border_conflicts"],
        obj["insertion_conflicts"],
        tuple(obj["session_start_ts"]),
    )


def _check_config(config: SynthConfig) -> None:
    if config.n_sessions < 1:
        raise ValueError("n_sessions must be at least 1")
    if config.filler_ops < 0:
        raise ValueError("filler_ops must be non-negative")
    if config.n_authors < 1:
        raise ValueError("n_authors must be at least 1")
    if config.gap_ms <= 0:
        raise ValueError("gap must be positive")
    if config.border_conflicts < 0 or config.insertion_conflicts < 0:
        raise ValueError("conflict counts must be non-negative")
    plants = config.border_conflicts + config.insertion_conflicts
    if plants == 0:
        if config.filler_ops == 0:
            raise ValueError("infeasible plant: sessions would be empty")
        return
    w = config.window
    if config.n_authors < 2:
        raise ValueError("infeasible plant: conflicts need at least 2 authors")
    if w.t_ms < 2:
        raise ValueError("infeasible plant: window t must be at least 2ms")
    if w.t_ms >= config.gap_ms:
        raise ValueError("infeasible plant: window t must be under the session gap")
    if config.border_conflicts and w.p < 3:
        raise ValueError("infeasible plant: border conflicts need window p >= 3")
    if config.insertion_conflicts and w.p < 4:
        raise ValueError("infeasible plant: insertion conflicts need window p >= 4")
    if config.filler_ops == 0 and config.n_sessions > plants:
        raise ValueError("infeasible plant: sessions would be empty")


def generate(config: SynthConfig, *, validate: bool = True) -> tuple[EditLog, GroundTruth]:
    """Build a log matching the plan exactly; see SynthConfig.

    With validate (the default) the generated log is re-analyzed and the
    run aborts with an error if the plan was not met.
    """
    _check_config(config)
    rng = SplitMix64(config.seed)
    w = config.window
    band_gap = max(8 * w.p, 1024)
    jitter = band_gap // 8
    band = 0
    plants_by_session: list[list[str]] = [[] for _ in range(config.n_sessions)]
    directives = ["border"] * config.border_conflicts
    directives += ["insertion"] * config.insertion_conflicts
    for i, kind in enumerate(directives):
        plants_by_session[i % config.n_sessions].append(kind)
    ops: list[EditOp] = []
    session_start_ts: list[int] = []
    ts = _EPOCH_MS + rng.below(1_000_000)

    def author_pair() -> tuple[str, str]:
        a = rng.below(config.n_authors)
        b = (a + 1 + rng.below(config.n_authors - 1)) % config.n_authors
        return f"a{a}", f"a{b}"

    def intra_step() -> int:
        return 1 + rng.below(min(config.gap_ms - 1, 30_000))

    def emit(ts_i: int, pos_i: int, author: str) -> None:
        length = 1 + rng.below(12)
        ops.append(
            EditOp(config.doc_id, ts_i, author, Action.INSERTION, pos_i, length)
        )

    for s, plant_kinds in enumerate(plants_by_session):
        if s > 0:
            ts += config.gap_ms + 60_000 + rng.below(config.gap_ms)
        session_start_ts.append(ts)
        first_block = True
        for kind in plant_kinds:
            if not first_block:
                ts += intra_step()
            first_block = False
            base = band * band_gap + rng.below(jitter + 1)
            band += 1
            a1, a2 = author_pair()
            if kind == "border":
                dq = max(2, w.p // 2)
                emit(ts, base, a1)
                emit(ts + 1, base + dq, a2)
                emit(ts + 2, base + dq // 2, a1)
                ts += 2
            else:
                u = (w.p - 1) // 3
                emit(ts, base, a1)
                emit(ts + 1, base + 3 * u, a2)
                emit(ts + 2, base + 6 * u, a1)
                emit(ts + 3, base + u, a1)
                ts += 3
        for _ in range(config.filler_ops):
            if not first_block:
                ts += intra_step()
            first_block = False
            base = band * band_gap + rng.below(jitter + 1)
            band += 1
            emit(ts, base, f"a{rng.below(config.n_authors)}")
    log = EditLog.from_ops(config.doc_id, ops)
    truth = GroundTruth(
        config.doc_id,
        config.gap_ms,
        w,
        config.n_sessions,
        config.border_conflicts,
        config.insertion_conflicts,
        tuple(session_start_ts),
    )
    if validate:
        _audit(log, truth)
    return log, truth


def _audit(log: EditLog, truth: GroundTruth) -> None:
    sessions = segment(log, truth.gap_ms)
    if len(sessions) != truth.n_sessions:
        raise ValueError(
            f"infeasible plant: got {len(sessions)} sessions, planned {truth.n_sessions}"
        )
    starts = tuple(s.start_ts for s in sessions)
    if starts != truth.session_start_ts:
        raise ValueError("infeasible plant: session boundaries moved")
    counts = survey_document(log, [truth.window], truth.gap_ms)[0]
    if counts.border.conflict != truth.border_conflicts:
        raise ValueError(
            f"infeasible plant: got {counts.border.conflict} border conflicts, "
            f"planned {truth.border_conflicts}"
        )
    if counts.insertion.conflict != truth.insertion_conflicts:
        raise ValueError(
            f"infeasible plant: got {counts.insertion.conflict} insertion conflicts, "
            f"planned {truth.insertion_conflicts}"
        )
