"""Shared fixtures: hand-built logs, a frozen synthetic corpus, CLI runner."""

from __future__ import annotations

import contextlib
import io
from pathlib import Path

import pytest

from cetrace.cli import main
from cetrace.log_model import Action, EditLog, EditOp, emit_canonical
from cetrace.synth import SynthConfig, generate

GOLDEN_DIR = Path(__file__).parent / "golden"


def make_log(
    rows: list[tuple[int, str, int]],
    doc_id: str = "doc",
    action: Action = Action.INSERTION,
    length: int = 1,
) -> EditLog:
    """Build a log from (ts_ms, author, pos) rows, kept in the given order."""
    ops = [
        EditOp(doc_id, ts, author, action, pos, length)
        for ts, author, pos in rows
    ]
    return EditLog.from_ops(doc_id, ops)


# the frozen fixture corpus for golden files: varied session counts,
# plant mixes, author counts, plus one single-author document
FIXTURE_CONFIGS = (
    SynthConfig(seed=101, doc_id="fix-a", n_sessions=1, filler_ops=12, n_authors=1),
    SynthConfig(
        seed=202,
        doc_id="fix-b",
        n_sessions=3,
        filler_ops=8,
        n_authors=2,
        border_conflicts=2,
        insertion_conflicts=1,
    ),
    SynthConfig(
        seed=303,
        doc_id="fix-c",
        n_sessions=2,
        filler_ops=10,
        n_authors=3,
        insertion_conflicts=2,
    ),
    SynthConfig(
        seed=404,
        doc_id="fix-d",
        n_sessions=5,
        filler_ops=6,
        n_authors=2,
        border_conflicts=3,
    ),
    SynthConfig(seed=505, doc_id="fix-e", n_sessions=4, filler_ops=9, n_authors=2),
)


def build_fixture_corpus() -> list[EditLog]:
    return [generate(config)[0] for config in FIXTURE_CONFIGS]


@pytest.fixture(scope="session")
def fixture_corpus() -> list[EditLog]:
    return build_fixture_corpus()


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory, fixture_corpus) -> Path:
    """The fixture corpus written as one canonical file per document."""
    root = tmp_path_factory.mktemp("fixtures")
    for log in fixture_corpus:
        (root / f"{log.doc_id}.jsonl").write_bytes(emit_canonical([log]))
    return root


def run_cli(*args: str) -> tuple[int, str, str]:
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(args))
    return code, out.getvalue(), err.getvalue()
