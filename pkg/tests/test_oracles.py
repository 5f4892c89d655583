import pytest

from cetrace.clustering import Window
from cetrace.log_model import Action, EditLog, EditOp
from cetrace.oracles import (
    MAX_ORACLE_BLOCK_OPS,
    MAX_ORACLE_SESSION_OPS,
    compare_document,
    main_conflict_entries,
    oracle_clusterize,
    oracle_conflicts,
    oracle_evaluate_insertion,
    oracle_segment,
)
from cetrace.segmentation import segment
from cetrace.synth import random_log
from conftest import make_log

S = 1000
W = Window(30 * S, 10)


def test_oracle_segment_matches_main_on_examples():
    log = make_log([(0, "a", 0), (20 * S, "b", 1), (100 * S, "a", 2)])
    main = segment(log, 30 * S)
    ref = oracle_segment(log, 30 * S)
    assert [(s.start, s.stop, s.kind) for s in main] == [
        (s.start, s.stop, s.kind) for s in ref
    ]


def test_oracle_session_bound():
    rows = [(i, "a", 0) if i % 2 else (i, "b", 0) for i in range(201)]
    log = make_log(rows)
    (session,) = segment(log, 30 * S)
    with pytest.raises(ValueError, match="oracle bound exceeded"):
        oracle_conflicts(session, W)


def test_oracle_block_bound():
    block = [
        EditOp("d", 1000 + i, "b", Action.INSERTION, 10 + i, 1)
        for i in range(MAX_ORACLE_BLOCK_OPS + 1)
    ]
    x1 = EditOp("d", 0, "a", Action.INSERTION, 0, 1)
    x2 = EditOp("d", 5000, "a", Action.INSERTION, 30, 1)
    with pytest.raises(ValueError, match="oracle bound exceeded"):
        oracle_evaluate_insertion(x1, block, x2, None, W)


def test_oracle_insertion_duplicate_positions():
    # duplicates break one subset but a smaller one still witnesses
    x1 = EditOp("d", 0, "a", Action.INSERTION, 100, 1)
    block = (
        EditOp("d", 1000, "b", Action.INSERTION, 104, 1),
        EditOp("d", 2000, "b", Action.INSERTION, 104, 1),
    )
    x2 = EditOp("d", 3000, "a", Action.INSERTION, 110, 1)
    assert oracle_evaluate_insertion(x1, block, x2, None, W).name == "POTENTIAL"


def test_two_op_cas_single_border_case():
    log = make_log([(0, "a", 5), (1 * S, "b", 5)])
    (session,) = segment(log, 30 * S)
    entries = oracle_conflicts(session, W)
    assert len(entries) == 1
    kind, x_row, y_row, outcome = entries[0]
    assert (kind, x_row, y_row) == ("border", 0, 1)


def test_entry_formats_align():
    for seed in (3, 17, 99):
        log = random_log(seed, max_ops=60)
        for session in segment(log, 60 * S):
            if session.kind.value != "CAS":
                continue
            assert main_conflict_entries(session, W) == oracle_conflicts(session, W)


def test_oracle_clusterize_absolute_rows():
    log = make_log([(0, "a", 0), (1 * S, "a", 2), (200 * S, "a", 3)])
    sessions = segment(log, 30 * S)
    assert oracle_clusterize(sessions[0], W) == [(0, 1)]
    assert oracle_clusterize(sessions[1], W) == [(2,)]


def test_compare_document_clean_on_random_logs():
    for seed in range(25):
        log = random_log(seed, max_ops=80)
        assert compare_document(log, 60 * S, W) == []
        assert compare_document(log, 300 * S, Window(10 * S, 5), strict_def3=True) == []
