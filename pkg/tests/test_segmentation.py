import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cetrace.log_model import EditLog, normalize
from cetrace.segmentation import (
    SessionKind,
    external_distances,
    segment,
    session_stats,
)
from cetrace.synth import random_log
from conftest import make_log

S = 1000  # ms per second


def test_split_on_gap():
    log = make_log([(0, "a", 0), (20 * S, "a", 1), (100 * S, "a", 2)])
    sessions = segment(log, 30 * S)
    assert len(sessions) == 2
    assert sessions[0].n_ops == 2 and sessions[1].n_ops == 1


def test_boundary_gap_splits():
    # a distance equal to the gap already separates sessions
    log = make_log([(0, "a", 0), (30 * S, "a", 1)])
    assert len(segment(log, 30 * S)) == 2
    log = make_log([(0, "a", 0), (30 * S - 1, "a", 1)])
    assert len(segment(log, 30 * S)) == 1


def test_kinds():
    log = make_log([(0, "a", 0), (1 * S, "b", 1), (100 * S, "a", 2)])
    sessions = segment(log, 30 * S)
    assert [s.kind for s in sessions] == [SessionKind.CAS, SessionKind.SAS]
    assert sessions[0].author_count == 2
    assert sessions[1].author_count == 1


def test_single_op_log():
    log = make_log([(5, "a", 0)])
    sessions = segment(log, 30 * S)
    assert len(sessions) == 1
    assert sessions[0].start_ts == sessions[0].end_ts == 5


def test_empty_log():
    log = EditLog.from_ops("d", [])
    assert segment(log, 30 * S) == []


def test_segment_errors():
    log = make_log([(0, "a", 0)])
    with pytest.raises(ValueError):
        segment(log, 0)
    unsorted = make_log([(5, "a", 0), (0, "a", 1)])
    with pytest.raises(ValueError, match="not normalized"):
        segment(unsorted, 30 * S)


def test_session_ops_view():
    log = make_log([(0, "a", 3), (1 * S, "b", 7), (90 * S, "a", 9)])
    first = segment(log, 30 * S)[0]
    assert [op.pos for op in first.iter_ops()] == [3, 7]
    assert first.doc_id == "doc"


def test_session_stats_normalized_count():
    # 3 edits by 2 authors: raw 3, normalized 1.5
    log = make_log([(0, "a", 0), (1 * S, "b", 1), (2 * S, "a", 2)])
    (session,) = segment(log, 30 * S)
    stats = session_stats(session, 30 * S)
    assert stats.edit_count == 3
    assert stats.normalized_edit_count == pytest.approx(1.5)
    assert stats.internal_distances_ms == (1 * S, 1 * S)
    assert stats.length_ms == 2 * S


def test_external_distances():
    log = make_log([(0, "a", 0), (10 * S, "a", 1), (55 * S, "a", 2), (200 * S, "a", 3)])
    sessions = segment(log, 30 * S)
    assert len(sessions) == 3
    assert external_distances(sessions) == [45 * S, 145 * S]
    assert external_distances(sessions[:1]) == []


GAP_LADDER_MS = (30 * S, 60 * S, 120 * S, 300 * S, 420 * S, 900 * S)


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_segmentation_laws(seed):
    log = random_log(seed, max_ops=80)
    previous = None
    for gap in GAP_LADDER_MS:
        sessions = segment(log, gap)
        # partition: consecutive, covering, non-overlapping
        assert [s.index for s in sessions] == list(range(len(sessions)))
        bounds = [(s.start, s.stop) for s in sessions]
        assert bounds[0][0] == 0 and bounds[-1][1] == len(log)
        for (_, stop), (start, _) in zip(bounds, bounds[1:]):
            assert stop == start
        # distances: internal < gap <= external
        for s in sessions:
            stats = session_stats(s, gap)
            assert all(d < gap for d in stats.internal_distances_ms)
        assert all(d >= gap for d in external_distances(sessions))
        # session count never increases as the gap grows
        if previous is not None:
            assert len(sessions) <= previous
        previous = len(sessions)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_cas_monotone_in_gap(seed):
    log = random_log(seed, max_ops=80)
    had_cas = False
    for gap in GAP_LADDER_MS:
        has_cas = any(s.kind is SessionKind.CAS for s in segment(log, gap))
        assert has_cas or not had_cas  # once CAS, always CAS at larger gaps
        had_cas = has_cas
