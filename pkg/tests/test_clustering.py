import pytest
from hypothesis import given, settings, strategies as st

from cetrace.clustering import Window, clusterize, parse_window
from cetrace.oracles import oracle_clusterize
from cetrace.segmentation import segment
from cetrace.synth import random_log
from conftest import make_log

S = 1000


def test_window_parse_and_label():
    w = parse_window("30s,10c")
    assert w == Window(30_000, 10)
    assert w.label() == "[30s, 10c]"
    assert parse_window("300s, 400") == Window(300_000, 400)
    # report labels parse back to the same window
    assert parse_window(w.label()) == w
    with pytest.raises(ValueError):
        parse_window("30s")
    with pytest.raises(ValueError):
        parse_window("30s,0c")
    with pytest.raises(ValueError):
        Window(0, 5)


def one_session(log, gap_ms=300 * S):
    sessions = segment(log, gap_ms)
    assert len(sessions) == 1
    return sessions[0]


def test_two_close_ops_one_cluster():
    log = make_log([(0, "a", 0), (1 * S, "b", 3)])
    clusters = clusterize(one_session(log), Window(30 * S, 10))
    assert len(clusters) == 1
    assert clusters[0].members == (0, 1)


def test_threshold_is_strict():
    # linking needs distance strictly below both thresholds
    log = make_log([(0, "a", 0), (30 * S, "a", 0)])
    assert len(clusterize(one_session(log), Window(30 * S, 10))) == 2
    log = make_log([(0, "a", 0), (1 * S, "a", 10)])
    assert len(clusterize(one_session(log), Window(30 * S, 10))) == 2
    log = make_log([(0, "a", 0), (30 * S - 1, "a", 9)])
    assert len(clusterize(one_session(log), Window(30 * S, 10))) == 1


def test_single_linkage_chains():
    # a-b and b-c within the window, a-c not: one chained cluster
    log = make_log([(0, "a", 0), (2 * S, "a", 8), (4 * S, "a", 16)])
    clusters = clusterize(one_session(log), Window(30 * S, 10))
    assert len(clusters) == 1
    assert clusters[0].members == (0, 1, 2)


def test_cluster_bounding_box():
    log = make_log([(0, "a", 5), (1 * S, "a", 2), (2 * S, "a", 9)])
    (cluster,) = clusterize(one_session(log), Window(30 * S, 10))
    assert (cluster.ts_min, cluster.ts_max) == (0, 2 * S)
    assert (cluster.pos_min, cluster.pos_max) == (2, 9)


def test_clusters_partition_session():
    log = make_log([(0, "a", 0), (1 * S, "a", 500), (2 * S, "a", 1)])
    clusters = clusterize(one_session(log), Window(30 * S, 10))
    members = sorted(m for c in clusters for m in c.members)
    assert members == [0, 1, 2]
    assert len(clusters) == 2


@settings(max_examples=120, deadline=None)
@given(
    st.integers(min_value=0, max_value=10_000),
    st.sampled_from([Window(10 * S, 5), Window(30 * S, 10), Window(60 * S, 20)]),
)
def test_matches_oracle(seed, window):
    log = random_log(seed, max_ops=60)
    for session in segment(log, 120 * S):
        fast = [c.members for c in clusterize(session, window)]
        slow = oracle_clusterize(session, window)
        assert sorted(fast) == sorted(slow)
