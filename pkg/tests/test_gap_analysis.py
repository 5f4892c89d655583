import pytest
from hypothesis import given, settings, strategies as st

from cetrace.gap_analysis import (
    DEFAULT_GAPS_MS,
    DEFAULT_INTERVAL_BOUNDS_MS,
    ExternalDistanceHistogram,
    external_distribution,
    interval_labels,
    recommend_gap,
    sweep,
)
from cetrace.synth import random_log
from conftest import make_log

S = 1000


def hand_corpus():
    doc_a = make_log(
        [(0, "a", 0), (1 * S, "b", 1), (2 * S, "a", 2), (100 * S, "c", 3), (101 * S, "c", 4)],
        doc_id="doc-a",
    )
    doc_b = make_log([(0, "b", 0), (5 * S, "b", 1)], doc_id="doc-b")
    return [doc_a, doc_b]


def test_sweep_hand_values():
    (row,) = sweep(hand_corpus(), [30 * S])
    assert row.gap_ms == 30 * S
    assert row.docs_with_cas == (1, 2, 0.5)
    assert row.cas_per_doc_avg == pytest.approx(1.0)
    assert row.cas_proportion_of_sessions == pytest.approx(0.5)
    assert row.internal_distance_sas_ms.mean == pytest.approx(3 * S)
    assert row.internal_distance_sas_ms.n == 2
    assert row.internal_distance_cas_ms.mean == pytest.approx(1 * S)
    assert row.session_length_sas_ms == pytest.approx(3 * S)
    assert row.session_length_cas_ms == pytest.approx(2 * S)
    assert row.edit_count_sas == pytest.approx(2.0)
    assert row.edit_count_cas == pytest.approx(3.0)
    # 3 edits by 2 session authors: 1.5
    assert row.edit_count_cas_normalized == pytest.approx(1.5)


def test_sweep_normalize_scope_doc():
    (row,) = sweep(hand_corpus(), [30 * S], normalize_scope="doc")
    # doc-a has 3 distinct authors overall: 3 edits / 3 authors
    assert row.edit_count_cas_normalized == pytest.approx(1.0)


def test_sweep_cas_scope_all_docs():
    (row,) = sweep(hand_corpus(), [30 * S], cas_scope="all_docs")
    assert row.cas_per_doc_avg == pytest.approx(0.5)
    assert row.cas_proportion_of_sessions == pytest.approx(0.25)
    # distance/length/edit averages still skip docs without CAS sessions
    assert row.edit_count_cas == pytest.approx(3.0)


def test_sweep_no_cas_anywhere():
    (row,) = sweep([make_log([(0, "a", 0), (1 * S, "a", 1)])], [30 * S])
    assert row.docs_with_cas == (0, 1, 0.0)
    assert row.cas_per_doc_avg is None
    assert row.internal_distance_cas_ms is None
    assert row.edit_count_sas == pytest.approx(2.0)


def test_sweep_validation():
    corpus = hand_corpus()
    with pytest.raises(ValueError, match="empty corpus"):
        sweep([], [30 * S])
    with pytest.raises(ValueError):
        sweep(corpus, [])
    with pytest.raises(ValueError):
        sweep(corpus, [30 * S, 30 * S])
    with pytest.raises(ValueError):
        sweep(corpus, [30 * S, 0])
    with pytest.raises(ValueError, match="normalize scope"):
        sweep(corpus, [30 * S], normalize_scope="author")
    with pytest.raises(ValueError, match="cas scope"):
        sweep(corpus, [30 * S], cas_scope="everything")


def test_default_gap_ladder():
    assert DEFAULT_GAPS_MS == (900_000, 420_000, 300_000, 120_000, 60_000, 30_000)
    rows = sweep(hand_corpus(), DEFAULT_GAPS_MS)
    assert [r.gap_ms for r in rows] == list(DEFAULT_GAPS_MS)


def spaced_log(distances_s, doc_id="doc"):
    """One op per session; consecutive sessions separated by the distances."""
    rows = [(0, "a", 0)]
    t = 0
    for i, d in enumerate(distances_s):
        t += d * S
        rows.append((t, "a", i + 1))
    return make_log(rows, doc_id=doc_id)


def test_histogram_spec_example():
    hist = external_distribution([spaced_log([45, 70, 130])], 30 * S)
    assert hist.bounds_ms == DEFAULT_INTERVAL_BOUNDS_MS
    (doc_id, props) = hist.per_doc[0]
    assert doc_id == "doc"
    third = 1 / 3
    assert props == pytest.approx((third, third, third, 0, 0, 0, 0, 0))
    assert hist.corpus_avg == pytest.approx(props)


def test_histogram_boundary_values():
    hist = external_distribution([spaced_log([60])], 30 * S)
    (_, props) = hist.per_doc[0]
    assert props[1] == 1.0  # 60s lands in [60, 120), not [30, 60)
    hist = external_distribution([spaced_log([900])], 30 * S)
    (_, props) = hist.per_doc[0]
    assert props[-1] == 1.0  # last interval is unbounded


def test_histogram_proportions_sum_to_one():
    for seed in range(30):
        log = random_log(seed, max_ops=80)
        hist = external_distribution([log], 30 * S)
        for _, props in hist.per_doc:
            assert sum(props) == pytest.approx(1.0, abs=1e-9)


def test_histogram_skips_single_session_docs():
    corpus = [spaced_log([45], doc_id="two"), make_log([(0, "a", 0)], doc_id="one")]
    hist = external_distribution(corpus, 30 * S)
    assert [doc for doc, _ in hist.per_doc] == ["two"]
    assert hist.n_docs_total == 2


def test_histogram_validation():
    with pytest.raises(ValueError, match="empty corpus"):
        external_distribution([], 30 * S)
    with pytest.raises(ValueError, match="base gap"):
        external_distribution([spaced_log([45])], 60 * S)
    with pytest.raises(ValueError, match="strictly increasing"):
        external_distribution([spaced_log([45])], 30 * S, (30_000, 30_000, 60_000))


def test_interval_labels():
    labels = interval_labels(DEFAULT_INTERVAL_BOUNDS_MS)
    assert labels[0] == "[30s, 1mn)"
    assert labels[-1] == "[15mn, )"
    assert len(labels) == 8


def fake_hist(coverage):
    return ExternalDistanceHistogram(
        30_000,
        DEFAULT_INTERVAL_BOUNDS_MS,
        (("doc", tuple(coverage)),),
        tuple(coverage),
        1,
    )


def test_recommend_uniform_mass():
    rec = recommend_gap(fake_hist([1 / 8] * 8))
    # cumulative first reaches 0.5 in the fourth interval
    assert rec.interval_index == 3
    assert rec.gap_ms == 240_000


def test_recommend_front_loaded():
    rec = recommend_gap(fake_hist([0.37, 0.19, 0.10, 0.06, 0.05, 0.04, 0.08, 0.11]))
    assert rec.gap_ms == 120_000
    rec = recommend_gap(fake_hist([1, 0, 0, 0, 0, 0, 0, 0]))
    assert rec.gap_ms == 60_000


def test_recommend_saturates_at_last_bound():
    rec = recommend_gap(fake_hist([0, 0, 0, 0, 0, 0, 0, 1.0]))
    assert rec.interval_index == 7
    assert rec.gap_ms == 900_000


def test_recommend_threshold_parameter():
    coverage = [0.30, 0.30, 0.40, 0, 0, 0, 0, 0]
    assert recommend_gap(fake_hist(coverage), threshold=0.25).gap_ms == 60_000
    assert recommend_gap(fake_hist(coverage), threshold=0.5).gap_ms == 120_000
    assert recommend_gap(fake_hist(coverage), threshold=0.9).gap_ms == 180_000


def test_recommend_empty_histogram_errors():
    empty = ExternalDistanceHistogram(
        30_000, DEFAULT_INTERVAL_BOUNDS_MS, (), (0.0,) * 8, 3
    )
    with pytest.raises(ValueError, match="empty histogram"):
        recommend_gap(empty)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=5_000))
def test_sweep_session_counts_monotone(seed):
    log = random_log(seed, max_ops=60)
    rows = sweep([log], DEFAULT_GAPS_MS)
    # DEFAULT_GAPS_MS is descending, so CAS prevalence can only drop
    counts = [r.docs_with_cas.count for r in rows]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
