import pytest
from hypothesis import given, settings, strategies as st

from cetrace.clustering import Window
from cetrace.conflicts import (
    Outcome,
    conflict_survey,
    evaluate_border,
    evaluate_insertion,
    find_border_cases,
    find_insertion_cases,
    survey_corpus,
    survey_document,
)
from cetrace.segmentation import segment
from cetrace.synth import random_log
from conftest import make_log

S = 1000
W = Window(30 * S, 10)


def cas(rows, gap_ms=300 * S):
    sessions = segment(make_log(rows), gap_ms)
    assert len(sessions) == 1
    return sessions[0]


def test_find_border_cases_positions_and_distances():
    session = cas([(0, "a", 100), (5 * S, "a", 105), (10 * S, "b", 103), (12 * S, "a", 104)])
    cases = find_border_cases(session)
    assert [(c.x_index, c.y_index) for c in cases] == [(1, 2), (2, 3)]
    first = cases[0]
    assert first.x.author == "a" and first.y.author == "b"
    assert first.time_distance_ms == 5 * S
    assert first.position_distance == 2
    assert first.x_prime is not None and first.x_prime.pos == 104
    assert cases[1].x_prime is None


def test_border_outcomes_ladder():
    session = cas([(0, "a", 100), (5 * S, "a", 105), (10 * S, "b", 103), (12 * S, "a", 104)])
    case = find_border_cases(session)[0]
    # does not fit a tiny window
    assert evaluate_border(case, Window(5 * S, 10)) is Outcome.CONSIDER
    assert evaluate_border(case, Window(30 * S, 2)) is Outcome.CONSIDER
    # fits [30s, 10c]; follow-up lands between the pair (mirrored orientation)
    assert evaluate_border(case, W) is Outcome.CONFLICT
    assert case.outcome is Outcome.CONFLICT and case.window == W
    # strict orientation requires increasing positions x < x' < y
    assert evaluate_border(case, W, strict_def3=True) is Outcome.POTENTIAL


def test_border_conflict_increasing_orientation():
    session = cas([(0, "a", 100), (3 * S, "b", 106), (5 * S, "a", 103)])
    case = find_border_cases(session)[0]
    assert evaluate_border(case, W, strict_def3=True) is Outcome.CONFLICT
    assert evaluate_border(case, W) is Outcome.CONFLICT


def test_border_no_follow_up_stays_potential():
    session = cas([(0, "a", 100), (3 * S, "b", 104)])
    case = find_border_cases(session)[0]
    assert evaluate_border(case, W) is Outcome.POTENTIAL


def test_border_third_author_follow_up_not_conflict():
    session = cas([(0, "a", 100), (3 * S, "b", 106), (5 * S, "c", 103)])
    case = find_border_cases(session)[0]
    assert evaluate_border(case, W) is Outcome.POTENTIAL


def test_border_follow_up_must_be_prompt():
    session = cas([(0, "a", 100), (3 * S, "b", 106), (40 * S, "a", 103)], gap_ms=300 * S)
    case = find_border_cases(session)[0]
    assert evaluate_border(case, W) is Outcome.POTENTIAL


def test_border_follow_up_on_boundary_not_between():
    # x' exactly at x or y position is not strictly between
    session = cas([(0, "a", 100), (3 * S, "b", 106), (5 * S, "a", 106)])
    case = find_border_cases(session)[0]
    assert evaluate_border(case, W) is Outcome.POTENTIAL


def test_find_border_requires_cas():
    (session,) = segment(make_log([(0, "a", 0), (1 * S, "a", 1)]), 300 * S)
    with pytest.raises(ValueError, match="not a co-author session"):
        find_border_cases(session)
    with pytest.raises(ValueError, match="not a co-author session"):
        find_insertion_cases(session)


def test_find_insertion_cases_shape():
    session = cas(
        [
            (0, "a", 100),
            (2 * S, "b", 104),
            (4 * S, "b", 108),
            (6 * S, "a", 112),
            (8 * S, "b", 106),
        ]
    )
    cases = find_insertion_cases(session)
    assert len(cases) == 2  # a[b b]a and b[a]b patterns both match
    case = cases[0]
    assert (case.x1_index, case.x2_index) == (0, 3)
    assert [op.pos for op in case.block] == [104, 108]
    assert case.time_distance_ms == 6 * S
    assert case.position_distance == 12
    assert case.x_prime is not None and case.x_prime.pos == 106


def test_insertion_block_ends_at_third_author():
    session = cas([(0, "a", 100), (2 * S, "b", 104), (4 * S, "c", 108), (6 * S, "a", 112)])
    assert find_insertion_cases(session) == []


def test_insertion_conflict_example():
    session = cas(
        [
            (0, "a", 100),
            (2 * S, "b", 104),
            (4 * S, "b", 108),
            (6 * S, "a", 112),
            (8 * S, "b", 106),
        ]
    )
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.CONFLICT
    assert case.witness is not None
    assert [op.pos for op in case.witness] == [104, 108]


def test_insertion_witness_subset_drops_outside_ops():
    # one block op lies outside the (x1, x2) interval; the witness may
    # leave it out, so the case still fits the window
    session = cas([(0, "a", 100), (2 * S, "b", 104), (4 * S, "b", 300), (6 * S, "a", 112)])
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.POTENTIAL
    assert [op.pos for op in case.witness] == [104]


def test_insertion_witness_needs_chain_gaps_under_p():
    # 105 -> 120 jumps 15 >= 10 and no subset can close it
    session = cas([(0, "a", 100), (2 * S, "b", 105), (6 * S, "a", 120)])
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.CONSIDER
    assert case.witness is None


def test_insertion_block_fully_outside_is_consider():
    session = cas([(0, "a", 100), (2 * S, "b", 99), (6 * S, "a", 104)])
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.CONSIDER


def test_insertion_equal_endpoints_no_interval():
    session = cas([(0, "a", 100), (2 * S, "b", 100), (6 * S, "a", 100)])
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.CONSIDER


def test_insertion_time_gaps_checked_per_step():
    # each step is 20s < 30s even though the whole case spans 60s
    session = cas(
        [(0, "a", 100), (20 * S, "b", 104), (40 * S, "b", 108), (60 * S, "a", 112)]
    )
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.POTENTIAL
    # one step at the threshold demotes the case
    session = cas(
        [(0, "a", 100), (30 * S, "b", 104), (32 * S, "b", 108), (34 * S, "a", 112)]
    )
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.CONSIDER


def test_insertion_descending_orientation():
    session = cas([(0, "a", 112), (2 * S, "b", 108), (4 * S, "b", 104), (6 * S, "a", 100)])
    case = find_insertion_cases(session)[0]
    assert evaluate_insertion(case, W) is Outcome.POTENTIAL
    assert [op.pos for op in case.witness] == [108, 104]  # follows x1 -> x2


def test_insertion_follow_up_author_rule():
    rows = [
        (0, "a", 100),
        (2 * S, "b", 104),
        (4 * S, "b", 108),
        (6 * S, "a", 112),
        (8 * S, "c", 106),
    ]
    case = find_insertion_cases(cas(rows))[0]
    assert evaluate_insertion(case, W) is Outcome.POTENTIAL


def test_survey_document_matches_case_evaluation():
    for seed in range(40):
        log = random_log(seed, max_ops=60)
        for window in (Window(10 * S, 5), W):
            for strict in (False, True):
                counts = survey_document(log, [window], 60 * S, strict_def3=strict)[0]
                b = [0, 0, 0]
                i = [0, 0, 0]
                from cetrace.segmentation import SessionKind

                for session in segment(log, 60 * S):
                    if session.kind is not SessionKind.CAS:
                        continue
                    for case in find_border_cases(session):
                        out = evaluate_border(case, window, strict_def3=strict)
                        for level in range(out + 1):
                            b[level] += 1
                    for case in find_insertion_cases(session):
                        out = evaluate_insertion(case, window)
                        for level in range(out + 1):
                            i[level] += 1
                assert (counts.border.consider, counts.border.potential, counts.border.conflict) == tuple(b)
                assert (counts.insertion.consider, counts.insertion.potential, counts.insertion.conflict) == tuple(i)


WINDOW_LADDER = (Window(5 * S, 3), Window(10 * S, 5), Window(30 * S, 10), Window(60 * S, 20))


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_lattice_and_window_monotonicity(seed):
    from cetrace.segmentation import SessionKind

    log = random_log(seed, max_ops=70)
    for session in segment(log, 120 * S):
        if session.kind is not SessionKind.CAS:
            continue
        for case in find_border_cases(session):
            outcomes = [evaluate_border(case, w) for w in WINDOW_LADDER]
            assert all(b >= a for a, b in zip(outcomes, outcomes[1:]))
        for case in find_insertion_cases(session):
            outcomes = [evaluate_insertion(case, w) for w in WINDOW_LADDER]
            assert all(b >= a for a, b in zip(outcomes, outcomes[1:]))


def test_survey_corpus_aggregation():
    logs = [
        make_log([(0, "a", 100), (3 * S, "b", 106), (5 * S, "a", 103)], doc_id="d1"),
        make_log([(0, "a", 100), (3 * S, "b", 104)], doc_id="d2"),
        make_log([(0, "a", 0), (1 * S, "a", 1)], doc_id="d3"),  # SAS only
    ]
    table = conflict_survey(logs, W, base_gap_ms=30 * S)
    assert table.window == W and table.base_gap_ms == 30 * S
    # d1: 2 border cases, 2 potential, 1 conflict; d2: 1 case, 1 potential
    assert table.border.n_consider == 3
    assert table.border.n_potential == 3
    assert table.border.n_conflict == 1
    # proportions average per doc: [1.0, 1.0] -> degenerate-free mean 1.0
    assert table.border.potential_over_consider.mean == pytest.approx(1.0)
    # conflict/potential: [0.5, 0.0] -> 0.25
    assert table.border.conflict_over_potential.mean == pytest.approx(0.25)
    # conflict distances come from d1's single conflict: dt 3s, dp 6
    assert table.border.time_distance_ms.mean == pytest.approx(3 * S)
    assert table.border.time_distance_ms.degenerate
    assert table.border.position_distance.mean == pytest.approx(6)
    # d1's a,b,a shape also yields one insertion case, but 106 lies
    # outside the (100, 103) interval so it never fits the window
    assert table.insertion.n_consider == 1
    assert table.insertion.n_potential == 0
    assert table.insertion.potential_over_consider.mean == pytest.approx(0.0)
    assert table.insertion.conflict_over_potential is None
    assert table.note is None


def test_survey_corpus_no_cas_note():
    logs = [make_log([(0, "a", 0), (1 * S, "a", 1)])]
    table = conflict_survey(logs, W)
    assert table.note == "no co-author sessions"
    assert table.border.n_consider == 0


def test_survey_corpus_empty_errors():
    with pytest.raises(ValueError, match="empty corpus"):
        survey_corpus([], [W])


def test_survey_jobs_equivalence(fixture_corpus):
    one = survey_corpus(fixture_corpus, WINDOW_LADDER, 300 * S, jobs=1)
    many = survey_corpus(fixture_corpus, WINDOW_LADDER, 300 * S, jobs=8)
    assert one == many
