"""
Tests for situational awareness: interaction logs, behavior scores,
reputation and inter-rater agreement.
"""

import numpy as np
import pytest

from pipelines.alert_swarm.core.awareness import (
    BehaviorRecord,
    InteractionEntry,
    InteractionLog,
    Reputation,
    fitness_of,
    fleiss_kappa,
    kappa_or_unanimous,
    round_agreement,
    score_response,
    update_reputation,
    update_responsiveness,
    update_truthfulness,
)
from pipelines.alert_swarm.core.model import Belief
from pipelines.alert_swarm.errors import DegenerateAgreement, SubjectMismatch

from .conftest import make_log

# 10 subjects, 5 categories, 14 raters per subject
WIKIPEDIA_RATINGS = [
    [0, 0, 0, 0, 14],
    [0, 2, 6, 4, 2],
    [0, 0, 3, 5, 6],
    [0, 3, 9, 2, 0],
    [2, 2, 8, 1, 1],
    [7, 7, 0, 0, 0],
    [3, 2, 6, 3, 0],
    [2, 5, 3, 2, 2],
    [6, 5, 2, 1, 0],
    [0, 2, 2, 3, 7],
]


class TestInteractionLog:
    """Tests for the append-only interaction log."""

    def test_append_returns_new_log(self):
        """Appending leaves the original untouched."""
        log = InteractionLog()
        longer = log.append(InteractionEntry(tick=0, queried=True, responded=False))
        assert len(log) == 0
        assert len(longer) == 1

    def test_rejects_out_of_order_entry(self):
        log = make_log(1.0, 1.0)
        with pytest.raises(ValueError):
            log.append(InteractionEntry(tick=0, queried=True, responded=False))

    def test_capacity_keeps_newest(self):
        """Capacity bounds the stored entries, not the consumed count."""
        log = InteractionLog()
        for tick in range(10):
            log = log.append(InteractionEntry(tick=tick, queried=True, responded=True), capacity=4)
        assert [e.tick for e in log.entries] == [6, 7, 8, 9]
        assert log.consumed == 10

    def test_agreement_requires_response(self):
        with pytest.raises(ValueError):
            InteractionEntry(tick=0, queried=True, responded=False, agreement=1.0)

    def test_agreement_range(self):
        with pytest.raises(ValueError):
            InteractionEntry(tick=0, queried=True, responded=True, agreement=1.5)


class TestResponsiveness:
    """Tests for update_responsiveness."""

    def test_all_answered(self):
        assert update_responsiveness(make_log(1, 1, 1, 1), window=20) == 1.0

    def test_none_answered(self):
        assert update_responsiveness(make_log(None, None, None, None), window=20) == 0.0

    def test_three_of_five(self):
        assert update_responsiveness(make_log(1, None, 1, None, 1), window=20) == pytest.approx(0.6)

    def test_empty_log_is_fully_responsive(self):
        assert update_responsiveness(InteractionLog(), window=20) == 1.0

    def test_window_anchored_at_newest_entry(self):
        """Only ticks in (newest - window, newest] count."""
        log = make_log(None, None, None, None, None, None, None, 1, 1, 1)
        assert update_responsiveness(log, window=3) == 1.0
        assert update_responsiveness(log, window=10) == pytest.approx(0.3)

    def test_explicit_now_with_empty_window(self):
        log = make_log(1, None)
        assert update_responsiveness(log, window=2, now=50) == 1.0

    def test_window_must_be_positive(self):
        with pytest.raises(ValueError):
            update_responsiveness(make_log(1), window=0)


class TestTruthfulness:
    """Tests for the exponentially weighted truthfulness."""

    def test_no_responses_is_neutral(self):
        assert update_truthfulness(make_log(None, None), alpha=0.3) == 0.5

    def test_unscored_responses_are_neutral(self):
        assert update_truthfulness(make_log('r', 'r'), alpha=0.3) == 0.5

    def test_consistent_agreement(self):
        assert update_truthfulness(make_log(1, 1, 1, 1), alpha=0.3) == pytest.approx(1.0)

    def test_consistent_disagreement(self):
        assert update_truthfulness(make_log(-1, -1, -1), alpha=0.3) == pytest.approx(0.0)

    def test_seeded_from_first_outcome(self):
        """First outcome 1.0, then 0.0 at weight 0.5."""
        assert update_truthfulness(make_log(1, -1), alpha=0.5) == pytest.approx(0.5)

    def test_alpha_one_tracks_latest(self):
        assert update_truthfulness(make_log(1, 1, -1), alpha=1.0) == pytest.approx(0.0)

    def test_ignored_queries_skipped(self):
        assert update_truthfulness(make_log(1, None, None), alpha=0.3) == pytest.approx(1.0)

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(ValueError):
            update_truthfulness(make_log(1), alpha=alpha)


class TestReputation:
    """Tests for update_reputation and BehaviorRecord."""

    def test_perfect_peer(self):
        record = BehaviorRecord(responsiveness=1.0, truthfulness=1.0, sample_count=4)
        assert update_reputation(record).value == pytest.approx(1.0)

    def test_product(self):
        record = BehaviorRecord(responsiveness=0.8, truthfulness=0.5, sample_count=4)
        assert update_reputation(record).value == pytest.approx(0.4)

    def test_unobserved_peer_is_neutral(self):
        record = BehaviorRecord(responsiveness=0.0, truthfulness=0.0, sample_count=0)
        assert update_reputation(record) == Reputation(0.5)

    def test_record_clamps_scores(self):
        record = BehaviorRecord(responsiveness=1.2, truthfulness=-0.1, sample_count=1)
        assert record.responsiveness == 1.0
        assert record.truthfulness == 0.0

    def test_reputation_range(self):
        with pytest.raises(ValueError):
            Reputation(1.01)

    def test_record_from_log(self):
        record = BehaviorRecord.from_log(make_log(1, None, 1, None, 1), alpha=0.3, window=20)
        assert record.responsiveness == pytest.approx(0.6)
        assert record.truthfulness == pytest.approx(1.0)
        assert record.sample_count == 5


class TestFleissKappa:
    """Tests for fleiss_kappa and its degenerate case."""

    def test_reference_table(self):
        """Textbook 10 x 5 table with 14 raters."""
        assert fleiss_kappa(WIKIPEDIA_RATINGS) == pytest.approx(0.20993, abs=1e-4)

    def test_complete_disagreement(self):
        """Two raters split on every subject."""
        assert fleiss_kappa([[1, 1], [1, 1]]) == pytest.approx(-1.0)

    def test_perfect_agreement_across_categories(self):
        assert fleiss_kappa([[3, 0], [0, 3]]) == pytest.approx(1.0)

    def test_unanimous_single_category_is_degenerate(self):
        with pytest.raises(DegenerateAgreement) as exc:
            fleiss_kappa([[3, 0], [3, 0]])
        assert exc.value.observed == pytest.approx(1.0)

    def test_unanimous_resolves_to_one(self):
        assert kappa_or_unanimous(np.array([[3, 0], [3, 0]])) == 1.0

    @pytest.mark.parametrize("ratings", [
        [1, 2, 3],
        [[1, 1], [2, 1]],
        [[1], [1]],
        [[1, 0], [1, 0]],
        [[-1, 3], [1, 1]],
        [[0.5, 1.5], [1, 1]],
    ])
    def test_invalid_matrices(self, ratings):
        """Shape, row sums, rater count and integrality are enforced."""
        with pytest.raises(ValueError):
            fleiss_kappa(ratings)


class TestRoundAgreement:
    """Tests for round_agreement."""

    def test_agreeing_responders(self):
        answers = {1: {0: 'A', 1: 'B'}, 2: {0: 'A', 1: 'B'}}
        assert round_agreement(answers, ('A', 'B', 'C', 'D')) == pytest.approx(1.0)

    def test_single_responder(self):
        assert round_agreement({1: {0: 'A'}}, ('A', 'B')) is None

    def test_no_shared_cell(self):
        answers = {1: {0: 'A', 1: None}, 2: {0: None, 1: 'B'}}
        assert round_agreement(answers, ('A', 'B')) is None

    def test_split_answers(self):
        answers = {1: {0: 'A', 1: 'A'}, 2: {0: 'B', 1: 'B'}}
        assert round_agreement(answers, ('A', 'B')) == pytest.approx(-1.0)


class TestScoring:
    """Tests for score_response and fitness_of."""

    def test_match(self):
        own = Belief(subject=3, value='A', origin=0, observed_at=5)
        peer = Belief(subject=3, value='A', origin=1, observed_at=6)
        assert score_response(own, peer) == 1.0

    def test_mismatch(self):
        own = Belief(subject=3, value='A', origin=0, observed_at=5)
        peer = Belief(subject=3, value='B', origin=1, observed_at=6)
        assert score_response(own, peer) == -1.0

    def test_different_cells(self):
        own = Belief(subject=3, value='A', origin=0, observed_at=5)
        peer = Belief(subject=4, value='A', origin=1, observed_at=6)
        with pytest.raises(SubjectMismatch):
            score_response(own, peer)

    def test_fitness_is_mean_truthfulness(self):
        holders = [
            {7: BehaviorRecord(truthfulness=1.0, sample_count=2)},
            {7: BehaviorRecord(truthfulness=0.4, sample_count=1)},
            {7: BehaviorRecord(truthfulness=0.0, sample_count=0)},
            {8: BehaviorRecord(truthfulness=0.0, sample_count=3)},
        ]
        assert fitness_of(7, holders) == pytest.approx(0.7)

    def test_fitness_unobserved(self):
        assert fitness_of(7, [{}, {}]) == 0.5
