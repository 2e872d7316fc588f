"""
Tests for the model generator and anomaly detector.
"""

import pytest

from pipelines.alert_swarm.core.anomaly import (
    AlertnessBands,
    AnomalyDetector,
    BehaviorReport,
    MergedBehavior,
    ModelGenerator,
    Thresholds,
    assess_risk,
    blend_peer_risk,
    classify_threat,
    merge_behavior_data,
    prioritize_threats,
    update_alertness,
)
from pipelines.alert_swarm.core.awareness import BehaviorRecord, Reputation
from pipelines.alert_swarm.core.model import AlertnessLevel, Position, ThreatLevel
from pipelines.alert_swarm.errors import UnknownReporter


def merged(responsiveness, truthfulness, subject=1):
    return MergedBehavior(subject=subject, responsiveness=responsiveness,
                          truthfulness=truthfulness, total_weight=1.0)


class TestBehaviorReport:
    """Tests for BehaviorReport validation."""

    def test_self_report_rejected(self):
        with pytest.raises(ValueError):
            BehaviorReport(reporter=2, subject=2, responsiveness=0.5, truthfulness=0.5, reported_at=0)

    def test_score_range(self):
        with pytest.raises(ValueError):
            BehaviorReport(reporter=1, subject=2, responsiveness=1.5, truthfulness=0.5, reported_at=0)


class TestMerge:
    """Tests for merge_behavior_data."""

    def test_single_reporter(self):
        reports = [BehaviorReport(1, 5, 0.8, 0.6, 0)]
        result = merge_behavior_data(reports, {1: Reputation(0.9)})
        assert result[5].responsiveness == pytest.approx(0.8)
        assert result[5].truthfulness == pytest.approx(0.6)

    def test_reputation_weighted(self):
        reports = [BehaviorReport(1, 5, 1.0, 0.9, 0), BehaviorReport(2, 5, 1.0, 0.3, 0)]
        result = merge_behavior_data(reports, {1: 1.0, 2: 0.5})
        assert result[5].truthfulness == pytest.approx(0.7)
        assert result[5].total_weight == pytest.approx(1.5)

    def test_own_record_has_unit_weight(self):
        reports = [BehaviorReport(1, 5, 0.0, 0.0, 0)]
        own = {5: BehaviorRecord(responsiveness=1.0, truthfulness=1.0, sample_count=3)}
        result = merge_behavior_data(reports, {1: 0.5}, own)
        assert result[5].truthfulness == pytest.approx(1 / 1.5)

    def test_zero_weight_subject_omitted(self):
        result = merge_behavior_data([BehaviorReport(1, 5, 0.2, 0.2, 0)], {1: 0.0})
        assert result == {}

    def test_unknown_reporter(self):
        with pytest.raises(UnknownReporter) as exc:
            merge_behavior_data([BehaviorReport(4, 5, 0.2, 0.2, 0)], {1: 1.0})
        assert exc.value.reporter == 4

    def test_generator_schedule(self):
        generator = ModelGenerator(period=3)
        assert [t for t in range(7) if generator.is_due(t)] == [0, 3, 6]
        with pytest.raises(ValueError):
            ModelGenerator(period=0)


class TestClassifier:
    """Tests for classify_threat."""

    @pytest.mark.parametrize("resp,truth,expected", [
        (0.9, 0.9, ThreatLevel.COOPERATIVE),
        (0.9, 0.1, ThreatLevel.NOXIOUS),
        (0.1, 0.1, ThreatLevel.MALICIOUS),
        (0.1, 0.9, ThreatLevel.SUSPICIOUS),
        (0.5, 0.5, ThreatLevel.SUSPICIOUS),
        (0.9, 0.5, ThreatLevel.NOXIOUS),
    ])
    def test_quadrants(self, resp, truth, expected):
        assert classify_threat(merged(resp, truth), Thresholds()) is expected


class TestRisk:
    """Tests for assess_risk, blend_peer_risk and update_alertness."""

    def test_all_cooperative(self):
        labels = {1: ThreatLevel.COOPERATIVE, 2: ThreatLevel.COOPERATIVE}
        positions = {1: Position(1, 0), 2: Position(0, 2)}
        assert assess_risk(labels, positions, Position(0, 0), 10.0) == 0.0

    def test_adjacent_noxious(self):
        labels = {1: ThreatLevel.NOXIOUS}
        assert assess_risk(labels, {1: Position(0, 0)}, Position(0, 0), 10.0) == pytest.approx(1.0)

    def test_proximity_weighted(self):
        labels = {1: ThreatLevel.NOXIOUS, 2: ThreatLevel.COOPERATIVE}
        positions = {1: Position(0, 0), 2: Position(5, 0)}
        assert assess_risk(labels, positions, Position(0, 0), 10.0) == pytest.approx(1 / 1.5)

    def test_no_labels(self):
        assert assess_risk({}, {}, Position(0, 0), 10.0) == 0.0

    def test_everyone_out_of_range(self):
        labels = {1: ThreatLevel.NOXIOUS}
        assert assess_risk(labels, {1: Position(20, 0)}, Position(0, 0), 10.0) == 0.0

    def test_blend_by_reputation(self):
        risk = blend_peer_risk(0.0, {1: 1.0, 2: 0.0}, {1: 1.0, 2: 0.0}, weight=0.2)
        assert risk == pytest.approx(0.2)

    def test_blend_unknown_peer_is_neutral(self):
        risk = blend_peer_risk(0.5, {1: 1.0}, {}, weight=0.2)
        assert risk == pytest.approx(0.6)

    def test_blend_disabled(self):
        assert blend_peer_risk(0.3, {1: 1.0}, {1: 1.0}, weight=0.0) == 0.3

    @pytest.mark.parametrize("risk,expected", [
        (0.0, AlertnessLevel.LOW),
        (0.4, AlertnessLevel.ELEVATED),
        (0.6, AlertnessLevel.HIGH),
        (1.0, AlertnessLevel.HIGH),
    ])
    def test_alertness_bands(self, risk, expected):
        assert update_alertness(risk) is expected

    def test_invalid_bands(self):
        with pytest.raises(ValueError):
            AlertnessBands(0.7, 0.6)


class TestDetector:
    """Tests for AnomalyDetector and threat prioritization."""

    def test_priorities_ordered(self):
        labels = {
            1: ThreatLevel.SUSPICIOUS,
            2: ThreatLevel.NOXIOUS,
            3: ThreatLevel.COOPERATIVE,
            4: ThreatLevel.MALICIOUS,
        }
        positions = {k: Position(0, 0) for k in labels}
        ranked = prioritize_threats(labels, positions, Position(0, 0), 10.0)
        assert [t.agent for t in ranked] == [2, 4, 1]

    def test_assess(self):
        detector = AnomalyDetector(Thresholds(), r_s=10.0)
        models = {1: merged(0.9, 0.1, subject=1), 2: merged(0.9, 0.9, subject=2)}
        positions = {1: Position(0, 0), 2: Position(5, 0)}
        assessment = detector.assess(0, models, positions, Position(0, 0))
        assert assessment.labels == {1: ThreatLevel.NOXIOUS, 2: ThreatLevel.COOPERATIVE}
        assert assessment.risk == pytest.approx(1 / 1.5)
        assert assessment.alertness is AlertnessLevel.HIGH
        assert [t.agent for t in assessment.threats] == [1]

    def test_assess_with_peer_risk(self):
        detector = AnomalyDetector(r_s=10.0, peer_risk_weight=0.5)
        assessment = detector.assess(0, {}, {}, Position(0, 0), peer_risks={1: 0.8}, reputations={1: 1.0})
        assert assessment.own_risk == 0.0
        assert assessment.risk == pytest.approx(0.4)
        assert assessment.alertness is AlertnessLevel.ELEVATED
