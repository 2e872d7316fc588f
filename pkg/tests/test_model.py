"""Tests for the core vocabulary: positions, distance and the ordered levels."""

import math

import pytest

from pipelines.alert_swarm.core.model import AlertnessLevel, Position, ThreatLevel, distance


class TestPosition:
    """Tests for Position."""

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Position(math.nan, 0.0)
        with pytest.raises(ValueError):
            Position(0.0, math.inf)

    def test_within_world(self):
        assert Position(0.0, 99.9).within(100.0)
        assert not Position(100.0, 5.0).within(100.0)
        assert not Position(-0.1, 5.0).within(100.0)


class TestDistance:
    """Tests for Euclidean distance."""

    def test_identity(self):
        assert distance(Position(0, 0), Position(0, 0)) == 0

    def test_three_four_five(self):
        assert distance(Position(0, 0), Position(3, 4)) == 5

    def test_offset_triangle(self):
        assert distance(Position(1.5, 2.0), Position(4.5, 6.0)) == pytest.approx(5.0, abs=1e-12)

    def test_symmetric(self):
        a, b = Position(2.0, -7.5), Position(-3.25, 11.0)
        assert distance(a, b) == distance(b, a)


class TestLevels:
    """Threat and alertness orderings."""

    def test_threat_order(self):
        assert (ThreatLevel.COOPERATIVE < ThreatLevel.SUSPICIOUS
                < ThreatLevel.MALICIOUS < ThreatLevel.NOXIOUS)
        assert max(ThreatLevel) is ThreatLevel.NOXIOUS

    def test_alertness_order(self):
        assert AlertnessLevel.LOW < AlertnessLevel.ELEVATED < AlertnessLevel.HIGH
        assert [level.rank for level in AlertnessLevel] == [0, 1, 2]

    def test_values_are_display_names(self):
        assert ThreatLevel('Noxious') is ThreatLevel.NOXIOUS
        assert AlertnessLevel('Elevated') is AlertnessLevel.ELEVATED
