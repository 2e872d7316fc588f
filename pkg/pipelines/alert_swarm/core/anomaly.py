"""
Alert Swarm - Anomaly Detection Model
Model Generator and Anomaly Detector.

Model Generator:
    Merges behavior reports from communication-domain members, each weighted
    by the reporter's reputation, with the agent's own records (weight 1.0).

Anomaly Detector:
    Classifies every merged peer into a ThreatLevel, turns the labels into a
    proximity-weighted risk, blends in peers' risks by reputation and maps the
    result to an AlertnessLevel.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from ..errors import UnknownReporter
from .awareness import BehaviorRecord, Reputation
from .model import AgentId, AlertnessLevel, Position, ThreatLevel, Tick, distance

logger = logging.getLogger(__name__)

OWN_WEIGHT = 1.0

DEFAULT_SEVERITY_WEIGHTS: Dict[ThreatLevel, float] = {
    ThreatLevel.COOPERATIVE: 0.0,
    ThreatLevel.SUSPICIOUS: 0.3,
    ThreatLevel.MALICIOUS: 0.7,
    ThreatLevel.NOXIOUS: 1.0,
}


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True, slots=True)
class BehaviorReport:
    """A peer's view of a subject's behavior."""
    reporter: AgentId
    subject: AgentId
    responsiveness: float
    truthfulness: float
    reported_at: Tick

    def __post_init__(self):
        if self.reporter == self.subject:
            raise ValueError(f"agent {self.reporter} cannot report on itself")
        for name in ("responsiveness", "truthfulness"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0,1], got {value}")


@dataclass(frozen=True, slots=True)
class MergedBehavior:
    """Reputation-weighted behavior model of one subject."""
    subject: AgentId
    responsiveness: float
    truthfulness: float
    total_weight: float


@dataclass(frozen=True)
class Thresholds:
    """Cut points of the threat classifier."""
    respond_threshold: float = 0.5
    truth_threshold: float = 0.5


@dataclass(frozen=True)
class AlertnessBands:
    """Risk cut points: Low below low_cut, High from high_cut."""
    low_cut: float = 0.25
    high_cut: float = 0.6

    def __post_init__(self):
        if not 0.0 <= self.low_cut < self.high_cut <= 1.0:
            raise ValueError(
                f"bands must satisfy 0 <= low < high <= 1, got ({self.low_cut}, {self.high_cut})"
            )


@dataclass(frozen=True, slots=True)
class ThreatPriority:
    """A non-cooperative peer ranked by the risk it poses."""
    agent: AgentId
    level: ThreatLevel
    priority: float


@dataclass(frozen=True)
class RiskAssessment:
    """One agent's view of the threats around it."""
    viewpoint: AgentId
    risk: float
    alertness: AlertnessLevel
    labels: Mapping[AgentId, ThreatLevel] = field(default_factory=dict)
    own_risk: float = 0.0
    threats: Tuple[ThreatPriority, ...] = ()


# =============================================================================
# Model Generator
# =============================================================================

def _weight(reputation: Union[Reputation, float]) -> float:
    return reputation.value if isinstance(reputation, Reputation) else float(reputation)


def merge_behavior_data(
    reports: Iterable[BehaviorReport],
    reputations: Mapping[AgentId, Union[Reputation, float]],
    own: Optional[Mapping[AgentId, BehaviorRecord]] = None,
) -> Dict[AgentId, MergedBehavior]:
    """
    Reputation-weighted merge of peer behavior reports.

    Formula (per subject j):
        score_j = (sum_i Repute(i) * report_i[j] + 1.0 * own[j]) / total weight

    Subjects whose total weight is zero are omitted.
    """
    acc: Dict[AgentId, List[float]] = {}
    for report in reports:
        if report.reporter not in reputations:
            raise UnknownReporter(report.reporter)
        w = _weight(reputations[report.reporter])
        slot = acc.setdefault(report.subject, [0.0, 0.0, 0.0])
        slot[0] += w * report.responsiveness
        slot[1] += w * report.truthfulness
        slot[2] += w

    for subject, record in (own or {}).items():
        slot = acc.setdefault(subject, [0.0, 0.0, 0.0])
        slot[0] += OWN_WEIGHT * record.responsiveness
        slot[1] += OWN_WEIGHT * record.truthfulness
        slot[2] += OWN_WEIGHT

    merged = {}
    for subject in sorted(acc):
        resp, truth, total = acc[subject]
        if total <= 0.0:
            continue
        merged[subject] = MergedBehavior(
            subject=subject,
            responsiveness=min(1.0, max(0.0, resp / total)),
            truthfulness=min(1.0, max(0.0, truth / total)),
            total_weight=total,
        )
    return merged


class ModelGenerator:
    """Builds behavior models every `period` ticks."""

    def __init__(self, period: int = 1):
        if period < 1:
            raise ValueError(f"merge period must be >= 1, got {period}")
        self.period = period

    def is_due(self, tick: Tick) -> bool:
        return tick % self.period == 0

    def generate(
        self,
        reports: Iterable[BehaviorReport],
        reputations: Mapping[AgentId, Union[Reputation, float]],
        own: Optional[Mapping[AgentId, BehaviorRecord]] = None,
    ) -> Dict[AgentId, MergedBehavior]:
        return merge_behavior_data(reports, reputations, own)


# =============================================================================
# Anomaly Detector
# =============================================================================

def classify_threat(merged: MergedBehavior, th: Thresholds) -> ThreatLevel:
    """
    Four-class threat label.

    responsive > rt and truthful >  tt -> Cooperative
    responsive > rt and truthful <= tt -> Noxious
    responsive <= rt and truthful < tt -> Malicious
    responsive <= rt and truthful >= tt -> Suspicious
    """
    if merged.responsiveness > th.respond_threshold:
        if merged.truthfulness > th.truth_threshold:
            return ThreatLevel.COOPERATIVE
        return ThreatLevel.NOXIOUS
    if merged.truthfulness < th.truth_threshold:
        return ThreatLevel.MALICIOUS
    return ThreatLevel.SUSPICIOUS


def proximity(d: float, r_s: float) -> float:
    """Linear proximity kernel: max(0, 1 - d / r_s)."""
    return max(0.0, 1.0 - d / r_s)


def assess_risk(
    labels: Mapping[AgentId, ThreatLevel],
    positions: Mapping[AgentId, Position],
    self_position: Position,
    r_s: float,
    weights: Optional[Mapping[ThreatLevel, float]] = None,
) -> float:
    """
    Risk an agent faces from the peers it has labelled.

    Formula: sum_j w(label_j) * prox_j / sum_j prox_j
    """
    if not labels:
        return 0.0
    weights = weights or DEFAULT_SEVERITY_WEIGHTS
    numerator = 0.0
    denominator = 0.0
    for peer in sorted(labels):
        prox = proximity(distance(positions[peer], self_position), r_s)
        numerator += weights[labels[peer]] * prox
        denominator += prox
    if denominator <= 0.0:
        return 0.0
    return min(1.0, max(0.0, numerator / denominator))


def blend_peer_risk(
    own_risk: float,
    peer_risks: Mapping[AgentId, float],
    reputations: Mapping[AgentId, Union[Reputation, float]],
    weight: float,
) -> float:
    """
    Mix in the risks peers report, trusted by reputation.

    Formula: (1 - w) * own + w * sum_k rep_k * risk_k / sum_k rep_k
    """
    total = 0.0
    acc = 0.0
    for peer in sorted(peer_risks):
        rep = _weight(reputations.get(peer, Reputation()))
        acc += rep * peer_risks[peer]
        total += rep
    if weight <= 0.0 or total <= 0.0:
        return own_risk
    return min(1.0, max(0.0, (1.0 - weight) * own_risk + weight * acc / total))


def update_alertness(risk: float, bands: AlertnessBands = AlertnessBands()) -> AlertnessLevel:
    """Low below low_cut, Elevated up to high_cut, High above."""
    if risk < bands.low_cut:
        return AlertnessLevel.LOW
    if risk < bands.high_cut:
        return AlertnessLevel.ELEVATED
    return AlertnessLevel.HIGH


def prioritize_threats(
    labels: Mapping[AgentId, ThreatLevel],
    positions: Mapping[AgentId, Position],
    self_position: Position,
    r_s: float,
    weights: Optional[Mapping[ThreatLevel, float]] = None,
) -> List[ThreatPriority]:
    """Non-cooperative peers, highest severity x proximity first."""
    weights = weights or DEFAULT_SEVERITY_WEIGHTS
    ranked = [
        ThreatPriority(
            agent=peer,
            level=level,
            priority=weights[level] * proximity(distance(positions[peer], self_position), r_s),
        )
        for peer, level in labels.items()
        if level is not ThreatLevel.COOPERATIVE
    ]
    return sorted(ranked, key=lambda t: (-t.priority, t.agent))


class AnomalyDetector:
    """
    Turns merged behavior models into a RiskAssessment.

    Example:
        detector = AnomalyDetector(Thresholds(), r_s=25.0)
        assessment = detector.assess(3, merged, positions, positions[3])
    """

    def __init__(
        self,
        thresholds: Thresholds = Thresholds(),
        r_s: float = 25.0,
        weights: Optional[Mapping[ThreatLevel, float]] = None,
        bands: AlertnessBands = AlertnessBands(),
        peer_risk_weight: float = 0.0,
    ):
        self.thresholds = thresholds
        self.r_s = r_s
        self.weights = dict(weights or DEFAULT_SEVERITY_WEIGHTS)
        self.bands = bands
        self.peer_risk_weight = peer_risk_weight

    def classify_all(self, merged: Mapping[AgentId, MergedBehavior]) -> Dict[AgentId, ThreatLevel]:
        return {subject: classify_threat(model, self.thresholds) for subject, model in merged.items()}

    def assess(
        self,
        viewpoint: AgentId,
        merged: Mapping[AgentId, MergedBehavior],
        positions: Mapping[AgentId, Position],
        self_position: Position,
        peer_risks: Optional[Mapping[AgentId, float]] = None,
        reputations: Optional[Mapping[AgentId, Union[Reputation, float]]] = None,
    ) -> RiskAssessment:
        labels = self.classify_all(merged)
        own_risk = assess_risk(labels, positions, self_position, self.r_s, self.weights)
        risk = blend_peer_risk(own_risk, peer_risks or {}, reputations or {}, self.peer_risk_weight)
        return RiskAssessment(
            viewpoint=viewpoint,
            risk=risk,
            alertness=update_alertness(risk, self.bands),
            labels=labels,
            own_risk=own_risk,
            threats=tuple(prioritize_threats(labels, positions, self_position, self.r_s, self.weights)),
        )
