"""
Alert Swarm Core
Domain model, situational awareness, GSO communication domains and the
anomaly detector.
"""

from .model import (
    DEFAULT_ALPHABET,
    AgentId,
    AlertnessLevel,
    Belief,
    Position,
    ThreatLevel,
    Tick,
    distance,
)
from .awareness import (
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
from .gso_domain import (
    CommunicationDomain,
    GsoParams,
    LuciferinState,
    SwarmSnapshot,
    inclusion_probabilities,
    inclusion_probability,
    neighborhood,
    select_communication_domain,
    trim_domain,
    update_domain_range,
    update_luciferin,
)
from .anomaly import (
    DEFAULT_SEVERITY_WEIGHTS,
    AlertnessBands,
    AnomalyDetector,
    BehaviorReport,
    MergedBehavior,
    ModelGenerator,
    RiskAssessment,
    ThreatPriority,
    Thresholds,
    assess_risk,
    blend_peer_risk,
    classify_threat,
    merge_behavior_data,
    prioritize_threats,
    update_alertness,
)

__all__ = [
    'DEFAULT_ALPHABET', 'AgentId', 'AlertnessLevel', 'Belief', 'Position', 'ThreatLevel', 'Tick',
    'distance',
    'BehaviorRecord', 'InteractionEntry', 'InteractionLog', 'Reputation', 'fitness_of',
    'fleiss_kappa', 'kappa_or_unanimous', 'round_agreement', 'score_response',
    'update_reputation', 'update_responsiveness', 'update_truthfulness',
    'CommunicationDomain', 'GsoParams', 'LuciferinState', 'SwarmSnapshot',
    'inclusion_probabilities', 'inclusion_probability', 'neighborhood',
    'select_communication_domain', 'trim_domain', 'update_domain_range', 'update_luciferin',
    'DEFAULT_SEVERITY_WEIGHTS', 'AlertnessBands', 'AnomalyDetector', 'BehaviorReport',
    'MergedBehavior', 'ModelGenerator', 'RiskAssessment', 'ThreatPriority', 'Thresholds',
    'assess_risk', 'blend_peer_risk', 'classify_threat', 'merge_behavior_data',
    'prioritize_threats', 'update_alertness',
]
