"""
Alert Swarm - Situational Awareness
Belief exchange bookkeeping, inter-rater agreement and peer reputation.

Every agent keeps one InteractionLog per peer it has queried. The log is
reduced to a BehaviorRecord (responsiveness, truthfulness) and the record to
a Reputation. Fleiss' kappa summarises how much the peers answering one
query round agree with each other.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateAgreement, SubjectMismatch
from .model import AgentId, Belief, Tick

logger = logging.getLogger(__name__)

NEUTRAL_SCORE = 0.5


def _clamp(value: float, low: float = 0.0, high: float = 1.0) -> float:
    return min(high, max(low, value))


# =============================================================================
# Interaction Logs
# =============================================================================

@dataclass(frozen=True, slots=True)
class InteractionEntry:
    """Outcome of one query sent to a peer."""
    tick: Tick
    queried: bool
    responded: bool
    agreement: Optional[float] = None

    def __post_init__(self):
        if self.agreement is not None:
            if not self.responded:
                raise ValueError("agreement recorded for a query without a response")
            if not -1.0 <= self.agreement <= 1.0:
                raise ValueError(f"agreement must be in [-1,1], got {self.agreement}")


@dataclass(frozen=True)
class InteractionLog:
    """
    Append-only, tick-ordered history of interactions with one peer.

    Only the newest `capacity` entries are retained when a capacity is given;
    `consumed` keeps counting every entry ever appended.
    """
    entries: Tuple[InteractionEntry, ...] = ()
    consumed: int = 0

    def __post_init__(self):
        ticks = [e.tick for e in self.entries]
        if any(b < a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("interaction log must be ordered by tick")
        if self.consumed < len(self.entries):
            object.__setattr__(self, "consumed", len(self.entries))

    def append(self, entry: InteractionEntry, capacity: Optional[int] = None) -> "InteractionLog":
        """Return a new log with `entry` appended."""
        if self.entries and entry.tick < self.entries[-1].tick:
            raise ValueError(
                f"entry at tick {entry.tick} precedes last entry at {self.entries[-1].tick}"
            )
        entries = self.entries + (entry,)
        if capacity is not None and len(entries) > capacity:
            entries = entries[-capacity:]
        return InteractionLog(entries=entries, consumed=self.consumed + 1)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True, slots=True)
class BehaviorRecord:
    """Per-peer scores derived from an interaction log."""
    responsiveness: float = 1.0
    truthfulness: float = NEUTRAL_SCORE
    sample_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "responsiveness", _clamp(self.responsiveness))
        object.__setattr__(self, "truthfulness", _clamp(self.truthfulness))
        if self.sample_count < 0:
            raise ValueError(f"sample_count must be >= 0, got {self.sample_count}")

    @classmethod
    def from_log(cls, log: InteractionLog, alpha: float, window: int) -> "BehaviorRecord":
        """Reduce a log to its current scores."""
        return cls(
            responsiveness=update_responsiveness(log, window),
            truthfulness=update_truthfulness(log, alpha),
            sample_count=log.consumed,
        )


@dataclass(frozen=True, slots=True)
class Reputation:
    """Trust placed in a peer, in [0,1]."""
    value: float = NEUTRAL_SCORE

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"reputation must be in [0,1], got {self.value}")


# =============================================================================
# Agreement
# =============================================================================

def fleiss_kappa(ratings) -> float:
    """
    Fleiss' kappa for an N subjects x k categories matrix of rating counts.

    Formula: kappa = (P_bar - P_e) / (1 - P_e)

    Where...
        P_i   = (sum_j n_ij^2 - n) / (n (n - 1))   per-subject agreement
        P_bar = mean_i P_i                         observed agreement
        p_j   = sum_i n_ij / (N n)                 category proportions
        P_e   = sum_j p_j^2                        expected agreement

    Raises DegenerateAgreement when P_e == 1.
    """
    data = np.asarray(ratings)
    if data.ndim != 2:
        raise ValueError("ratings must be a 2-dimensional matrix")
    if not np.all(np.isfinite(data)) or np.any(data < 0):
        raise ValueError("ratings must be finite non-negative counts")
    if not np.all(data == np.round(data)):
        raise ValueError("ratings must be integer counts")
    n_subjects, n_categories = data.shape
    if n_subjects < 1:
        raise ValueError("at least one subject is required")
    if n_categories < 2:
        raise ValueError(f"at least 2 categories are required, got {n_categories}")

    data = data.astype(np.int64)
    row_sums = data.sum(axis=1)
    if np.any(row_sums != row_sums[0]):
        raise ValueError("every subject must be rated by the same number of raters")
    n = int(row_sums[0])
    if n < 2:
        raise ValueError(f"at least 2 raters per subject are required, got {n}")

    subject_agreement = ((data ** 2).sum(axis=1) - n) / (n * (n - 1))
    p_bar = float(subject_agreement.mean())
    proportions = data.sum(axis=0) / (n_subjects * n)
    p_e = float(np.dot(proportions, proportions))

    if np.isclose(p_e, 1.0, rtol=0.0, atol=1e-12):
        raise DegenerateAgreement(p_bar)
    return (p_bar - p_e) / (1.0 - p_e)


def kappa_or_unanimous(ratings) -> float:
    """Fleiss' kappa with the unanimous degenerate case resolved to 1.0."""
    try:
        return fleiss_kappa(ratings)
    except DegenerateAgreement as exc:
        if np.isclose(exc.observed, 1.0, rtol=0.0, atol=1e-12):
            return 1.0
        raise


def round_agreement(
    answers: Mapping[AgentId, Mapping[int, Optional[str]]],
    alphabet: Sequence[str],
) -> Optional[float]:
    """
    Agreement among the peers that answered one query round.

    Subjects are the cells every responder gave a value for; raters are the
    responders. Returns None when fewer than two raters or no fully rated
    subject exist.
    """
    if len(answers) < 2:
        return None
    responders = sorted(answers)
    cells = set.intersection(*(
        {cell for cell, value in answers[r].items() if value is not None}
        for r in responders
    ))
    if not cells:
        return None

    column = {symbol: k for k, symbol in enumerate(alphabet)}
    matrix = np.zeros((len(cells), len(alphabet)), dtype=np.int64)
    for row, cell in enumerate(sorted(cells)):
        for r in responders:
            matrix[row, column[answers[r][cell]]] += 1
    return kappa_or_unanimous(matrix)


# =============================================================================
# Scores
# =============================================================================

def update_responsiveness(log: InteractionLog, window: int, now: Optional[Tick] = None) -> float:
    """
    Fraction of queries inside the trailing window that got a response.

    The window covers ticks in (now - window, now]; `now` defaults to the
    newest entry. Returns 1.0 when no query falls inside the window.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if not log.entries:
        return 1.0
    anchor = log.entries[-1].tick if now is None else now
    queries = [e for e in log.entries if e.queried and anchor - window < e.tick <= anchor]
    if not queries:
        return 1.0
    return sum(1 for e in queries if e.responded) / len(queries)


def update_truthfulness(log: InteractionLog, alpha: float) -> float:
    """
    Exponentially weighted agreement of a peer's responses.

    Each agreement a in [-1,1] is mapped to (a + 1) / 2. The average starts
    at the first mapped outcome and every newer one enters with weight alpha:

        s = alpha * x + (1 - alpha) * s

    Returns 0.5 when the peer never produced a scored response.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0,1], got {alpha}")
    score: Optional[float] = None
    for entry in log.entries:
        if not entry.responded or entry.agreement is None:
            continue
        outcome = (entry.agreement + 1.0) / 2.0
        score = outcome if score is None else alpha * outcome + (1.0 - alpha) * score
    return NEUTRAL_SCORE if score is None else _clamp(score)


def update_reputation(record: BehaviorRecord) -> Reputation:
    """
    Reputation of a peer.

    Formula: truthfulness x responsiveness, 0.5 for an unobserved peer
    """
    if record.sample_count == 0:
        return Reputation(NEUTRAL_SCORE)
    return Reputation(_clamp(record.truthfulness * record.responsiveness))


def score_response(own_observation: Belief, peer_response: Belief) -> float:
    """+1 when a peer's answer matches our own observation, -1 otherwise."""
    if own_observation.subject != peer_response.subject:
        raise SubjectMismatch(
            f"cannot compare cell {own_observation.subject} with cell {peer_response.subject}"
        )
    return 1.0 if own_observation.value == peer_response.value else -1.0


def fitness_of(agent: AgentId, holders: Iterable[Mapping[AgentId, BehaviorRecord]]) -> float:
    """
    Truthfulness shown by `agent` to its neighbors.

    Mean truthfulness over every record peers hold about the agent with at
    least one sample; 0.5 when nobody holds one.
    """
    scores = [
        records[agent].truthfulness
        for records in holders
        if agent in records and records[agent].sample_count > 0
    ]
    if not scores:
        return NEUTRAL_SCORE
    return float(np.mean(scores))
