"""
Alert Swarm - Core Model
Shared vocabulary used by every other module.

Types:
    - AgentId / Tick: integer identifiers and the simulation clock
    - Position: a point in the bounded 2-D world
    - Belief: one categorical observation of a grid cell
    - ThreatLevel: Cooperative < Suspicious < Malicious < Noxious
    - AlertnessLevel: Low < Elevated < High
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import NewType, Tuple

AgentId = NewType("AgentId", int)
Tick = NewType("Tick", int)

DEFAULT_ALPHABET: Tuple[str, ...] = ("A", "B", "C", "D")


@dataclass(frozen=True, slots=True)
class Position:
    """A point in world units."""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"position must be finite, got ({self.x}, {self.y})")

    def within(self, world_size: float) -> bool:
        """True when both coordinates lie in [0, world_size)."""
        return 0.0 <= self.x < world_size and 0.0 <= self.y < world_size


@dataclass(frozen=True, slots=True)
class Belief:
    """An agent's observation of one grid cell."""
    subject: int
    value: str
    origin: AgentId
    observed_at: Tick


@total_ordering
class ThreatLevel(Enum):
    """Four-class threat taxonomy, ordered by severity."""
    COOPERATIVE = "Cooperative"
    SUSPICIOUS = "Suspicious"
    MALICIOUS = "Malicious"
    NOXIOUS = "Noxious"

    @property
    def severity(self) -> int:
        return _THREAT_ORDER.index(self)

    def __lt__(self, other):
        if not isinstance(other, ThreatLevel):
            return NotImplemented
        return self.severity < other.severity


_THREAT_ORDER = (
    ThreatLevel.COOPERATIVE,
    ThreatLevel.SUSPICIOUS,
    ThreatLevel.MALICIOUS,
    ThreatLevel.NOXIOUS,
)


@total_ordering
class AlertnessLevel(Enum):
    """Agent-level security intensity."""
    LOW = "Low"
    ELEVATED = "Elevated"
    HIGH = "High"

    @property
    def rank(self) -> int:
        return _ALERTNESS_ORDER.index(self)

    def __lt__(self, other):
        if not isinstance(other, AlertnessLevel):
            return NotImplemented
        return self.rank < other.rank


_ALERTNESS_ORDER = (AlertnessLevel.LOW, AlertnessLevel.ELEVATED, AlertnessLevel.HIGH)


def distance(a: Position, b: Position) -> float:
    """
    Euclidean distance between two positions.

    Formula: sqrt((ax - bx)^2 + (ay - by)^2)
    """
    return math.hypot(a.x - b.x, a.y - b.y)
