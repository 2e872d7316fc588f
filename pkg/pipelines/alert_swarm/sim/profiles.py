"""
Alert Swarm - Adversary Profiles
Behavioral archetypes agents are spawned with and how a mix is split.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Sequence

from ..core.model import ThreatLevel


class ProfileKind(Enum):
    """Behavioral archetype of an agent."""
    HONEST = 'Honest'
    SILENT_TRUTHFUL = 'SilentTruthful'
    SILENT_LIAR = 'SilentLiar'
    RESPONSIVE_LIAR = 'ResponsiveLiar'

    @property
    def expected_level(self) -> ThreatLevel:
        """Threat level a correct detector assigns to this kind."""
        return _EXPECTED_LEVEL[self]

    @property
    def is_adversarial(self) -> bool:
        return self is not ProfileKind.HONEST

    @property
    def is_responsive(self) -> bool:
        """Answers most queries (Honest, ResponsiveLiar)."""
        return self in (ProfileKind.HONEST, ProfileKind.RESPONSIVE_LIAR)

    @property
    def is_truthful(self) -> bool:
        """Never lies when it does answer."""
        return self in (ProfileKind.HONEST, ProfileKind.SILENT_TRUTHFUL)

    @property
    def column(self) -> str:
        """snake_case name used in metric column headers."""
        return _COLUMN[self]

    @classmethod
    def parse(cls, name: str) -> 'ProfileKind':
        try:
            return cls(name)
        except ValueError:
            raise ValueError(
                f"unknown profile kind {name!r}; expected one of {[k.value for k in cls]}"
            ) from None


_EXPECTED_LEVEL = {
    ProfileKind.HONEST: ThreatLevel.COOPERATIVE,
    ProfileKind.SILENT_TRUTHFUL: ThreatLevel.SUSPICIOUS,
    ProfileKind.SILENT_LIAR: ThreatLevel.MALICIOUS,
    ProfileKind.RESPONSIVE_LIAR: ThreatLevel.NOXIOUS,
}

_COLUMN = {
    ProfileKind.HONEST: 'honest',
    ProfileKind.SILENT_TRUTHFUL: 'silent_truthful',
    ProfileKind.SILENT_LIAR: 'silent_liar',
    ProfileKind.RESPONSIVE_LIAR: 'responsive_liar',
}

PROFILE_ORDER = tuple(ProfileKind)
ADVERSARIAL_KINDS = tuple(k for k in PROFILE_ORDER if k.is_adversarial)


@dataclass(frozen=True)
class AdversaryProfile:
    """How an agent of a given kind answers queries."""
    kind: ProfileKind
    respond_prob: float
    lie_prob: float


DEFAULT_PROFILES: Dict[ProfileKind, AdversaryProfile] = {
    ProfileKind.HONEST: AdversaryProfile(ProfileKind.HONEST, 0.95, 0.0),
    ProfileKind.SILENT_TRUTHFUL: AdversaryProfile(ProfileKind.SILENT_TRUTHFUL, 0.1, 0.0),
    ProfileKind.SILENT_LIAR: AdversaryProfile(ProfileKind.SILENT_LIAR, 0.1, 0.9),
    ProfileKind.RESPONSIVE_LIAR: AdversaryProfile(ProfileKind.RESPONSIVE_LIAR, 0.95, 0.9),
}


def allocate_profiles(mix: Mapping[ProfileKind, float], n_agents: int) -> Dict[ProfileKind, int]:
    """
    Split n_agents across kinds by largest-remainder rounding.

    Every kind first gets floor(fraction * n); leftover agents go to the
    largest fractional parts, canonical kind order breaking ties.
    """
    quotas = {kind: mix.get(kind, 0.0) * n_agents for kind in PROFILE_ORDER}
    counts = {kind: int(math.floor(q + 1e-9)) for kind, q in quotas.items()}
    leftover = n_agents - sum(counts.values())
    by_remainder = sorted(
        (k for k in PROFILE_ORDER if mix.get(k, 0.0) > 0.0),
        key=lambda k: (-(quotas[k] - counts[k]), PROFILE_ORDER.index(k)),
    )
    for kind in by_remainder[:max(0, leftover)]:
        counts[kind] += 1
    return counts


def assign_profiles(counts: Mapping[ProfileKind, int], permutation: Sequence[int]) -> List[ProfileKind]:
    """Kinds laid out in canonical order, then scattered by `permutation`."""
    slots = [kind for kind in PROFILE_ORDER for _ in range(counts.get(kind, 0))]
    if len(slots) != len(permutation):
        raise ValueError(f"{len(slots)} profile slots for {len(permutation)} agents")
    return [slots[int(k)] for k in permutation]
