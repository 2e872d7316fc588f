"""
Alert Swarm - GSO Communication Domains
Glowworm swarm optimization mechanics used to pick, for every agent, the
peers it retrieves behavioral data from.

Per agent and tick:
    1. Luciferin update      G(t) = (1 - rho) G(t-1) + gamma J(t)
    2. Neighborhood          N(t) = {j : d_ij < r_d(t), G_i(t) < G_j(t)}
    3. Inclusion probability P_ij = (G_j - G_i) / sum_k (G_k - G_i)
    4. Trim to at most s members, lowest probability first
    5. Range update          r_d(t+1) = min(r_s, max(0, r_d + beta (n_t - |N|)))

J(t) is the truthfulness peers currently attribute to the agent.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import EmptyNeighborhood
from .model import AgentId

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GsoParams:
    """GSO constants. Defaults follow the canonical GSO literature."""
    rho: float = 0.4      # luciferin decay
    gamma: float = 0.6    # fitness gain
    beta: float = 0.08    # range gain
    n_t: int = 5          # target neighbor count
    r_s: float = 25.0     # sensor range, world units
    s: int = 6            # max communication-domain size
    g0: float = 5.0       # initial luciferin

    @property
    def luciferin_ceiling(self) -> float:
        """Upper bound luciferin can reach from g0 under fitness <= 1."""
        return max(self.g0, self.gamma / self.rho)


@dataclass(frozen=True, slots=True)
class LuciferinState:
    """Luciferin and decision-domain range of one agent."""
    g: float
    r_d: float


@dataclass(frozen=True)
class CommunicationDomain:
    """Peers an agent retrieves behavioral data from."""
    members: FrozenSet[AgentId] = frozenset()
    capacity: int = 6

    def __post_init__(self):
        if len(self.members) > self.capacity:
            raise ValueError(
                f"domain holds {len(self.members)} members, capacity is {self.capacity}"
            )

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class SwarmSnapshot:
    """
    Immutable view of the swarm used for one tick's domain updates.

    Arrays are aligned with `ids`; `distances` is the pairwise distance matrix.
    """
    ids: Tuple[AgentId, ...]
    positions: np.ndarray
    luciferin: np.ndarray
    ranges: np.ndarray
    fitness: np.ndarray
    distances: np.ndarray = None
    index: Dict[AgentId, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.distances is None:
            object.__setattr__(self, "distances", cdist(self.positions, self.positions))
        object.__setattr__(self, "index", {agent: k for k, agent in enumerate(self.ids)})

    @classmethod
    def build(
        cls,
        ids: Sequence[AgentId],
        positions,
        luciferin: Sequence[float],
        ranges: Sequence[float],
        fitness: Optional[Sequence[float]] = None,
        distances: Optional[np.ndarray] = None,
    ) -> "SwarmSnapshot":
        n = len(ids)
        return cls(
            ids=tuple(ids),
            positions=np.asarray(positions, dtype=float).reshape(n, 2),
            luciferin=np.asarray(luciferin, dtype=float),
            ranges=np.asarray(ranges, dtype=float),
            fitness=np.full(n, 0.5) if fitness is None else np.asarray(fitness, dtype=float),
            distances=distances,
        )

    def advance(self, params: GsoParams) -> "SwarmSnapshot":
        """Snapshot with every agent's luciferin moved one tick forward."""
        return replace(self, luciferin=update_luciferin(self.luciferin, self.fitness, params))

    def luciferin_of(self, agent: AgentId) -> float:
        return float(self.luciferin[self.index[agent]])


# =============================================================================
# Equations
# =============================================================================

def update_luciferin(prev, fitness, params: GsoParams):
    """
    Luciferin update.

    Formula: G(t) = (1 - rho) * G(t-1) + gamma * J(t)

    Accepts scalars or aligned numpy arrays.
    """
    prev_arr = np.asarray(prev, dtype=float)
    fit_arr = np.asarray(fitness, dtype=float)
    if np.any(prev_arr < 0) or not np.all(np.isfinite(prev_arr)):
        raise ValueError(f"luciferin must be finite and >= 0, got {prev}")
    if np.any((fit_arr < 0) | (fit_arr > 1)):
        raise ValueError(f"fitness must be in [0,1], got {fitness}")
    updated = (1.0 - params.rho) * prev_arr + params.gamma * fit_arr
    if updated.ndim == 0:
        return float(updated)
    return updated


def neighborhood(agent: AgentId, swarm: SwarmSnapshot) -> FrozenSet[AgentId]:
    """
    Brighter peers strictly inside the agent's decision range.

    N_i = {j : d_ij < r_d^i and G_i < G_j}
    """
    i = swarm.index[agent]
    mask = (swarm.distances[i] < swarm.ranges[i]) & (swarm.luciferin > swarm.luciferin[i])
    mask[i] = False
    return frozenset(swarm.ids[k] for k in np.flatnonzero(mask))


def inclusion_probabilities(g_self: float, candidates: Mapping[AgentId, float]) -> Dict[AgentId, float]:
    """
    Inclusion probability of every candidate.

    Formula: P_ij = (G_j - G_i) / sum_k (G_k - G_i)
    """
    if not candidates:
        raise EmptyNeighborhood("no candidates to weigh")
    ids = sorted(candidates)
    gaps = np.array([candidates[j] for j in ids], dtype=float) - g_self
    if not (math.isfinite(g_self) and np.all(np.isfinite(gaps))):
        raise ValueError("luciferin values must be finite")
    if np.any(gaps <= 0):
        raise ValueError("every candidate must be strictly brighter than the agent")
    probs = gaps / gaps.sum()
    return {j: float(p) for j, p in zip(ids, probs)}


def inclusion_probability(g_self: float, j: AgentId, candidates: Mapping[AgentId, float]) -> float:
    """Inclusion probability of candidate `j`."""
    if candidates and j not in candidates:
        raise ValueError(f"agent {j} is not a candidate")
    return inclusion_probabilities(g_self, candidates)[j]


def update_domain_range(r_d: float, neighbor_count: int, params: GsoParams) -> float:
    """
    Decision-domain range update.

    Formula: r_d(t+1) = min(r_s, max(0, r_d(t) + beta * (n_t - |N|)))
    """
    if neighbor_count < 0:
        raise ValueError(f"neighbor_count must be >= 0, got {neighbor_count}")
    return min(params.r_s, max(0.0, r_d + params.beta * (params.n_t - neighbor_count)))


# =============================================================================
# Communication Domain Selection
# =============================================================================

def trim_domain(probabilities: Mapping[AgentId, float], capacity: int) -> FrozenSet[AgentId]:
    """Drop the least probable member (lowest id on ties) until within capacity."""
    members = dict(probabilities)
    while len(members) > capacity:
        weakest = min(members, key=lambda j: (members[j], j))
        del members[weakest]
    return frozenset(members)


def select_communication_domain(
    agent: AgentId,
    swarm: SwarmSnapshot,
    params: GsoParams,
    advanced: Optional[SwarmSnapshot] = None,
) -> Tuple[CommunicationDomain, LuciferinState]:
    """
    Run the three comDomain phases for one agent.

    `swarm` holds last tick's luciferin; `advanced` may pass the already
    advanced snapshot so a whole tick shares one luciferin update.
    Range updates use the pre-trim neighborhood size.
    """
    if advanced is None:
        advanced = swarm.advance(params)
    i = swarm.index[agent]
    g_now = float(advanced.luciferin[i])

    candidates = neighborhood(agent, advanced)
    if candidates:
        probs = inclusion_probabilities(g_now, {j: advanced.luciferin_of(j) for j in candidates})
        members = trim_domain(probs, params.s)
    else:
        members = frozenset()

    r_next = update_domain_range(float(swarm.ranges[i]), len(candidates), params)
    logger.debug(
        "agent %s: G=%.4f |N|=%d kept=%d r_d=%.3f",
        agent, g_now, len(candidates), len(members), r_next,
    )
    return CommunicationDomain(members=members, capacity=params.s), LuciferinState(g=g_now, r_d=r_next)
