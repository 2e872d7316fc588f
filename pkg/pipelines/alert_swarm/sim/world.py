"""
Alert Swarm - World
Deterministic discrete-time swarm.

Each tick runs a fixed pipeline of phases over snapshot state:

    1. shift       scheduled behavior shifts take effect
    2. perceive    agents observe grid cells within sensor range
    3. answer      queries sent last tick are answered per profile
    4. score       responses update logs, behavior records and round kappa
    5. domains     GSO picks every agent's communication domain
    6. query       agents query their domain at an alertness-driven rate
    7. assess      on merge ticks: merge reports, classify, assess risk

A phase reads only what earlier phases produced and writes a fresh agent
map, so the order agents are visited in never changes the successor world.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from ..config import WorldConfig, check_config
from ..core.anomaly import AnomalyDetector, BehaviorReport, ModelGenerator
from ..core.awareness import (
    BehaviorRecord,
    InteractionEntry,
    InteractionLog,
    fitness_of,
    round_agreement,
    score_response,
    update_reputation,
)
from ..core.gso_domain import CommunicationDomain, LuciferinState, SwarmSnapshot, select_communication_domain
from ..core.model import AgentId, AlertnessLevel, Belief, Position, ThreatLevel, Tick
from ..errors import SimulationInvariantError
from .profiles import AdversaryProfile, ProfileKind, allocate_profiles, assign_profiles
from .rng import Phase, RngStreams

logger = logging.getLogger(__name__)


# =============================================================================
# State
# =============================================================================

@dataclass(frozen=True)
class Query:
    """A request for the target's view of some grid cells."""
    requester: AgentId
    target: AgentId
    cells: Tuple[int, ...]
    sent_at: Tick


@dataclass(frozen=True)
class Response:
    """A target's answer to a query; `answers` is None when it stayed silent."""
    query: Query
    answers: Optional[Mapping[int, Optional[str]]] = None

    @property
    def responded(self) -> bool:
        return self.answers is not None


@dataclass(frozen=True)
class AgentState:
    """Everything one agent knows and has decided."""
    agent_id: AgentId
    position: Position
    kind: ProfileKind
    luciferin: LuciferinState
    domain: CommunicationDomain = CommunicationDomain()
    observations: Mapping[int, str] = field(default_factory=dict)
    perceived_at: int = -1
    logs: Mapping[AgentId, InteractionLog] = field(default_factory=dict)
    records: Mapping[AgentId, BehaviorRecord] = field(default_factory=dict)
    labels: Mapping[AgentId, ThreatLevel] = field(default_factory=dict)
    risk: float = 0.0
    alertness: AlertnessLevel = AlertnessLevel.LOW
    queries_sent: int = 0

    def belief(self, cell: int) -> Optional[Belief]:
        value = self.observations.get(cell)
        if value is None:
            return None
        return Belief(subject=cell, value=value, origin=self.agent_id, observed_at=Tick(self.perceived_at))


@dataclass(frozen=True)
class StepStats:
    """Counters of the most recent tick."""
    messages: int = 0
    responses: int = 0
    report_requests: int = 0
    kappas: Tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class Geometry:
    """Static spatial lookups derived from agent positions."""
    positions: np.ndarray
    distances: np.ndarray
    visible: Tuple[FrozenSet[int], ...]

    @classmethod
    def build(cls, positions: Sequence[Position], config: WorldConfig) -> 'Geometry':
        coords = np.array([[p.x, p.y] for p in positions], dtype=float).reshape(len(positions), 2)
        g = config.grid_cells
        size = config.cell_size
        col, row = np.meshgrid(np.arange(g), np.arange(g))
        centers = np.column_stack([(col.ravel() + 0.5) * size, (row.ravel() + 0.5) * size])
        in_range = cdist(coords, centers) <= config.gso.r_s
        return cls(
            positions=coords,
            distances=cdist(coords, coords),
            visible=tuple(frozenset(np.flatnonzero(mask).tolist()) for mask in in_range),
        )


@dataclass(frozen=True)
class World:
    """
    Immutable world state at the start of a tick.

    Agent ids are 0..n-1 and `agents[i].agent_id == i`. `truth` holds the
    ground-truth category of every grid cell (row-major).
    """
    config: WorldConfig
    tick: Tick
    agents: Tuple[AgentState, ...]
    truth: Tuple[str, ...]
    pending: Tuple[Query, ...] = ()
    stats: StepStats = StepStats()
    geometry: Geometry = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.geometry is None:
            object.__setattr__(self, 'geometry', Geometry.build([a.position for a in self.agents], self.config))

    @property
    def ids(self) -> Tuple[AgentId, ...]:
        return tuple(a.agent_id for a in self.agents)

    def agent(self, agent_id: AgentId) -> AgentState:
        return self.agents[agent_id]

    def profile(self, agent_id: AgentId) -> AdversaryProfile:
        return self.config.profiles[self.agents[agent_id].kind]


# =============================================================================
# Spawning
# =============================================================================

def spawn_swarm(config: WorldConfig) -> World:
    """
    Place agents, assign profiles and ground truth from the seeded generator.

    Raises InvalidConfig (ValidationError) naming every violated field. A
    single-agent world is accepted here so degenerate swarms can be studied.
    """
    check_config(config, min_agents=1)
    rng = RngStreams(config.seed).stream(Phase.SPAWN)
    n = config.n_agents

    coords = rng.uniform(0.0, config.world_size, size=(n, 2))
    truth_idx = rng.integers(len(config.alphabet), size=config.grid_cells ** 2)
    counts = allocate_profiles(config.profile_mix, n)
    kinds = assign_profiles(counts, rng.permutation(n))

    start = LuciferinState(g=config.gso.g0, r_d=config.gso.r_s / 2.0)
    agents = tuple(
        AgentState(
            agent_id=AgentId(i),
            position=Position(float(coords[i, 0]), float(coords[i, 1])),
            kind=kinds[i],
            luciferin=start,
            domain=CommunicationDomain(capacity=config.gso.s),
        )
        for i in range(n)
    )
    logger.info(
        "Spawned %d agents (%s), seed %d",
        n, ", ".join(f"{k.value}={c}" for k, c in counts.items() if c), config.seed,
    )
    return World(
        config=config,
        tick=Tick(0),
        agents=agents,
        truth=tuple(config.alphabet[int(k)] for k in truth_idx),
    )


# =============================================================================
# Step pipeline
# =============================================================================

@dataclass
class StepContext:
    """Mutable scratch space threaded through the phases of one tick."""
    world: World
    streams: RngStreams
    order: Tuple[AgentId, ...]
    agents: Dict[AgentId, AgentState]
    responses: List[Response] = field(default_factory=list)
    queries: List[Query] = field(default_factory=list)
    messages: int = 0
    responded: int = 0
    report_requests: int = 0
    kappas: Dict[AgentId, float] = field(default_factory=dict)

    @property
    def tick(self) -> Tick:
        return self.world.tick

    @property
    def config(self) -> WorldConfig:
        return self.world.config

    def profile(self, agent_id: AgentId) -> AdversaryProfile:
        return self.config.profiles[self.agents[agent_id].kind]


PhaseFn = Callable[[StepContext], None]


def apply_shifts(ctx: StepContext) -> None:
    """Switch the lowest-id agents of a kind to another kind on schedule."""
    for shift in ctx.config.behavior_shifts:
        if shift.tick != ctx.tick:
            continue
        matching = sorted(a for a, s in ctx.agents.items() if s.kind is shift.source)
        for agent_id in matching[:shift.count]:
            ctx.agents[agent_id] = replace(ctx.agents[agent_id], kind=shift.target)
        logger.info(
            "tick %d: %d agent(s) shifted %s -> %s",
            ctx.tick, min(shift.count, len(matching)), shift.source.value, shift.target.value,
        )


def perceive(ctx: StepContext) -> None:
    """Observe every grid cell within sensor range (no observation noise)."""
    visible = ctx.world.geometry.visible
    updated = {}
    for agent_id in ctx.order:
        agent = ctx.agents[agent_id]
        observations = agent.observations
        if len(observations) != len(visible[agent_id]):
            observations = {cell: ctx.world.truth[cell] for cell in sorted(visible[agent_id])}
        updated[agent_id] = replace(agent, observations=observations, perceived_at=int(ctx.tick))
    ctx.agents.update(updated)


def _wrong_value(true_value: str, alphabet: Sequence[str], rng: np.random.Generator) -> str:
    others = [symbol for symbol in alphabet if symbol != true_value]
    return others[int(rng.integers(len(others)))]


def answer_queries(ctx: StepContext) -> None:
    """Targets answer last tick's queries: respond with respond_prob, lie per cell with lie_prob."""
    by_target: Dict[AgentId, List[Query]] = defaultdict(list)
    for query in ctx.world.pending:
        by_target[query.target].append(query)

    alphabet = ctx.config.alphabet
    responses = []
    for target in (a for a in ctx.order if a in by_target):
        agent = ctx.agents[target]
        profile = ctx.profile(target)
        rng = ctx.streams.stream(Phase.RESPOND, target, ctx.tick)
        for query in sorted(by_target[target], key=lambda q: q.requester):
            if rng.random() >= profile.respond_prob:
                responses.append(Response(query))
                continue
            answers: Dict[int, Optional[str]] = {}
            for cell in query.cells:
                lie = rng.random() < profile.lie_prob
                value = agent.observations.get(cell)
                if value is not None and lie:
                    value = _wrong_value(value, alphabet, rng)
                answers[cell] = value
            responses.append(Response(query, answers))
    ctx.responses = sorted(responses, key=lambda r: (r.query.requester, r.query.target))
    ctx.responded = sum(1 for r in responses if r.responded)


def _agreement(agent: AgentState, response: Response, tick: Tick, staleness: int) -> Optional[float]:
    """Mean +1/-1 score over the answered cells the requester has a fresh view of."""
    if tick - agent.perceived_at > staleness:
        return None
    scores = []
    for cell, value in response.answers.items():
        own = agent.belief(cell)
        if value is None or own is None:
            continue
        peer = Belief(subject=cell, value=value, origin=response.query.target, observed_at=tick)
        scores.append(score_response(own, peer))
    return float(np.mean(scores)) if scores else None


def score_responses(ctx: StepContext) -> None:
    """Append each query outcome to the requester's log and rescore the target."""
    aw = ctx.config.awareness
    by_requester: Dict[AgentId, List[Response]] = defaultdict(list)
    for response in ctx.responses:
        by_requester[response.query.requester].append(response)

    updated = {}
    for requester in (a for a in ctx.order if a in by_requester):
        agent = ctx.agents[requester]
        logs = dict(agent.logs)
        records = dict(agent.records)
        round_answers = {}
        for response in by_requester[requester]:
            target = response.query.target
            agreement = None
            if response.responded:
                agreement = _agreement(agent, response, ctx.tick, aw.staleness)
                round_answers[target] = response.answers
            entry = InteractionEntry(tick=ctx.tick, queried=True, responded=response.responded, agreement=agreement)
            logs[target] = logs.get(target, InteractionLog()).append(entry, capacity=aw.log_capacity)
            records[target] = BehaviorRecord.from_log(logs[target], aw.alpha, aw.window)
        kappa = round_agreement(round_answers, ctx.config.alphabet)
        if kappa is not None:
            ctx.kappas[requester] = kappa
        updated[requester] = replace(agent, logs=logs, records=records)
    ctx.agents.update(updated)


def swarm_fitness(agents: Mapping[AgentId, AgentState]) -> Dict[AgentId, float]:
    """Truthfulness every agent currently shows to the peers that scored it."""
    holders: Dict[AgentId, List[Mapping[AgentId, BehaviorRecord]]] = defaultdict(list)
    for holder_id in sorted(agents):
        records = agents[holder_id].records
        for subject in records:
            holders[subject].append(records)
    return {agent_id: fitness_of(agent_id, holders.get(agent_id, ())) for agent_id in sorted(agents)}


def update_domains(ctx: StepContext) -> None:
    """One GSO round: luciferin update, neighborhood, trimming, range update."""
    gso = ctx.config.gso
    ids = sorted(ctx.agents)
    fitness = swarm_fitness(ctx.agents)
    snapshot = SwarmSnapshot.build(
        ids,
        ctx.world.geometry.positions,
        luciferin=[ctx.agents[a].luciferin.g for a in ids],
        ranges=[ctx.agents[a].luciferin.r_d for a in ids],
        fitness=[fitness[a] for a in ids],
        distances=ctx.world.geometry.distances,
    )
    advanced = snapshot.advance(gso)

    updated = {}
    for agent_id in ctx.order:
        domain, state = select_communication_domain(agent_id, snapshot, gso, advanced)
        _check_domain(agent_id, domain, state, snapshot, advanced, ctx)
        updated[agent_id] = replace(ctx.agents[agent_id], domain=domain, luciferin=state)
    ctx.agents.update(updated)


def _check_domain(agent_id, domain, state, snapshot, advanced, ctx) -> None:
    gso = ctx.config.gso
    i = snapshot.index[agent_id]
    problems = []
    if len(domain) > gso.s:
        problems.append(f"domain size {len(domain)} exceeds s={gso.s}")
    if not 0.0 <= state.r_d <= gso.r_s:
        problems.append(f"r_d={state.r_d} outside [0, {gso.r_s}]")
    if state.g < 0:
        problems.append(f"negative luciferin {state.g}")
    for member in domain.members:
        j = snapshot.index[member]
        if not snapshot.distances[i, j] < snapshot.ranges[i] or not advanced.luciferin[j] > state.g:
            problems.append(f"member {member} is not a brighter peer inside r_d")
    if problems:
        raise SimulationInvariantError(f"tick {ctx.tick}, agent {agent_id}: " + "; ".join(problems))


def issue_queries(ctx: StepContext) -> None:
    """
    Query domain members every query_periods[alertness] ticks.

    An isolated agent probes up to s random peers strictly inside its
    decision range instead. All targets of a round are asked about the same
    cells; the farthest targets are dropped until such shared cells exist.
    """
    cfg = ctx.config
    geometry = ctx.world.geometry
    ids = sorted(ctx.agents)
    queries = []
    updated = {}
    for agent_id in ctx.order:
        agent = ctx.agents[agent_id]
        if ctx.tick % cfg.exchange.query_periods[agent.alertness] != 0:
            continue
        rng = ctx.streams.stream(Phase.QUERY, agent_id, ctx.tick)
        targets = sorted(agent.domain.members)
        if not targets and cfg.exchange.probe_when_isolated:
            row = geometry.distances[agent_id]
            candidates = [j for j in ids if j != agent_id and row[j] < agent.luciferin.r_d]
            if candidates:
                picked = rng.choice(candidates, size=min(cfg.gso.s, len(candidates)), replace=False)
                targets = sorted(int(j) for j in picked)

        shared = _shared_cells(agent, targets, geometry)
        while targets and not shared:
            farthest = max(targets, key=lambda j: (geometry.distances[agent_id, j], j))
            targets.remove(farthest)
            shared = _shared_cells(agent, targets, geometry)
        if not targets:
            continue

        size = min(cfg.awareness.subjects_per_query, len(shared))
        cells = tuple(sorted(int(c) for c in rng.choice(sorted(shared), size=size, replace=False)))
        for target in targets:
            queries.append(Query(requester=agent_id, target=AgentId(target), cells=cells, sent_at=ctx.tick))
        updated[agent_id] = replace(agent, queries_sent=agent.queries_sent + len(targets))
        ctx.messages += len(targets)
    ctx.agents.update(updated)
    ctx.queries = sorted(queries, key=lambda q: (q.requester, q.target))


def _shared_cells(agent: AgentState, targets: Sequence[int], geometry: Geometry) -> FrozenSet[int]:
    if not targets:
        return frozenset()
    shared = frozenset(agent.observations)
    for target in targets:
        shared &= geometry.visible[target]
    return shared


def merge_and_assess(ctx: StepContext) -> None:
    """
    Model Generator and Anomaly Detector for every agent on merge ticks.

    Domain members share their records with probability respond_prob; a
    liar falsifies each shared record with probability lie_prob.
    """
    cfg = ctx.config
    generator = ModelGenerator(cfg.risk.merge_period)
    if not generator.is_due(ctx.tick):
        return
    detector = AnomalyDetector(
        thresholds=cfg.thresholds,
        r_s=cfg.gso.r_s,
        weights=cfg.risk.severity_weights,
        bands=cfg.risk.bands,
        peer_risk_weight=cfg.risk.peer_risk_weight,
    )

    requesters_of: Dict[AgentId, List[AgentId]] = defaultdict(list)
    for agent_id in sorted(ctx.agents):
        for member in ctx.agents[agent_id].domain.members:
            requesters_of[member].append(agent_id)

    shared: Dict[AgentId, Dict[AgentId, List[BehaviorReport]]] = defaultdict(dict)
    for member in (a for a in ctx.order if a in requesters_of):
        state = ctx.agents[member]
        profile = ctx.profile(member)
        rng = ctx.streams.stream(Phase.SHARE, member, ctx.tick)
        for requester in sorted(requesters_of[member]):
            ctx.report_requests += 1
            if rng.random() >= profile.respond_prob:
                continue
            reports = []
            for subject in sorted(state.records):
                record = state.records[subject]
                if record.sample_count == 0 or subject == requester:
                    continue
                responsiveness, truthfulness = record.responsiveness, record.truthfulness
                if rng.random() < profile.lie_prob:
                    responsiveness, truthfulness = 1.0 - responsiveness, 1.0 - truthfulness
                reports.append(BehaviorReport(member, subject, responsiveness, truthfulness, ctx.tick))
            shared[requester][member] = reports

    positions = {a: s.position for a, s in ctx.agents.items()}
    updated = {}
    for agent_id in ctx.order:
        agent = ctx.agents[agent_id]
        members = sorted(agent.domain.members)
        reputations = {m: update_reputation(agent.records.get(m, BehaviorRecord())) for m in members}
        own = {
            subject: record for subject, record in agent.records.items()
            if record.sample_count > 0 and subject != agent_id
        }
        answered = shared.get(agent_id, {})
        reports = [report for m in sorted(answered) for report in answered[m]]
        merged = generator.generate(reports, reputations, own)
        assessment = detector.assess(
            agent_id, merged, positions, agent.position,
            peer_risks={m: ctx.agents[m].risk for m in sorted(answered)},
            reputations=reputations,
        )
        if not 0.0 <= assessment.risk <= 1.0:
            raise SimulationInvariantError(f"tick {ctx.tick}, agent {agent_id}: risk {assessment.risk} outside [0,1]")
        updated[agent_id] = replace(
            agent,
            labels=dict(assessment.labels),
            risk=assessment.risk,
            alertness=assessment.alertness,
        )
    ctx.agents.update(updated)


DEFAULT_PHASES: Tuple[PhaseFn, ...] = (
    apply_shifts,
    perceive,
    answer_queries,
    score_responses,
    update_domains,
    issue_queries,
    merge_and_assess,
)


def step_world(
    world: World,
    streams: RngStreams,
    order: Optional[Sequence[AgentId]] = None,
    phases: Sequence[PhaseFn] = DEFAULT_PHASES,
) -> World:
    """
    Advance the world by one tick.

    `order` only changes the visiting order of agents; the successor world is
    the same for every permutation.
    """
    visit = tuple(order) if order is not None else world.ids
    if sorted(visit) != sorted(world.ids):
        raise ValueError("order must be a permutation of the agent ids")

    ctx = StepContext(
        world=world,
        streams=streams,
        order=visit,
        agents={a.agent_id: a for a in world.agents},
    )
    for phase in phases:
        phase(ctx)

    stats = StepStats(
        messages=ctx.messages,
        responses=ctx.responded,
        report_requests=ctx.report_requests,
        kappas=tuple(ctx.kappas[a] for a in sorted(ctx.kappas)),
    )
    if stats.responses > len(world.pending):
        raise SimulationInvariantError(
            f"tick {world.tick}: {stats.responses} responses for {len(world.pending)} queries"
        )
    logger.debug(
        "tick %d: messages=%d responses=%d report_requests=%d",
        world.tick, stats.messages, stats.responses, stats.report_requests,
    )
    return World(
        config=world.config,
        tick=Tick(world.tick + 1),
        agents=tuple(ctx.agents[a] for a in sorted(ctx.agents)),
        truth=world.truth,
        pending=tuple(ctx.queries),
        stats=stats,
        geometry=world.geometry,
    )
