"""
Tests for the discrete-time world: spawning, stepping, determinism and
the behavior of honest-only, degenerate and randomly configured swarms.
"""

from dataclasses import replace

import numpy as np
import pytest

from pipelines.alert_swarm.config import AwarenessConfig, BehaviorShift, RiskConfig, WorldConfig, check_config
from pipelines.alert_swarm.core.gso_domain import GsoParams
from pipelines.alert_swarm.core.model import AlertnessLevel, ThreatLevel
from pipelines.alert_swarm.errors import ValidationError
from pipelines.alert_swarm.sim.experiment import iterate_worlds
from pipelines.alert_swarm.sim.profiles import ProfileKind, allocate_profiles
from pipelines.alert_swarm.sim.rng import RngStreams
from pipelines.alert_swarm.sim.world import spawn_swarm, step_world


def advance(world, ticks, order=None):
    streams = RngStreams(world.config.seed)
    for _ in range(ticks):
        visit = order(world) if order else None
        world = step_world(world, streams, visit)
    return world


class TestSpawn:
    """Tests for spawn_swarm."""

    def test_agents_placed_in_world(self, small_config):
        world = spawn_swarm(small_config)
        assert world.tick == 0
        assert world.ids == tuple(range(small_config.n_agents))
        assert all(a.position.within(small_config.world_size) for a in world.agents)

    def test_initial_gso_state(self, small_config):
        world = spawn_swarm(small_config)
        for agent in world.agents:
            assert agent.luciferin.g == small_config.gso.g0
            assert agent.luciferin.r_d == pytest.approx(small_config.gso.r_s / 2)
            assert len(agent.domain) == 0
            assert agent.alertness is AlertnessLevel.LOW

    def test_profile_counts_follow_mix(self, small_config):
        world = spawn_swarm(small_config)
        expected = allocate_profiles(small_config.profile_mix, small_config.n_agents)
        for kind, count in expected.items():
            assert sum(1 for a in world.agents if a.kind is kind) == count

    def test_truth_covers_grid(self, small_config):
        world = spawn_swarm(small_config)
        assert len(world.truth) == small_config.grid_cells ** 2
        assert set(world.truth) <= set(small_config.alphabet)

    def test_same_seed_same_world(self, small_config):
        assert spawn_swarm(small_config) == spawn_swarm(small_config)

    def test_different_seed_different_world(self, small_config):
        assert spawn_swarm(small_config) != spawn_swarm(small_config.with_seed(12))

    def test_empty_swarm_rejected(self, small_config):
        with pytest.raises(ValidationError) as exc:
            spawn_swarm(replace(small_config, n_agents=0))
        assert exc.value.issues[0].field == 'n_agents'


class TestStep:
    """Tests for step_world."""

    def test_tick_advances(self, small_config):
        world = advance(spawn_swarm(small_config), 3)
        assert world.tick == 3

    def test_queries_answered_next_tick(self, honest_config):
        """Responses at tick t only answer queries sent at t-1."""
        world = spawn_swarm(honest_config)
        streams = RngStreams(honest_config.seed)
        world = step_world(world, streams)
        assert world.stats.responses == 0
        for _ in range(8):
            sent = len(world.pending)
            assert world.stats.messages == sent
            world = step_world(world, streams)
            assert world.stats.responses <= sent

    def test_isolated_agents_probe_peers(self, honest_config):
        """Equal initial luciferin leaves domains empty, yet queries still go out."""
        worlds = list(iterate_worlds(replace(honest_config, ticks=8)))
        assert sum(w.stats.messages for w in worlds) > 0

    def test_domain_invariants_hold(self, small_config):
        gso = small_config.gso
        for world in iterate_worlds(small_config):
            for agent in world.agents:
                assert len(agent.domain) <= gso.s
                assert 0.0 <= agent.luciferin.r_d <= gso.r_s
                assert agent.luciferin.g >= 0.0
                assert 0.0 <= agent.risk <= 1.0
                assert agent.agent_id not in agent.domain.members

    def test_bad_order_rejected(self, small_config):
        world = spawn_swarm(small_config)
        with pytest.raises(ValueError):
            step_world(world, RngStreams(small_config.seed), order=[0, 1, 2])

    def test_behavior_shift(self, small_config):
        config = replace(small_config, behavior_shifts=(
            BehaviorShift(tick=1, source=ProfileKind.HONEST, target=ProfileKind.SILENT_LIAR, count=2),
        ))
        before = spawn_swarm(config)
        honest = sorted(a.agent_id for a in before.agents if a.kind is ProfileKind.HONEST)
        after_one = advance(before, 1)
        assert [after_one.agent(a).kind for a in honest] == [ProfileKind.HONEST] * len(honest)
        after_two = advance(before, 2)
        assert after_two.agent(honest[0]).kind is ProfileKind.SILENT_LIAR
        assert after_two.agent(honest[1]).kind is ProfileKind.SILENT_LIAR
        assert all(after_two.agent(a).kind is ProfileKind.HONEST for a in honest[2:])


class TestDeterminism:
    """Same seed and config must give the same trajectory."""

    def test_repeatable(self, small_config):
        assert advance(spawn_swarm(small_config), 10) == advance(spawn_swarm(small_config), 10)

    def test_visit_order_irrelevant(self, small_config):
        forward = advance(spawn_swarm(small_config), 10)
        backward = advance(spawn_swarm(small_config), 10, order=lambda w: tuple(reversed(w.ids)))
        assert forward == backward

    def test_shuffled_order_irrelevant(self, small_config):
        shuffled = (5, 0, 11, 3, 8, 1, 10, 2, 7, 4, 9, 6)
        forward = advance(spawn_swarm(small_config), 6)
        assert advance(spawn_swarm(small_config), 6, order=lambda w: shuffled) == forward


class TestDegenerateSwarms:
    """Single-agent and honest-only worlds."""

    def test_single_agent(self):
        config = WorldConfig(n_agents=1, profile_mix={ProfileKind.HONEST: 1.0}, ticks=5)
        worlds = list(iterate_worlds(config))
        assert len(worlds) == 5
        last = worlds[-1]
        assert all(w.stats.messages == 0 for w in worlds)
        assert len(last.agents[0].domain) == 0
        assert last.agents[0].risk == 0.0
        assert last.agents[0].labels == {}

    def test_honest_swarm_never_flags_liars(self, honest_config):
        for world in iterate_worlds(honest_config):
            for agent in world.agents:
                assert ThreatLevel.MALICIOUS not in agent.labels.values()
                assert ThreatLevel.NOXIOUS not in agent.labels.values()

    def test_honest_swarm_agrees(self, honest_config):
        kappas = [k for world in iterate_worlds(honest_config) for k in world.stats.kappas]
        assert kappas
        assert all(k == pytest.approx(1.0) for k in kappas)


def fuzzed_config(rng):
    """A random valid world: up to 60 agents, up to 200 ticks."""
    world_size = float(rng.uniform(30.0, 120.0))
    mix = rng.dirichlet(np.ones(len(ProfileKind)))
    config = WorldConfig(
        n_agents=int(rng.integers(2, 61)),
        world_size=world_size,
        grid_cells=int(rng.integers(3, 17)),
        alphabet=tuple('ABCDEF'[:int(rng.integers(2, 7))]),
        profile_mix={kind: float(f) for kind, f in zip(ProfileKind, mix)},
        seed=int(rng.integers(0, 2 ** 32)),
        ticks=int(rng.integers(20, 201)),
        gso=GsoParams(
            n_t=int(rng.integers(1, 9)),
            r_s=float(rng.uniform(5.0, world_size)),
            s=int(rng.integers(1, 9)),
        ),
        awareness=AwarenessConfig(staleness=int(rng.integers(0, 41))),
        risk=RiskConfig(merge_period=int(rng.integers(1, 5))),
    )
    return check_config(config)


def assert_world_invariants(world):
    gso = world.config.gso
    ids = set(world.ids)
    for agent in world.agents:
        assert len(agent.domain) <= gso.s
        assert agent.domain.members <= ids
        assert agent.agent_id not in agent.domain.members
        assert 0.0 <= agent.luciferin.r_d <= gso.r_s
        assert 0.0 <= agent.luciferin.g <= gso.luciferin_ceiling + 1e-9
        assert 0.0 <= agent.risk <= 1.0
        assert agent.agent_id not in agent.labels


class TestMessageConservation:
    """Every response answers a query sent the tick before."""

    def test_responses_bounded_by_previous_messages(self, small_config):
        previous = 0
        for world in iterate_worlds(replace(small_config, ticks=40)):
            assert world.stats.messages == len(world.pending)
            assert world.stats.responses <= previous
            previous = world.stats.messages

    def test_messages_match_queries_sent(self, small_config):
        worlds = list(iterate_worlds(replace(small_config, ticks=20)))
        sent = sum(a.queries_sent for a in worlds[-1].agents)
        assert sent == sum(w.stats.messages for w in worlds)


@pytest.mark.slow
class TestFuzzedInvariants:
    """Domain, range, luciferin and risk bounds hold on random worlds."""

    def test_random_worlds(self):
        rng = np.random.default_rng(8675309)
        for _ in range(15):
            config = fuzzed_config(rng)
            previous = 0
            for world in iterate_worlds(config):
                assert_world_invariants(world)
                assert world.stats.messages == len(world.pending)
                assert world.stats.responses <= previous
                previous = world.stats.messages
