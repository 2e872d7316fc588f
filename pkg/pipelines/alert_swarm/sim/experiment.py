"""Single seeded experiment: spawn, step for config.ticks, collect metrics."""

import logging
from typing import Iterator, Optional

from ..config import WorldConfig
from .metrics import DetectionMetricsCalculator, MetricsCollector, MetricsRecord
from .rng import RngStreams
from .world import World, spawn_swarm, step_world

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 50


def iterate_worlds(config: WorldConfig, streams: Optional[RngStreams] = None) -> Iterator[World]:
    """Yield the world after every tick."""
    world = spawn_swarm(config)
    streams = streams or RngStreams(config.seed)
    for _ in range(config.ticks):
        world = step_world(world, streams)
        yield world


def run_experiment(config: WorldConfig) -> MetricsRecord:
    """
    Run one seeded experiment.

    Raises InvalidConfig when the config breaks an invariant.
    """
    collector = MetricsCollector()
    for world in iterate_worlds(config):
        collector.observe(world)
        if world.tick % PROGRESS_EVERY == 0:
            logger.debug("seed %d: tick %d/%d", config.seed, world.tick, config.ticks)

    frame = collector.frame()
    final = DetectionMetricsCalculator().calculate_all_metrics(frame)
    logger.info("seed %d: %d ticks simulated", config.seed, final['ticks'])
    return MetricsRecord(seed=config.seed, ticks=frame, final=final)
