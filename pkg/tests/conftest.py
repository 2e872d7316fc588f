"""
Pytest fixtures for the alert swarm test suite.
"""

import numpy as np
import pytest

from pipelines.alert_swarm.config import WorldConfig
from pipelines.alert_swarm.core.awareness import InteractionEntry, InteractionLog
from pipelines.alert_swarm.core.gso_domain import GsoParams
from pipelines.alert_swarm.sim.profiles import ProfileKind


def make_log(*outcomes, start_tick=0):
    """
    Interaction log from compact outcomes, one per tick.

    None = query ignored, a float = response with that agreement,
    'r' = response without a scorable cell.
    """
    log = InteractionLog()
    for k, outcome in enumerate(outcomes):
        if outcome is None:
            entry = InteractionEntry(tick=start_tick + k, queried=True, responded=False)
        elif outcome == 'r':
            entry = InteractionEntry(tick=start_tick + k, queried=True, responded=True)
        else:
            entry = InteractionEntry(tick=start_tick + k, queried=True, responded=True, agreement=float(outcome))
        log = log.append(entry)
    return log


@pytest.fixture
def gso_params():
    """Canonical GSO constants."""
    return GsoParams()


@pytest.fixture
def small_config():
    """A 12-agent world small enough to step in milliseconds."""
    return WorldConfig(
        n_agents=12,
        world_size=40.0,
        grid_cells=8,
        seed=11,
        ticks=12,
        gso=GsoParams(r_s=20.0),
        profile_mix={
            ProfileKind.HONEST: 0.5,
            ProfileKind.SILENT_TRUTHFUL: 0.25,
            ProfileKind.RESPONSIVE_LIAR: 0.25,
        },
    )


@pytest.fixture
def honest_config():
    """All-Honest control world."""
    return WorldConfig(
        n_agents=20,
        world_size=60.0,
        grid_cells=12,
        seed=5,
        ticks=40,
        profile_mix={ProfileKind.HONEST: 1.0},
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def write_yaml(tmp_path):
    """Write YAML text to a temp file and return its path."""
    def _write(text, name='config.yaml'):
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write
