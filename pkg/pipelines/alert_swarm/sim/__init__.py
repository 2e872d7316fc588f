"""
Alert Swarm Simulation
Deterministic discrete-time world, metrics collection and experiment runs.

world.py and experiment.py depend on the config layer and are imported
directly (``from pipelines.alert_swarm.sim.world import step_world``).
"""

from .profiles import (
    ADVERSARIAL_KINDS,
    DEFAULT_PROFILES,
    PROFILE_ORDER,
    AdversaryProfile,
    ProfileKind,
    allocate_profiles,
    assign_profiles,
)
from .rng import Phase, RngStreams

__all__ = [
    'ADVERSARIAL_KINDS', 'DEFAULT_PROFILES', 'PROFILE_ORDER', 'AdversaryProfile', 'ProfileKind',
    'allocate_profiles', 'assign_profiles', 'Phase', 'RngStreams',
]
