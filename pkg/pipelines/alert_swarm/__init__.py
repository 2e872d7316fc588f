"""
Alert Swarm
Deterministic multi-agent swarm simulator with adaptive alertness.

Agents exchange beliefs about a shared grid, score each other's
responsiveness and truthfulness, pick communication domains with glowworm
swarm optimization, merge peer behavior reports by reputation and classify
every peer into one of four threat levels.
"""

__version__ = "1.0.0"
