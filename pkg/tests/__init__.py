"""
Test Suite for the Alert Swarm simulator
"""
