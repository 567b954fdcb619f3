"""Simulation of a time-multiplexed photon-number-resolving detector."""

__version__ = "0.1.0"
