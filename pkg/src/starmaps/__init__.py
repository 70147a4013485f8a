"""Decide and cross-check *-commuting shift maps on k-graphs and full shifts."""

__version__ = "0.1.0"
