"""Exact tools for path extendability in tournaments."""

__version__ = "0.1.0"
