"""Exact certification of unitary t-groups."""

__version__ = "0.1.0"
