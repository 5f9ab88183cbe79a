"""Exact arithmetic, word problem and finite quotients for the groups G_A."""

__version__ = "0.1.0"
