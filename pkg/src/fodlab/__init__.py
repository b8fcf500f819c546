"""Exact polynomial models of forward, reverse and tangent-style derivatives."""

__version__ = "0.1.0"
