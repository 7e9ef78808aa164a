"""Counterexamples to Reed-Solomon proximity gaps near capacity."""

__version__ = "0.1.0"
