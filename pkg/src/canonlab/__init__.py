"""Exact computations with canonical series on reducible nodal curves."""

__version__ = "0.1.0"
