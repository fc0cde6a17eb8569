"""Exact verification of linear preservers of determinant-like invariant forms."""

__version__ = "0.1.0"
