"""Exact arithmetic and diagnostics for the two-dimensional Jacobi-Perron algorithm."""
__version__ = "0.1.0"
