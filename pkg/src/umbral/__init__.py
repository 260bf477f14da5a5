"""Numerical umbral calculus on strips."""

__version__ = "0.1.0"
