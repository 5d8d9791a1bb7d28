"""Threshold analysis of monotone set families."""

__version__ = "0.1.0"
