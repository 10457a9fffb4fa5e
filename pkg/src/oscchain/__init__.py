"""Exact symbolic-numeric engine for closed chains of coupled oscillators."""

__version__ = "0.1.0"
