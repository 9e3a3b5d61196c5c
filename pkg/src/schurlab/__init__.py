"""Schur multipliers of SL_2 over finite local rings, computed and predicted."""

__version__ = "0.1.0"
