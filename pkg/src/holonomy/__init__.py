"""Exact series, ODE guessing and Fuchsian analysis for the Ising chi3 susceptibility."""

__version__ = "0.1.0"
