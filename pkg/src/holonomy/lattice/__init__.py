"""Ising-specific pieces: variables, the chi3 series, quadrature, landmarks."""
from .angular import AngularSeries, chi3_angular, expand_x_tilde, expand_y_tilde
from .backend import BACKEND
from .chi3 import ChiSeries, chi3_series
from .variables import modular_invariant, nickel_singularities, w_of_s

__all__ = [
    "BACKEND",
    "AngularSeries",
    "ChiSeries",
    "chi3_angular",
    "chi3_series",
    "expand_x_tilde",
    "expand_y_tilde",
    "modular_invariant",
    "nickel_singularities",
    "w_of_s",
]
