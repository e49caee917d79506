"""Modular and quasi-modular forms as exact truncated q-expansions."""
from .errors import (BudgetExceeded, ComputationError, DepthZero, InsufficientOrder,
                     NormalizationNotExact, NotModular, NotPositiveDefinite, NotQuasiModular,
                     OutOfWindow, QModularError, SingularMatrix, UnknownLattice, ZeroSeries)
from .forms import Normalization, delta, eisenstein, eta, eta_pow, jacobi_theta_z
from .qseries import D, QExp

__version__ = "0.1.0"

__all__ = [
    "QExp", "D", "Normalization", "eisenstein", "delta", "eta", "eta_pow", "jacobi_theta_z",
    "QModularError", "ComputationError", "ZeroSeries", "OutOfWindow", "NormalizationNotExact",
    "InsufficientOrder", "NotModular", "NotQuasiModular", "DepthZero", "SingularMatrix",
    "NotPositiveDefinite", "UnknownLattice", "BudgetExceeded",
]
