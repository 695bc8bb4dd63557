"""Floating-point cross-checks: elliptic functions, finite differences, level matching."""

from .compare import ComparisonReport, compare
from .elliptic import EllipticContext, ellipk, jacobi
from .fd import GridProblem, Spectrum, harmonic_problem, solve_spectrum
from .systems import CASES, verify_case

__all__ = ["ComparisonReport", "compare", "EllipticContext", "ellipk", "jacobi", "GridProblem",
           "Spectrum", "harmonic_problem", "solve_spectrum", "CASES", "verify_case"]
