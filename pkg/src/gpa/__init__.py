"""Exact computations with graded Poisson, Gerstenhaber and BV algebras.

Polynomials live in free graded-commutative algebras over the rationals
(:mod:`gpa.graded`); the other modules build brackets, generators, algebroids,
Hochschild cochains and constraint systems on top of them.
"""

from .graded import Context, ContextError, GcPoly, render
from .schouten import ShiftedCotangent, shifted_bracket

__all__ = ["Context", "ContextError", "GcPoly", "render", "ShiftedCotangent", "shifted_bracket"]
__version__ = "0.1.0"
