"""Exact linear algebra, LP and polytope tools used by the rest of the package."""
from .rational import Rational, fmt, primitive, q
from .linear import EQ, GE, LE, Constraint, LinearSystem, Polytope, rank
from .lp import LPResult, LPSolver, is_feasible, solve_lp, verify_certificate
from .fm import contains_polytope, fourier_motzkin_project, same_polytope
from .geometry import (UnboundedPolytopeError, enumerate_vertices_2d, sort_ccw,
                       upper_right_hull)

__all__ = [
    "Rational", "q", "fmt", "primitive",
    "LE", "EQ", "GE", "Constraint", "LinearSystem", "Polytope", "rank",
    "LPResult", "LPSolver", "solve_lp", "is_feasible", "verify_certificate",
    "fourier_motzkin_project", "contains_polytope", "same_polytope",
    "enumerate_vertices_2d", "upper_right_hull", "sort_ccw", "UnboundedPolytopeError",
]
