"""Exact workbench for two-player Bayesian bargaining problems with private disagreement values."""
from .problem import BargainingProblem, frontier, has_full_support, is_independent, validate
from .mechanism import (Check, InterimProfile, Mechanism, PropertyReport, check_efficiency,
                        check_ic, check_ir, check_ordinality, interim_profile, property_report)
from .feasible import (PreconditionError, build_system, constancy_gap, efficient_gap,
                       interim_incentive_efficient, ordinality_gap, project_interim,
                       verify_prop5, verify_theorem2)
from .solutions import CONCEPTS, Solution, solve
from .durability import durability, is_expost_durable, summary_line
from .tu import TUProblem, embed, threshold_holds
from .fixtures import fixture, fixtures
from .verify import CATALOG as CHECKS
from .verify import run_check

__version__ = "0.1.0"

__all__ = [
    "BargainingProblem", "frontier", "has_full_support", "is_independent", "validate",
    "Mechanism", "InterimProfile", "Check", "PropertyReport", "interim_profile",
    "check_ic", "check_ir", "check_efficiency", "check_ordinality", "property_report",
    "PreconditionError", "build_system", "project_interim", "ordinality_gap", "constancy_gap",
    "efficient_gap", "interim_incentive_efficient", "verify_prop5", "verify_theorem2",
    "CONCEPTS", "Solution", "solve",
    "durability", "is_expost_durable", "summary_line",
    "TUProblem", "embed", "threshold_holds",
    "fixture", "fixtures", "CHECKS", "run_check",
]
