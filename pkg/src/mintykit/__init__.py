"""Monotone operators, convex KKM maps and Minty variational inequalities.

Finite operator graphs in R^n are checked for monotonicity, their
Gamma maps for the KKM and finite-intersection properties, and Minty
variational inequalities are solved over polytopes, with explicit
witnesses and counterexamples.
"""

from .errors import (ConvergenceError, DimensionError, EmptySetError,
                     InternalInconsistency, InvariantBreach, MintyError,
                     SelectionCapExceeded)
from .gamma_map import (GammaSystem, KKMVerdict, SubsetVerdict,
                        build_gamma_system, check_fip, check_kkm,
                        constructive_fip, fip_objective, fip_property,
                        gamma_polyhedron, kkm_property)
from .linalg import convex_combination, dot, sample_simplex_weights
from .minty_vi import (MonotonicityWitness, MVIProblem, classify_via_mvi,
                       construct_witness, solve_finite_mvi, solve_mvi)
from .operator_graph import (OperatorGraph, PairVerdict, Violation,
                             is_monotone, is_quasimonotone, restrict, shift)
from .polyhedra import (FeasibilityResult, HalfSpace, HPolyhedron, Status,
                        Tolerance, VPolytope, contains, feasible_in_hull,
                        project_onto, strictly_feasible_in_hull)
from .randgen import (GenSpec, gen_convex_gradient, gen_cubic_like,
                      gen_perturbed, gen_psd_linear, generate)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DimensionError",
    "EmptySetError",
    "InternalInconsistency",
    "InvariantBreach",
    "MintyError",
    "SelectionCapExceeded",
    "GammaSystem",
    "KKMVerdict",
    "SubsetVerdict",
    "build_gamma_system",
    "check_fip",
    "check_kkm",
    "constructive_fip",
    "fip_objective",
    "fip_property",
    "gamma_polyhedron",
    "kkm_property",
    "convex_combination",
    "dot",
    "sample_simplex_weights",
    "MonotonicityWitness",
    "MVIProblem",
    "classify_via_mvi",
    "construct_witness",
    "solve_finite_mvi",
    "solve_mvi",
    "OperatorGraph",
    "PairVerdict",
    "Violation",
    "is_monotone",
    "is_quasimonotone",
    "restrict",
    "shift",
    "FeasibilityResult",
    "HalfSpace",
    "HPolyhedron",
    "Status",
    "Tolerance",
    "VPolytope",
    "contains",
    "feasible_in_hull",
    "project_onto",
    "strictly_feasible_in_hull",
    "GenSpec",
    "gen_convex_gradient",
    "gen_cubic_like",
    "gen_perturbed",
    "gen_psd_linear",
    "generate",
]
