"""Selecting independent discrete random variables to optimize E[min] or E[max].

Exact solvers, an approximation scheme for min-min, exact planar max-min
solvers, hardness-reduction generators, and the JSON/CLI harness around them.
All reported values are exact rationals (:class:`fractions.Fraction`).
"""
from .errors import (BudgetExceeded, CertificationFailed, DimensionUnsupported, MespError,
                     ParseError, PrecisionInsufficient, UnknownSuite, ValidationError,
                     ZeroProbabilityUnhandled)
from .exact import (Objective, SolveResult, decide_threshold, joint_outcome_oracle,
                    solve_binary_exact, solve_exact, solve_subset_exact)
from .fptas import FptasConfig, FptasResult, dp_min_min, dp_min_min_binary, dp_min_min_subset
from .hardness import (AtomList, CnfFormula, GeneratedDecision, atoms_to_tails,
                       gen_cnf_binary, gen_cnf_subset, gen_subset_sum, parse_dimacs,
                       verify_subset_sum_certificate)
from .io import parse_instance, parse_selection, serialize_instance
from .model import (BinaryInstance, LogVector, Selection, SubsetInstance, TailDistribution,
                    ValueGrid, expectation, f_eval, min_combine, negate_instance,
                    selection_expectation, to_log_vector)
from .montecarlo import TrialReport, monte_carlo_estimate, sample_variable
from .zonotope import (minkowski_vertices, solve_maxmin_binary, solve_maxmin_subset,
                       topk_sweep_candidates)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
