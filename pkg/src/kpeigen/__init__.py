"""Dirichlet eigenvalues of -y'' + q y on [0, pi] for mean-zero step potentials."""

from .asymptotics import (
    B_integral,
    D_functional,
    direct_series_A1B1,
    series_second_order_estimate,
    eval_aux,
    kp_closed_forms,
    a_series_closed_form,
    second_order_kp,
    second_order_kp_corrected,
    sharp_estimate,
)
from .gate import ConditionReport, ConditionViolation, check_condition, smallest_admissible_n
from .oracle import MultipleRoots, NoRootInWindow, OracleResult, characteristic, find_eigenvalue, spectrum_up_to
from .perturbation import ErrorBudget, SeriesConfig, error_budget, evaluate, g_n, k_n, window
from .potential import (
    StepPotential,
    cosine_coeff,
    exp_coeff,
    from_levels,
    from_pieces,
    make_kronig_penney,
    reflect,
    zero_potential,
)
from .report import ComparisonRow, Report, render
from .solver import EigenvalueEstimate, IterateOutsideWindow, NoConvergence, solve, solve_many

__version__ = "0.1.0"
