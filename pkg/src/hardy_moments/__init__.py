"""Numerical toolkit for critical-line moments of Hardy's Z function,
divisor-weighted exponential sums, and their explicit-formula comparisons.
"""

__version__ = "0.1.0"

from .calibration import Calibration, load_calibration, save_calibration
from .divisors import (DivisorTable, build_divisor_table, d3_bruteforce,
                       d3sq_ratio, get_table, h_shift, load_table, save_table,
                       sum_d3_squared)
from .errors import (ConvergenceError, DomainError, TableBoundError,
                     ToleranceError)
from .expsum import (ExpSumScan, exp_sum_d3, exp_sum_plain, find_good_point,
                     mean_square_exact, mean_square_quad, scan_interval,
                     theorem2_bound)
from .formula import (FormulaVariant, MomentComparison, compare_theorem1,
                      rhs_sum, write_comparison_csv)
from .quadrature import (MomentKind, MomentResult, PanelRule, QuadratureSpec,
                         first_moment_diag, integrate_moment, integrate_range)
from .saddle import (FormulaTerm, PhaseFunction, SaddlePoint, SummationRange,
                     formula_term, solve_saddle, summation_range)
from .suite import CriterionResult, SuiteReport, run_suite
from .zeta import (ChiDecomposition, ZEvaluation, ZMethod, chi_factor,
                   hardy_z, theta_phase, zeta_half_oracle, zeta_strip_oracle)

__all__ = [
    "Calibration", "load_calibration", "save_calibration",
    "DivisorTable", "build_divisor_table", "d3_bruteforce", "d3sq_ratio",
    "get_table", "h_shift", "load_table", "save_table", "sum_d3_squared",
    "ConvergenceError", "DomainError", "TableBoundError", "ToleranceError",
    "ExpSumScan", "exp_sum_d3", "exp_sum_plain", "find_good_point",
    "mean_square_exact", "mean_square_quad", "scan_interval", "theorem2_bound",
    "FormulaVariant", "MomentComparison", "compare_theorem1", "rhs_sum",
    "write_comparison_csv",
    "MomentKind", "MomentResult", "PanelRule", "QuadratureSpec",
    "first_moment_diag", "integrate_moment", "integrate_range",
    "FormulaTerm", "PhaseFunction", "SaddlePoint", "SummationRange",
    "formula_term", "solve_saddle", "summation_range",
    "CriterionResult", "SuiteReport", "run_suite",
    "ChiDecomposition", "ZEvaluation", "ZMethod", "chi_factor", "hardy_z",
    "theta_phase", "zeta_half_oracle", "zeta_strip_oracle",
    "__version__",
]
