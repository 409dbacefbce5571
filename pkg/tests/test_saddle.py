import math

import numpy as np
import pytest

from hardy_moments.divisors import build_divisor_table
from hardy_moments.errors import DomainError
from hardy_moments.saddle import (PhaseFunction, formula_term,
                                  formula_terms_array, solve_saddle,
                                  sum_terms, summation_range)

TWO_PI = 2.0 * math.pi


def test_saddle_n1_closed_form():
    sp = solve_saddle(1, 0.0)
    assert abs(sp.t_n - TWO_PI) < 1e-12
    assert sp.residual <= 1e-13


def test_saddle_residuals_small():
    for n in (2, 17, 1000, 10 ** 6):
        for U in (0.0, 3.0, 11.5):
            sp = solve_saddle(n, U)
            assert sp.residual <= 1e-12


def test_saddle_stationary_phase():
    # df vanishes at the saddle: log(t/2pi) + (1/2)log((t+U)/2pi) = log n
    for n, U in ((100, 0.0), (5000, 4.0)):
        sp = solve_saddle(n, U)
        assert abs(PhaseFunction(n, U).df(sp.t_n)) < 1e-12


def test_saddle_approximant_ladder():
    # paper-scale check: three-term approximant accurate to O(U^3 n^{-4/3})
    n, U = 10 ** 6, 5.0
    sp = solve_saddle(n, U)
    assert abs(sp.t_n - sp.approx1) <= 2 * U / 3
    assert abs(sp.t_n - sp.approx2) <= 2 * U * U * n ** (-2 / 3) / (18 * math.pi)
    assert abs(sp.t_n - sp.approx3) <= 10 * U ** 3 * n ** (-4 / 3)


def test_saddle_domain():
    with pytest.raises(DomainError):
        solve_saddle(0, 0.0)
    with pytest.raises(DomainError):
        solve_saddle(5, -1.0)


def test_summation_range_at_2pi():
    rng = summation_range(TWO_PI, 0.0)
    assert abs(rng.T0 - 1.0) < 1e-12
    assert abs(rng.T1 - 2 ** -1.5) < 1e-12
    assert (rng.n_lo, rng.n_hi) == (1, 1)


def test_summation_range_scaling():
    rng = summation_range(2000.0, 0.0)
    assert rng.n_lo == math.ceil(rng.T1 - 1e-9)
    assert rng.n_hi == math.floor(rng.T0 + 1e-9)
    assert rng.N0 >= rng.T0
    with pytest.raises(DomainError):
        summation_range(100.0, 50.0)
    with pytest.raises(DomainError):
        summation_range(-5.0, 0.0)


def test_term_shapes_agree_at_zero_shift():
    table = build_divisor_table(100)
    h = table.d3[2:31].astype(complex)
    exact, thm1, k = formula_terms_array(2, 30, 0.0, h)
    # at U=0 the bracket is exactly the deviation of the true saddle from
    # its leading form; both shapes must agree to rounding
    assert np.max(np.abs(exact - thm1)) <= 1e-9 * np.max(np.abs(exact))
    assert np.all(np.abs(np.abs(k) - 1.0) < 0.2)


def test_formula_term_scalar_matches_array():
    table = build_divisor_table(100)
    term = formula_term(12, 1.5, table)
    assert term.n == 12
    assert abs(term.exact_term) > 0
    assert abs(term.thm1_term - term.exact_term) < 1e-6 * abs(term.exact_term)


def test_sum_terms_order_stable():
    rng = np.random.default_rng(7)
    terms = rng.normal(size=4096) + 1j * rng.normal(size=4096)
    a = sum_terms(terms)
    b = sum_terms(terms[::-1])
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))
