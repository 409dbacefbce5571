"""Saddle-point kernel for the explicit cubic-moment formula.

For each n the stationary-phase height t_n solves t^2(t+U) = 8 pi^3 n^2;
this module solves that cubic exactly (Newton), carries the asymptotic
approximants, evaluates the phase function and its derivatives, and builds
the per-n terms of the explicit formula in both the saddle-exact shape and
the leading closed shape with a numeric bracket factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divisors import DivisorTable, h_shift
from .errors import ConvergenceError, DomainError
from .summation import chunked_csum

TWO_PI = 2.0 * math.pi
EIGHT_PI3 = 8.0 * math.pi ** 3


@dataclass(frozen=True)
class PhaseFunction:
    """Phase t log(t/2pi) + (1/2)(t+U) log((t+U)/2pi) - (3/2)t - t log n."""
    n: int
    U: float

    def f(self, t):
        t = np.asarray(t, dtype=float)
        return (t * np.log(t / TWO_PI)
                + 0.5 * (t + self.U) * np.log((t + self.U) / TWO_PI)
                - 1.5 * t - t * math.log(self.n))

    def df(self, t):
        t = np.asarray(t, dtype=float)
        return (np.log(t / TWO_PI) + 0.5 * np.log((t + self.U) / TWO_PI)
                - math.log(self.n))

    def d2f(self, t):
        t = np.asarray(t, dtype=float)
        return (3.0 * t + 2.0 * self.U) / (2.0 * t * (t + self.U))


@dataclass(frozen=True)
class SaddlePoint:
    n: int
    U: float
    t_n: float
    residual: float
    approx1: float  # 2 pi n^(2/3)
    approx2: float  # ... - U/3
    approx3: float  # ... - U^2 n^(-2/3)/(18 pi)


@dataclass(frozen=True)
class SummationRange:
    T: float
    U: float
    T0: float
    T1: float
    N0: float
    N1: float
    n_lo: int
    n_hi: int


@dataclass(frozen=True)
class FormulaTerm:
    n: int
    U: float
    exact_term: complex
    thm1_term: complex
    k_factor: complex


MAX_NEWTON_ITER = 64
RESIDUAL_TOL = 1e-13


def _newton_saddle(rhs: np.ndarray, U: float, seed: np.ndarray,
                   conjugate: bool = False) -> np.ndarray:
    """Positive root of t^2(t+U) = rhs (or t(t+U)^2 = rhs when conjugate).

    Both cubics are strictly increasing for t > 0, so Newton from any
    positive seed near the root converges globally; rhs = 8 pi^3 n^2.
    """
    t = seed.astype(float).copy()
    for _ in range(MAX_NEWTON_ITER):
        if conjugate:
            g = t * (t + U) ** 2 - rhs
            dg = (t + U) * (3.0 * t + U)
        else:
            g = t * t * (t + U) - rhs
            dg = t * (3.0 * t + 2.0 * U)
        step = g / dg
        t = t - step
        if np.all(np.abs(g) <= RESIDUAL_TOL * rhs):
            return t
    raise ConvergenceError("saddle Newton iteration failed to converge")


def solve_saddle(n: int, U: float) -> SaddlePoint:
    """Solve the saddle equation for one n, with the expansion approximants."""
    if n < 1 or U < 0:
        raise DomainError("solve_saddle needs n >= 1 and U >= 0")
    n23 = math.exp((2.0 / 3.0) * math.log(n)) if n > 1 else 1.0
    seed = np.array([TWO_PI * n23])
    rhs = np.array([EIGHT_PI3 * float(n) ** 2])
    t = float(_newton_saddle(rhs, U, seed)[0])
    residual = abs(t * t * (t + U) - rhs[0]) / rhs[0]
    return SaddlePoint(
        n=int(n), U=float(U), t_n=t, residual=residual,
        approx1=TWO_PI * n23,
        approx2=TWO_PI * n23 - U / 3.0,
        approx3=TWO_PI * n23 - U / 3.0 + U * U / (n23 * 18.0 * math.pi),
    )


def summation_range(T: float, U: float) -> SummationRange:
    """Endpoints of the explicit-formula sum for the window [T/2, T]."""
    if T <= 0 or not 0.0 <= U <= math.sqrt(T):
        raise DomainError("summation_range needs T > 0 and 0 <= U <= sqrt(T)")
    root8pi3 = math.sqrt(EIGHT_PI3)
    T0 = T ** 1.5 / root8pi3
    T1 = (T / 2.0) ** 1.5 / root8pi3
    N0 = math.sqrt(T * T * (T + U) / EIGHT_PI3)
    N1 = math.sqrt((T / 2.0) ** 2 * (T / 2.0 + U) / EIGHT_PI3)
    # absorb last-ulp noise when an endpoint is analytically an integer
    eps = 1e-9
    return SummationRange(T=T, U=U, T0=T0, T1=T1, N0=N0, N1=N1,
                          n_lo=math.ceil(T1 - eps), n_hi=math.floor(T0 + eps))


_PREF_EXACT = math.sqrt(TWO_PI)            # sqrt(2 pi) e^{-i pi/8} prefactor
_PREF_LEAD = TWO_PI * math.sqrt(2.0 / 3.0)  # 2 pi sqrt(2/3)


def _term_pieces(n: np.ndarray, t: np.ndarray, U: float):
    """Saddle-exact amplitude and phase pieces shared by both term shapes."""
    ampl = np.exp(-0.5 * np.log(n)) * np.sqrt(2.0 * t * (t + U) / (3.0 * t + 2.0 * U))
    phase = np.exp(1j * (-0.5 * U - 1.5 * t + 0.5 * U * np.log((t + U) / TWO_PI)))
    return ampl, phase


def formula_terms_array(n_lo: int, n_hi: int, U: float,
                        h_values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(exact, thm1, k_factor) arrays for n in [n_lo, n_hi].

    exact: saddle-point shape built from the Newton-solved t_n.
    thm1:  leading closed shape 2 pi sqrt(2/3) h n^{-1/6+iU/3}
           e^{-3 pi i n^{2/3} - pi i/8} times the numeric bracket, where the
           bracket is the ratio of the exact amplitude-phase product to its
           leading form (no undetermined expansion constants involved).
    """
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    log_n = np.log(n)
    n23 = np.exp((2.0 / 3.0) * log_n)
    t = _newton_saddle(EIGHT_PI3 * n * n, U, TWO_PI * n23)
    ampl, phase = _term_pieces(n, t, U)

    pre_exact = _PREF_EXACT * np.exp(-1j * math.pi / 8.0)
    exact = pre_exact * h_values * ampl * phase

    lead_ampl = 2.0 * math.sqrt(math.pi / 3.0) * np.exp(-log_n / 6.0)
    lead_phase = np.exp(1j * ((U / 3.0) * log_n - 3.0 * math.pi * n23))
    k_factor = (ampl * phase) / (lead_ampl * lead_phase)
    thm1 = (_PREF_LEAD * h_values * np.exp(-log_n / 6.0)
            * np.exp(1j * ((U / 3.0) * log_n - 3.0 * math.pi * n23 - math.pi / 8.0))
            * k_factor)
    return exact, thm1, k_factor


def formula_term(n: int, U: float, table: DivisorTable) -> FormulaTerm:
    """Per-n term of the explicit formula in both shapes."""
    if U < 0:
        raise DomainError("formula_term needs U >= 0")
    h = h_shift(n, U, table).value
    exact, thm1, k = formula_terms_array(n, n, U, np.array([h]))
    return FormulaTerm(n=int(n), U=float(U), exact_term=complex(exact[0]),
                       thm1_term=complex(thm1[0]), k_factor=complex(k[0]))


def conjugate_terms_array(n_lo: int, n_hi: int, U: float,
                          h_values: np.ndarray) -> np.ndarray:
    """Per-n terms for the conjugate moment (Z^2 shifted, Z unshifted).

    Repeating the saddle computation with the roles of the shifted and
    unshifted chi factors swapped gives the saddle equation t(t+U)^2 =
    8 pi^3 n^2, Dirichlet coefficient conj(h(n,U)) n^{-iU}, amplitude
    sqrt(2t(t+U)/(3t+U)), and phase e^{-iU} e^{-3it/2} ((t+U)/2pi)^{iU}.
    """
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    n23 = np.exp((2.0 / 3.0) * np.log(n))
    t = _newton_saddle(EIGHT_PI3 * n * n, U, TWO_PI * n23, conjugate=True)
    ampl = np.exp(-0.5 * np.log(n)) * np.sqrt(2.0 * t * (t + U) / (3.0 * t + U))
    phase = np.exp(1j * (-U - 1.5 * t + U * np.log((t + U) / TWO_PI)))
    coeff = np.conj(h_values) * np.exp(-1j * U * np.log(n))
    pre = _PREF_EXACT * np.exp(-1j * math.pi / 8.0)
    return pre * coeff * ampl * phase


def sum_terms(terms: np.ndarray) -> complex:
    """Deterministic compensated reduction of a term array."""
    return chunked_csum(terms)
