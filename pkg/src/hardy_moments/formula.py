"""Assembly of the explicit-formula right-hand side and moment comparisons."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .divisors import DivisorTable, h_shift_array
from .errors import TableBoundError
from .quadrature import MomentKind, QuadratureSpec, integrate_moment
from .saddle import (conjugate_terms_array, formula_terms_array, sum_terms,
                     summation_range)


class FormulaVariant(Enum):
    EXACT317 = "exact"
    THEOREM1 = "thm1"


@dataclass(frozen=True)
class MomentComparison:
    T: float
    U: float
    lhs: float
    rhs: complex
    abs_diff: float
    im_leak: float
    normalized: float
    n_terms: int
    variant: FormulaVariant
    evaluations: int = 0


def rhs_sum(T: float, U: float, variant: FormulaVariant | str,
            table: DivisorTable, conjugate: bool = False) -> complex:
    """Explicit-formula sum over the window's saddle range, compensated."""
    variant = FormulaVariant(variant)
    rng = summation_range(T, U)
    if rng.n_hi > table.bound:
        raise TableBoundError(
            f"divisor table bound {table.bound} below n_hi={rng.n_hi}")
    if rng.n_hi < rng.n_lo:
        return 0.0 + 0.0j
    h_vals = h_shift_array(rng.n_lo, rng.n_hi, U, table)
    if conjugate:
        terms = conjugate_terms_array(rng.n_lo, rng.n_hi, U, h_vals)
        return sum_terms(terms)
    exact, thm1, _ = formula_terms_array(rng.n_lo, rng.n_hi, U, h_vals)
    return sum_terms(exact if variant is FormulaVariant.EXACT317 else thm1)


def compare_theorem1(T: float, U: float, spec: QuadratureSpec | None,
                     table: DivisorTable,
                     variant: FormulaVariant | str = FormulaVariant.EXACT317,
                     conjugate: bool = False) -> MomentComparison:
    """Moment integral vs explicit-formula sum, with all diagnostics."""
    variant = FormulaVariant(variant)
    kind = MomentKind.M3CONJ if conjugate else MomentKind.M3SHIFT
    lhs = integrate_moment(kind, T, U, spec)
    rhs = rhs_sum(T, U, variant, table, conjugate=conjugate)
    rng = summation_range(T, U)
    abs_diff = abs(lhs.value - rhs.real)
    return MomentComparison(
        T=T, U=U, lhs=lhs.value, rhs=rhs,
        abs_diff=abs_diff,
        im_leak=abs(rhs.imag),
        normalized=abs_diff / T ** 0.75,
        n_terms=max(0, rng.n_hi - rng.n_lo + 1),
        variant=variant,
        evaluations=lhs.evaluations,
    )


COMPARISON_CSV_FIELDS = ["T", "U", "variant", "lhs", "rhs_re", "rhs_im",
                         "abs_diff", "normalized", "n_terms", "evaluations"]


def comparison_row(cmp: MomentComparison) -> dict:
    fmt = "{:.17g}".format
    return {
        "T": fmt(cmp.T), "U": fmt(cmp.U), "variant": cmp.variant.value,
        "lhs": fmt(cmp.lhs), "rhs_re": fmt(cmp.rhs.real),
        "rhs_im": fmt(cmp.rhs.imag), "abs_diff": fmt(cmp.abs_diff),
        "normalized": fmt(cmp.normalized), "n_terms": str(cmp.n_terms),
        "evaluations": str(cmp.evaluations),
    }


def write_comparison_csv(path: Path, comparisons: list[MomentComparison]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COMPARISON_CSV_FIELDS)
        writer.writeheader()
        for cmp in comparisons:
            writer.writerow(comparison_row(cmp))


def diff_slope(Ts: list[float], diffs: list[float]) -> float:
    """Least-squares slope of log|diff| against log T (growth-rate probe)."""
    xs = [math.log(t) for t in Ts]
    ys = [math.log(max(d, 1e-300)) for d in diffs]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den
