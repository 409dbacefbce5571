"""Acceptance suite: one runner per criterion, shared by the CLI and tests.

Each runner returns a CriterionResult with a pass flag, a one-line detail
string, and the raw measurements (used by --calibrate to refit the empirical
constants in calibration.json).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .calibration import (Calibration, fit_from_measurements, load_calibration,
                          save_calibration)
from .divisors import (DivisorTable, d3_bruteforce, d3sq_ratio, get_table,
                       h_shift, sum_d3_squared)
from .expsum import (GoodPointNotFound, exp_sum_plain, find_good_point,
                     mean_square_exact, mean_square_quad, theorem2_bound)
from .formula import FormulaVariant, compare_theorem1, diff_slope
from .quadrature import MomentKind, integrate_moment, integrate_range
from .saddle import EIGHT_PI3, TWO_PI, _newton_saddle, solve_saddle, summation_range
from .zeta import (chi_factor, hardy_z, z_oracle_array, z_riemann_siegel_array,
                   zeta_strip_oracle)

SMOKE_TABLE_BOUND = 10 ** 4
FULL_TABLE_BOUND = 10 ** 6

EULER_GAMMA = 0.5772156649015329


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    measurements: dict
    seconds: float = 0.0


def _fmt(x: float) -> str:
    return f"{x:.3g}"


# ---------------------------------------------------------------------------
# criterion 1: cubic explicit formula at U = 0
# ---------------------------------------------------------------------------

def criterion_cubic(level: str, table: DivisorTable, cal: Calibration,
                    calibrating: bool = False) -> CriterionResult:
    Ts = [500.0, 1000.0] if level == "smoke" else [500.0, 1000.0, 2000.0, 4000.0]
    comps = [compare_theorem1(T, 0.0, None, table) for T in Ts]
    norm_max = max(c.normalized for c in comps)
    slope = diff_slope(Ts, [max(c.abs_diff, 1e-30) for c in comps])
    ok_norm = calibrating or norm_max <= cal.thm1_normalized_max
    ok_slope = slope <= cal.thm1_slope_max
    return CriterionResult(
        number=1, name="cubic-formula",
        passed=bool(ok_norm and ok_slope),
        detail=(f"normalized_max={_fmt(norm_max)} (cap {cal.thm1_normalized_max}), "
                f"slope={_fmt(slope)} (cap {cal.thm1_slope_max})"),
        measurements={"normalized_max": norm_max, "slope": slope,
                      "diffs": {T: c.abs_diff for T, c in zip(Ts, comps)}},
    )


# ---------------------------------------------------------------------------
# criterion 2: shifted formula, both variants
# ---------------------------------------------------------------------------

def criterion_shifts(level: str, table: DivisorTable, cal: Calibration,
                     calibrating: bool = False) -> CriterionResult:
    Ts = [500.0, 1000.0] if level == "smoke" else [500.0, 1000.0, 2000.0, 4000.0]
    norm_max = 0.0
    im_ratio_max = 0.0
    rows = 0
    for T in Ts:
        for U in (0.5, 2.0, T ** 0.3):
            for variant in FormulaVariant:
                c = compare_theorem1(T, U, None, table, variant=variant)
                norm_max = max(norm_max, c.normalized)
                im_ratio_max = max(im_ratio_max, c.im_leak / T ** 0.75)
                rows += 1
    ok = calibrating or (norm_max <= cal.thm1_normalized_max
                         and im_ratio_max <= cal.im_leak_coeff)
    return CriterionResult(
        number=2, name="shifted-formula",
        passed=bool(ok),
        detail=(f"{rows} (T,U,variant) rows; normalized_max={_fmt(norm_max)} "
                f"(cap {cal.thm1_normalized_max}), im_leak_ratio_max="
                f"{_fmt(im_ratio_max)} (cap {cal.im_leak_coeff})"),
        measurements={"normalized_max": norm_max,
                      "im_leak_ratio_max": im_ratio_max},
    )


# ---------------------------------------------------------------------------
# criterion 3: saddle kernel
# ---------------------------------------------------------------------------

def criterion_saddle(level: str, table: DivisorTable, cal: Calibration,
                     calibrating: bool = False) -> CriterionResult:
    worst_residual = 0.0
    for U in (0.0, 3.0):
        rng = summation_range(2000.0, U)
        n = np.arange(rng.n_lo, rng.n_hi + 1, dtype=float)
        rhs = EIGHT_PI3 * n * n
        t = _newton_saddle(rhs, U, TWO_PI * np.exp((2.0 / 3.0) * np.log(n)))
        residual = np.abs(t * t * (t + U) - rhs) / rhs
        worst_residual = max(worst_residual, float(residual.max()))

    # expansion ladder at n = 10^6: the gap to the k-term approximant must
    # scale like U^k, probed as a log-log regression slope over U; the third
    # gap's coefficient is U^3 n^(-4/3)/(162 pi^2), so U must be large enough
    # to lift it above float64 rounding of t_n (~1e-11 absolute here)
    Us = [8.0, 16.0, 32.0, 64.0, 128.0]
    gaps = {1: [], 2: [], 3: []}
    for U in Us:
        sp = solve_saddle(10 ** 6, U)
        gaps[1].append(abs(sp.t_n - sp.approx1))
        gaps[2].append(abs(sp.t_n - sp.approx2))
        gaps[3].append(abs(sp.t_n - sp.approx3))
    slopes = {k: diff_slope(Us, v) for k, v in gaps.items()}
    ladder_ok = all(abs(slopes[k] - k) <= 0.15 for k in (1, 2, 3))
    ok = worst_residual <= 1e-12 and ladder_ok
    return CriterionResult(
        number=3, name="saddle-kernel",
        passed=bool(ok),
        detail=(f"max_residual={worst_residual:.2e} (cap 1e-12), ladder slopes "
                f"({_fmt(slopes[1])}, {_fmt(slopes[2])}, {_fmt(slopes[3])}) "
                f"vs (1, 2, 3) +/- 0.15"),
        measurements={"max_residual": worst_residual, "ladder_slopes": slopes},
    )


# ---------------------------------------------------------------------------
# criterion 4: divisor layer
# ---------------------------------------------------------------------------

def criterion_divisors(level: str, table: DivisorTable, cal: Calibration,
                       calibrating: bool = False) -> CriterionResult:
    n_max = 2000 if level == "smoke" else 10 ** 4
    mismatches = sum(1 for n in range(1, n_max + 1)
                     if int(table.d3[n]) != d3_bruteforce(n))
    sum10_ok = sum_d3_squared(10, table) == 371

    mult_bad = 0
    pairs = [(m, n) for m in range(2, 64) for n in range(m + 1, 10 ** 4 // m + 1, 97)
             if math.gcd(m, n) == 1][:400]
    for U in (0.0, 0.7, 3.2):
        for m, n in pairs:
            hm = h_shift(m, U, table).value
            hn = h_shift(n, U, table).value
            hmn = h_shift(m * n, U, table).value
            if abs(hmn - hm * hn) > 1e-10 * table.d3[m * n]:
                mult_bad += 1

    tri_bad = 0
    step = 7 if level == "smoke" else 1
    for U in (0.0, 1.0, 10.0):
        for n in range(1, n_max + 1, step):
            if abs(h_shift(n, U, table).value) > table.d3[n] + 1e-12:
                tri_bad += 1

    if level == "full" and table.bound >= 10 ** 6:
        r5 = d3sq_ratio(10 ** 5, table)
        r6 = d3sq_ratio(10 ** 6, table)
        drift = abs(r6 - r5) / r5
        ratio_ok = drift < 0.20
        ratio_note = f"d3sq ratio drift 1e5->1e6 = {drift:.1%} (cap 20%)"
    else:
        ratio_ok = True
        ratio_note = "ratio drift check skipped (smoke level)"
        drift = None

    ok = mismatches == 0 and sum10_ok and mult_bad == 0 and tri_bad == 0 and ratio_ok
    return CriterionResult(
        number=4, name="divisor-layer",
        passed=bool(ok),
        detail=(f"sieve==bruteforce to {n_max} ({mismatches} mismatches), "
                f"sum(d3^2, n<=10)={'371' if sum10_ok else 'WRONG'}, "
                f"multiplicativity fails={mult_bad}, |h|<=d3 fails={tri_bad}, "
                + ratio_note),
        measurements={"mismatches": mismatches, "ratio_drift": drift},
    )


# ---------------------------------------------------------------------------
# criterion 5: mean square and the good point
# ---------------------------------------------------------------------------

def criterion_theorem2(level: str, table: DivisorTable, cal: Calibration,
                       calibrating: bool = False) -> CriterionResult:
    Ns = [10 ** 3] if level == "smoke" else [10 ** 3, 10 ** 4]
    A, B = 1.0, 4.0
    rel_errs, ratios, gp_notes = [], [], []
    gp_ok = True
    for N in Ns:
        ms = mean_square_exact(A, B, N, table)
        msq, _, _ = mean_square_quad(A, B, N, table)
        rel_errs.append(abs(ms - msq) / ms)
        ratios.append(ms / (N ** (4.0 / 3.0) * math.log(N) ** 9))
        try:
            gp = find_good_point(A, B, N, table)
            gp_notes.append(f"N={N}: |S(C)|={gp.magnitude:.3g} "
                            f"<= {theorem2_bound(N):.3g}")
        except GoodPointNotFound as exc:
            gp_ok = False
            gp_notes.append(f"N={N}: {exc}")
    plain_ratio = exp_sum_plain(3.0 * math.pi, 10 ** 4, 2 * 10 ** 4).bound_ratio
    quad_ok = max(rel_errs) <= 1e-6
    ratio_ok = calibrating or max(ratios) <= cal.t2_ratio_max
    plain_ok = calibrating or plain_ratio <= cal.plain_sum_coeff
    ok = quad_ok and ratio_ok and plain_ok and gp_ok
    return CriterionResult(
        number=5, name="mean-square",
        passed=bool(ok),
        detail=(f"exact-vs-quad rel err max={max(rel_errs):.2e} (cap 1e-6), "
                f"ms ratio max={_fmt(max(ratios))} (cap {cal.t2_ratio_max}), "
                f"plain-sum ratio={_fmt(plain_ratio)} (cap {cal.plain_sum_coeff}); "
                + "; ".join(gp_notes)),
        measurements={"rel_errs": rel_errs, "t2_ratio_max": max(ratios),
                      "plain_ratio": plain_ratio},
    )


# ---------------------------------------------------------------------------
# criterion 6: fourth-moment and first-moment sanity
# ---------------------------------------------------------------------------

def criterion_moments(level: str, table: DivisorTable, cal: Calibration,
                      calibrating: bool = False) -> CriterionResult:
    m4 = integrate_moment(MomentKind.M4, 5000.0)
    m4_ratio = m4.value / (5000.0 * math.log(5000.0) ** 4 / (2.0 * math.pi ** 2))
    m4_ok = cal.m4_ratio_lo <= m4_ratio <= cal.m4_ratio_hi

    # cumulative first moment on a dense log grid (segment sums, no rework)
    t_top = 1e4 if level == "smoke" else 1e5
    grid = np.geomspace(1e3, t_top, 13 if level == "smoke" else 25)
    cum = [integrate_moment(MomentKind.M1, float(grid[0])).value]
    for a, b in zip(grid[:-1], grid[1:]):
        seg = integrate_range(MomentKind.M1, float(a), float(b), 0.0)
        cum.append(cum[-1] + seg.value)
    cum = np.array(cum)
    ratios = np.abs(cum) / grid ** 0.25
    checkpoints = [1e3, 1e4] if level == "smoke" else [1e3, 1e4, 1e5]
    cp_ratio = max(float(ratios[np.argmin(np.abs(grid - T))]) for T in checkpoints)
    sign_changes = int(np.sum(np.sign(cum[:-1]) * np.sign(cum[1:]) < 0))
    ratio_ok = calibrating or cp_ratio <= cal.m1_ratio_max
    sign_ok = sign_changes >= 1 or level == "smoke"
    ok = m4_ok and ratio_ok and sign_ok
    return CriterionResult(
        number=6, name="moment-sanity",
        passed=bool(ok),
        detail=(f"M4 ratio={_fmt(m4_ratio)} in [{cal.m4_ratio_lo}, "
                f"{cal.m4_ratio_hi}]: {'yes' if m4_ok else 'NO'}; "
                f"|int Z|/T^(1/4) max={_fmt(cp_ratio)} (cap {cal.m1_ratio_max}), "
                f"sign changes={sign_changes}"
                + (" (reported only at smoke level)" if level == "smoke" else "")),
        measurements={"m4_ratio": m4_ratio, "m1_ratio_max": cp_ratio,
                      "sign_changes": sign_changes},
    )


# ---------------------------------------------------------------------------
# criterion 7: zeta core cross-validation
# ---------------------------------------------------------------------------

def criterion_zeta(level: str, table: DivisorTable, cal: Calibration,
                   calibrating: bool = False) -> CriterionResult:
    chi_dev = max(abs(chi_factor(0.5 + 1j * t).modulus - 1.0)
                  for t in np.geomspace(50.0, 1e5, 50))

    fe_bad = 0
    for sigma in (0.3, 0.5, 0.7):
        for t in (10.0, 100.0, 1000.0):
            s = sigma + 1j * t
            lhs = zeta_strip_oracle(s)
            rhs = chi_factor(s).value * zeta_strip_oracle(1.0 - s)
            if abs(lhs - rhs) > 1e-8 * (1.0 + abs(lhs)):
                fe_bad += 1

    pts = 100 if level == "smoke" else 1000
    t_top = 1e4 if level == "smoke" else 1e5
    ts = np.geomspace(100.0, t_top, pts)
    dev = float(np.max(np.abs(z_riemann_siegel_array(ts) - z_oracle_array(ts))))

    even_dev = max(abs(hardy_z(t).z - hardy_z(-t).z) for t in (100.0, 1000.0))
    z_zero = abs(hardy_z(14.134725141, "oracle").z)

    ok = (chi_dev <= 1e-12 and fe_bad == 0 and dev <= 1e-6
          and even_dev <= 1e-9 and z_zero <= 1e-5)
    return CriterionResult(
        number=7, name="zeta-core",
        passed=bool(ok),
        detail=(f"| |chi|-1 | max={chi_dev:.2e} (cap 1e-12), functional-eq "
                f"fails={fe_bad}, RS-vs-oracle max={dev:.2e} over {pts} pts "
                f"(cap 1e-6), evenness dev={even_dev:.2e}, |Z(t_zero1)|="
                f"{z_zero:.2e} (cap 1e-5)"),
        measurements={"chi_dev": chi_dev, "rs_vs_oracle": dev,
                      "z_first_zero": z_zero},
    )


# ---------------------------------------------------------------------------
# criterion 8: shifted second-moment diagnostic (informational)
# ---------------------------------------------------------------------------

def criterion_hall(level: str, table: DivisorTable, cal: Calibration,
                   calibrating: bool = False) -> CriterionResult:
    """Fits the secondary constant of int_0^T Z(t)Z(t+U) dt at U = alpha/log T.

    Reports whether the fit favors 2g-1-2pi or 2g-1-log(2pi) (g = Euler's
    constant); never fails -- this probes a suspected misprint in the
    literature value, not this implementation.
    """
    alphas = [1.0] if level == "smoke" else [0.5, 1.0]
    Ts = [2000.0, 5000.0] if level == "smoke" else [2000.0, 5000.0, 10000.0]
    c_candidates = {"2g-1-2pi": 2 * EULER_GAMMA - 1 - 2 * math.pi,
                    "2g-1-log2pi": 2 * EULER_GAMMA - 1 - math.log(2 * math.pi)}
    notes = []
    fits = {}
    for alpha in alphas:
        xs, ys = [], []
        for T in Ts:
            U = alpha / math.log(T)
            I = integrate_moment(MomentKind.M2SHIFT, T, U).value
            sinc = math.sin(alpha / 2.0) / (alpha / 2.0)
            xs.append(T * math.cos(alpha / 2.0))
            ys.append(I - sinc * T * math.log(T))
        c_fit = sum(x * y for x, y in zip(xs, ys)) / sum(x * x for x in xs)
        best = min(c_candidates, key=lambda k: abs(c_fit - c_candidates[k]))
        fits[alpha] = c_fit
        notes.append(f"alpha={alpha}: c_fit={c_fit:.4f} -> closest to {best} "
                     f"({c_candidates[best]:.4f})")
    return CriterionResult(
        number=8, name="second-moment-constant",
        passed=True,
        detail="informational; " + "; ".join(notes),
        measurements={"c_fits": fits, "candidates": c_candidates},
    )


RUNNERS = [criterion_cubic, criterion_shifts, criterion_saddle,
           criterion_divisors, criterion_theorem2, criterion_moments,
           criterion_zeta, criterion_hall]


@dataclass
class SuiteReport:
    level: str
    results: list[CriterionResult]
    passed: bool
    calibration: Calibration


def suite_table_bound(level: str) -> int:
    return SMOKE_TABLE_BOUND if level == "smoke" else FULL_TABLE_BOUND


def run_suite(level: str = "smoke", table: DivisorTable | None = None,
              cal: Calibration | None = None, calibrate: bool = False,
              echo=print) -> SuiteReport:
    if level not in ("smoke", "full"):
        raise ValueError(f"unknown suite level {level!r}")
    table = table or get_table(suite_table_bound(level))
    cal = cal or load_calibration()
    results = []
    for runner in RUNNERS:
        t0 = time.perf_counter()
        res = runner(level, table, cal, calibrating=calibrate)
        res.seconds = time.perf_counter() - t0
        results.append(res)
        echo(f"[{'PASS' if res.passed else 'FAIL'}] criterion {res.number} "
             f"({res.name}): {res.detail} [{res.seconds:.1f}s]")
    if calibrate:
        measured = {}
        for res in results:
            for key in ("normalized_max", "im_leak_ratio_max", "m1_ratio_max",
                        "plain_ratio", "t2_ratio_max"):
                if key in res.measurements and res.measurements[key] is not None:
                    measured[key] = max(measured.get(key, 0.0),
                                        res.measurements[key])
        cal = fit_from_measurements(measured)
        path = save_calibration(cal)
        echo(f"calibration written to {path}")
    passed = all(r.passed for r in results)
    echo(f"suite {level}: {'PASS' if passed else 'FAIL'} "
         f"({sum(r.passed for r in results)}/{len(results)} criteria)")
    return SuiteReport(level=level, results=results, passed=passed,
                       calibration=cal)
