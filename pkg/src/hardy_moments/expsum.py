"""Divisor-weighted exponential sums S(alpha,N), their mean square in alpha,
and the search for a small-value point guaranteed by the mean-value argument.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .divisors import DivisorTable
from .errors import DomainError, TableBoundError
from .summation import chunked_csum, chunked_fsum

PAIRWISE_N_CAP = 10 ** 5
_BLOCK = 256


def _worker_count() -> int:
    env = os.environ.get("HARDY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _map_blocks(fn, starts):
    """Apply fn to block start offsets, in parallel but in deterministic order."""
    if _worker_count() == 1 or len(starts) < 2:
        return [fn(lo) for lo in starts]
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        return list(pool.map(fn, starts))


@dataclass(frozen=True)
class PlainSumResult:
    value: complex
    bound_ratio: float  # |T(alpha,N)| * |alpha| / N^(1/3)


@dataclass(frozen=True)
class GoodPoint:
    C: float
    magnitude: float


@dataclass(frozen=True)
class ExpSumScan:
    N: int
    A: float
    B: float
    grid: np.ndarray        # shape (m, 2): alpha, |S|
    grid_values: np.ndarray  # complex S on the grid
    ms_exact: float
    ms_quad: float
    ratio: float            # ms_exact / (N^(4/3) log^9 N)
    good_point: GoodPoint | None


def _check_range(N: int, Nprime: int, table: DivisorTable | None) -> None:
    if not (1 <= N < Nprime <= 2 * N):
        raise DomainError("need N < N' <= 2N")
    if table is not None and Nprime > table.bound:
        raise TableBoundError(f"N'={Nprime} exceeds table bound {table.bound}")


def _frequencies(N: int, Nprime: int) -> np.ndarray:
    n = np.arange(N + 1, Nprime + 1, dtype=float)
    return np.exp((2.0 / 3.0) * np.log(n))


def exp_sum_d3(alpha: float, N: int, Nprime: int, table: DivisorTable) -> complex:
    """S(alpha,N) = sum_{N<n<=N'} d3(n) e^{i alpha n^(2/3)}."""
    _check_range(N, Nprime, table)
    freqs = _frequencies(N, Nprime)
    d3 = table.d3[N + 1:Nprime + 1].astype(float)
    return chunked_csum(d3 * np.exp(1j * alpha * freqs))


def exp_sum_plain(alpha: float, N: int, Nprime: int) -> PlainSumResult:
    """Unweighted sum T(alpha,N), with its first-derivative-bound diagnostic."""
    _check_range(N, Nprime, None)
    freqs = _frequencies(N, Nprime)
    value = chunked_csum(np.exp(1j * alpha * freqs))
    ratio = abs(value) * abs(alpha) / N ** (1.0 / 3.0) if alpha != 0.0 else math.inf
    return PlainSumResult(value=value, bound_ratio=ratio)


def _exp_sum_grid(alphas: np.ndarray, N: int, Nprime: int,
                  table: DivisorTable) -> np.ndarray:
    """S(alpha,N) on a grid of alphas, blocked to bound memory."""
    freqs = _frequencies(N, Nprime)
    d3 = table.d3[N + 1:Nprime + 1].astype(float)
    out = np.empty(alphas.size, dtype=complex)

    def run(lo):
        a = alphas[lo:lo + _BLOCK]
        out[lo:lo + _BLOCK] = np.exp(1j * np.outer(a, freqs)) @ d3

    _map_blocks(run, range(0, alphas.size, _BLOCK))
    return out


def mean_square_exact(A: float, B: float, N: int, table: DivisorTable) -> float:
    """Closed-form int_A^B |S(alpha,N)|^2 d alpha with N' = 2N.

    Diagonal (B-A) sum of d3^2 plus the pairwise cross terms
    d3(m) d3(n) (sin(B delta) - sin(A delta))/delta, delta = m^(2/3)-n^(2/3);
    the double sum is O(N^2), guarded at N <= 1e5.
    """
    if A > B:
        raise DomainError("need A <= B")
    if N > PAIRWISE_N_CAP:
        raise DomainError(f"pairwise mean square capped at N = {PAIRWISE_N_CAP}")
    _check_range(N, 2 * N, table)
    if A == B:
        return 0.0
    freqs = _frequencies(N, 2 * N)
    d3 = table.d3[N + 1:2 * N + 1].astype(float)
    diagonal = (B - A) * float(np.dot(d3, d3))
    m = freqs.size

    def run(lo):
        fr = freqs[lo:lo + _BLOCK]
        dr = d3[lo:lo + _BLOCK]
        delta = fr[:, None] - freqs[None, :]
        rows = np.arange(lo, min(lo + _BLOCK, m))
        diag_mask = rows[:, None] == np.arange(m)[None, :]
        delta[diag_mask] = 1.0  # dummy; masked out below
        kern = (np.sin(B * delta) - np.sin(A * delta)) / delta
        kern[diag_mask] = 0.0
        return float((dr[:, None] * d3[None, :] * kern).sum())

    cross_parts = _map_blocks(run, range(0, m, _BLOCK))
    return diagonal + chunked_fsum(np.array(cross_parts))


def default_quad_samples(A: float, B: float, N: int) -> int:
    """Trapezoid grid size for 1e-6 relative accuracy against the closed form.

    The natural resolution scale is (B-A) N^(2/3) samples (one per phase
    rotation of the fastest term); trapezoid error is O(h^2), and 4 samples
    per rotation still leaves ~2e-5 relative error, so the default works at
    32 per rotation (~3e-7 measured).  Short intervals at small N get less
    period-to-period cancellation, hence the absolute floor.
    """
    return max(32 * math.ceil((B - A) * N ** (2.0 / 3.0)), 4096) + 1


def mean_square_quad(A: float, B: float, N: int, table: DivisorTable,
                     samples: int | None = None) -> tuple[float, np.ndarray, np.ndarray]:
    """Trapezoid int_A^B |S|^2 d alpha; returns (value, alphas, S values)."""
    if A >= B:
        raise DomainError("need A < B for the quadrature route")
    samples = samples or default_quad_samples(A, B, N)
    alphas = np.linspace(A, B, samples)
    svals = _exp_sum_grid(alphas, N, 2 * N, table)
    mag2 = np.abs(svals) ** 2
    value = float(np.trapezoid(mag2, alphas))
    return value, alphas, svals


def _golden_refine(fn, lo: float, hi: float, iters: int = 60) -> tuple[float, float]:
    """Golden-section minimization of fn on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = fn(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def theorem2_bound(N: int) -> float:
    """N^(2/3) log^(9/2) N, the small-value bound (implied constant 1)."""
    return N ** (2.0 / 3.0) * math.log(N) ** 4.5


class GoodPointNotFound(AssertionError):
    """Scan failed the mean-value bound; carries the scan for post-mortem."""

    def __init__(self, msg: str, scan_alphas: np.ndarray, scan_mags: np.ndarray):
        super().__init__(msg)
        self.scan_alphas = scan_alphas
        self.scan_mags = scan_mags


def find_good_point(A: float, B: float, N: int, table: DivisorTable) -> GoodPoint:
    """Locate a point C in [A, B] where |S(C,N)| is below the mean-value bound.

    Grid scan at spacing (B-A)/ceil(10 N^(2/3)) followed by golden-section
    refinement around the grid minimum.
    """
    if B - A < 0.1:
        raise DomainError("interval too short; need B - A >= 0.1")
    _check_range(N, 2 * N, table)
    cells = math.ceil(10 * N ** (2.0 / 3.0))
    alphas = np.linspace(A, B, cells + 1)
    svals = _exp_sum_grid(alphas, N, 2 * N, table)
    mags = np.abs(svals)
    i = int(np.argmin(mags))
    lo = alphas[max(0, i - 1)]
    hi = alphas[min(alphas.size - 1, i + 1)]

    def fn(alpha):
        return abs(exp_sum_d3(alpha, N, 2 * N, table))

    c, mag = _golden_refine(fn, lo, hi)
    if mags[i] < mag:
        c, mag = float(alphas[i]), float(mags[i])
    bound = theorem2_bound(N)
    if mag > bound:
        raise GoodPointNotFound(
            f"|S(C,N)| = {mag:.6e} above bound {bound:.6e} at N={N}",
            alphas, mags)
    return GoodPoint(C=float(c), magnitude=float(mag))


def scan_interval(A: float, B: float, N: int, table: DivisorTable,
                  locate: bool = True) -> ExpSumScan:
    """Driver producing the full scan record (N' fixed to 2N)."""
    ms_exact = mean_square_exact(A, B, N, table)
    ms_quad, alphas, svals = mean_square_quad(A, B, N, table)
    good = find_good_point(A, B, N, table) if locate else None
    log_n = math.log(N)
    return ExpSumScan(
        N=N, A=A, B=B,
        grid=np.column_stack([alphas, np.abs(svals)]),
        grid_values=svals,
        ms_exact=ms_exact, ms_quad=ms_quad,
        ratio=ms_exact / (N ** (4.0 / 3.0) * log_n ** 9),
        good_point=good,
    )


def write_scan_csv(path: Path, scan: ExpSumScan) -> None:
    fmt = "{:.17g}".format
    with open(path, "w") as fh:
        fh.write("alpha,S_re,S_im,abs_S\n")
        for alpha, s in zip(scan.grid[:, 0], scan.grid_values):
            fh.write(f"{fmt(alpha)},{fmt(s.real)},{fmt(s.imag)},{fmt(abs(s))}\n")


def scan_summary(scan: ExpSumScan) -> dict:
    return {
        "N": scan.N, "A": scan.A, "B": scan.B,
        "ms_exact": scan.ms_exact, "ms_quad": scan.ms_quad,
        "ratio": scan.ratio,
        "C": scan.good_point.C if scan.good_point else None,
        "abs_S_at_C": scan.good_point.magnitude if scan.good_point else None,
        "bound": theorem2_bound(scan.N),
    }


def write_scan_json(path: Path, scan: ExpSumScan) -> None:
    with open(path, "w") as fh:
        json.dump(scan_summary(scan), fh, indent=2)
        fh.write("\n")
