"""Deterministic compensated reductions used throughout the library.

All accumulation of oscillatory sums goes through these helpers so that
results are bit-stable across reruns and independent of how work is
chunked upstream.
"""

from __future__ import annotations

import math

import numpy as np

CHUNK = 4096


def chunked_fsum(values) -> float:
    """Exact-rounded sum of a real array via per-chunk fsum, fixed chunk tree.

    math.fsum is exactly rounded, so the result does not depend on the
    order of the elements; the fixed chunking just bounds memory.
    """
    a = np.asarray(values, dtype=float).ravel()
    if a.size <= CHUNK:
        return math.fsum(a.tolist())
    partials = [math.fsum(a[i:i + CHUNK].tolist()) for i in range(0, a.size, CHUNK)]
    return math.fsum(partials)


def chunked_csum(values) -> complex:
    """Deterministic compensated sum of a complex array."""
    a = np.asarray(values, dtype=complex).ravel()
    return complex(chunked_fsum(a.real), chunked_fsum(a.imag))


def averaged_tail(partial_sums: np.ndarray) -> complex:
    """Accelerate an alternating tail by iterated averaging of partial sums.

    Given consecutive partial sums S_j of a (near-)alternating series, each
    averaging pass halves the residual oscillation; the final scalar is the
    accelerated limit.  The number of passes is len(partial_sums) - 1.
    """
    ps = np.asarray(partial_sums, dtype=complex)
    while ps.size > 1:
        ps = 0.5 * (ps[:-1] + ps[1:])
    return complex(ps[0])
