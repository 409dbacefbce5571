"""Sieved divisor functions d(n), d3(n), the shifted coefficient h(n,U),
and exact prefix sums of d3^2, with a binary on-disk cache.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, TableBoundError

MAX_SIEVE_BOUND = 10 ** 8
CACHE_MAGIC = b"D3SIEVE1"


@dataclass
class DivisorTable:
    """Immutable sieve output; index n lives at position n (entry 0 unused)."""
    bound: int
    d: np.ndarray          # int32, d[n] = number of divisors
    d3: np.ndarray         # int32, ternary divisor function
    d3sq_prefix: np.ndarray  # int64, sum_{m<=n} d3(m)^2
    _spf: np.ndarray | None = field(default=None, repr=False)

    @property
    def spf(self) -> np.ndarray:
        """Smallest prime factor table, built lazily (not serialized)."""
        if self._spf is None:
            self._spf = _sieve_spf(self.bound)
        return self._spf


def _sieve_spf(bound: int) -> np.ndarray:
    spf = np.zeros(bound + 1, dtype=np.int32)
    spf[1:] = np.arange(1, bound + 1)
    for p in range(2, int(bound ** 0.5) + 1):
        if spf[p] == p:  # p prime
            sl = spf[p * p::p]
            np.minimum(sl, p, out=sl)
    return spf


def build_divisor_table(bound: int) -> DivisorTable:
    """Exact d and d3 up to bound by Dirichlet-convolution sieving.

    d = 1*1 and d3 = d*1; both loops touch N/i cells for each i, so the
    total work is O(N log N).
    """
    if not 1 <= bound <= MAX_SIEVE_BOUND:
        raise DomainError(f"sieve bound must lie in [1, {MAX_SIEVE_BOUND}]")
    d = np.zeros(bound + 1, dtype=np.int32)
    for i in range(1, bound + 1):
        d[i::i] += 1
    d3 = np.zeros(bound + 1, dtype=np.int32)
    for i in range(1, bound + 1):
        d3[i::i] += d[1:bound // i + 1]
    d3sq = d3.astype(np.int64) ** 2
    d3sq[0] = 0
    prefix = np.cumsum(d3sq)
    return DivisorTable(bound=bound, d=d, d3=d3, d3sq_prefix=prefix)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def d3_bruteforce(n: int) -> int:
    """Count ordered triples (k, l, m) with k*l*m = n; test oracle only."""
    if not 1 <= n <= 10 ** 6:
        raise DomainError("brute-force d3 limited to n <= 10^6")
    count = 0
    for k in _divisors(n):
        for _l in _divisors(n // k):
            count += 1  # m = (n//k)//l is determined
    return count


@dataclass(frozen=True)
class ShiftedCoefficient:
    n: int
    U: float
    value: complex


def _factorize(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    out = []
    while n > 1:
        p = int(spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        out.append((p, a))
    return out


def h_shift(n: int, U: float, table: DivisorTable) -> ShiftedCoefficient:
    """h(n,U) = n^{-iU} sum_{delta | n} d(delta) delta^{iU}.

    The divisor sum is multiplicative with Euler factor
    sum_{j<=a} (j+1) p^{ijU} at p^a, so it is assembled from the
    smallest-prime-factor decomposition rather than by divisor enumeration.
    """
    if not 1 <= n <= table.bound:
        raise TableBoundError(f"n={n} exceeds table bound {table.bound}")
    acc = 1.0 + 0.0j
    for p, a in _factorize(int(n), table.spf):
        w = np.exp(1j * U * np.log(p))
        factor = 0.0j
        pw = 1.0 + 0.0j
        for j in range(a + 1):
            factor += (j + 1) * pw
            pw *= w
        acc *= factor
    value = complex(np.exp(-1j * U * np.log(n)) * acc)
    return ShiftedCoefficient(n=int(n), U=float(U), value=value)


def h_shift_array(n_lo: int, n_hi: int, U: float, table: DivisorTable) -> np.ndarray:
    """h(n,U) for all n in [n_lo, n_hi], as a complex array."""
    if not 1 <= n_lo <= n_hi <= table.bound:
        raise TableBoundError(
            f"range [{n_lo}, {n_hi}] exceeds table bound {table.bound}")
    if U == 0.0:
        return table.d3[n_lo:n_hi + 1].astype(complex)
    return np.array([h_shift(n, U, table).value for n in range(n_lo, n_hi + 1)])


def sum_d3_squared(x: int, table: DivisorTable) -> int:
    """Exact sum_{n<=x} d3(n)^2 from the prefix array."""
    if not 1 <= x <= table.bound:
        raise TableBoundError(f"x={x} exceeds table bound {table.bound}")
    return int(table.d3sq_prefix[x])


def d3sq_ratio(x: int, table: DivisorTable) -> float:
    """Diagnostic sum_{n<=x} d3(n)^2 / (x log^8 x), trending to a constant."""
    if x < 2:
        raise DomainError("ratio diagnostic needs x >= 2")
    return sum_d3_squared(x, table) / (x * np.log(x) ** 8)


# ----------------------------------------------------------------------------
# binary cache
# ----------------------------------------------------------------------------

def cache_dir() -> Path:
    return Path(os.environ.get("HARDY_CACHE_DIR", "./cache"))


def cache_path(bound: int) -> Path:
    return cache_dir() / f"d3sieve_{bound}.bin"


def save_table(table: DivisorTable, path: Path | None = None) -> Path:
    path = path or cache_path(table.bound)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", table.bound))
        fh.write(table.d.astype("<i4").tobytes())
        fh.write(table.d3.astype("<i4").tobytes())
        fh.write(table.d3sq_prefix.astype("<i8").tobytes())
    return path


def load_table(path: Path) -> DivisorTable:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CACHE_MAGIC:
            raise DomainError(f"bad sieve cache magic {magic!r} in {path}")
        (bound,) = struct.unpack("<Q", fh.read(8))
        count = bound + 1
        d = np.frombuffer(fh.read(4 * count), dtype="<i4").astype(np.int32)
        d3 = np.frombuffer(fh.read(4 * count), dtype="<i4").astype(np.int32)
        prefix = np.frombuffer(fh.read(8 * count), dtype="<i8").astype(np.int64)
    return DivisorTable(bound=int(bound), d=d, d3=d3, d3sq_prefix=prefix)


def get_table(bound: int, use_cache: bool = True) -> DivisorTable:
    """Load a cached table covering bound, or sieve and cache a fresh one."""
    if use_cache:
        path = cache_path(bound)
        if path.exists():
            return load_table(path)
    table = build_divisor_table(bound)
    if use_cache:
        try:
            save_table(table)
        except OSError:
            pass  # cache is best-effort
    return table
