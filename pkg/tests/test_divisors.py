import math

import numpy as np
import pytest

from hardy_moments.divisors import (build_divisor_table, cache_path,
                                    d3_bruteforce, d3sq_ratio, get_table,
                                    h_shift, h_shift_array, load_table,
                                    save_table, sum_d3_squared)
from hardy_moments.errors import DomainError, TableBoundError


@pytest.fixture(scope="module")
def table():
    return build_divisor_table(10 ** 4)


def test_unit_values(table):
    assert table.d[1] == 1
    assert table.d3[1] == 1


def test_d3_primes(table):
    for p in (2, 3, 5, 7):
        assert table.d3[p] == 3


def test_d3_spot_values(table):
    assert table.d3[4] == 6
    assert table.d3[8] == 10
    assert table.d3[6] == 9
    assert table.d3[9] == 6


def test_sieve_vs_bruteforce(table):
    for n in range(1, 501):
        assert int(table.d3[n]) == d3_bruteforce(n)


def test_prefix_sum_371(table):
    assert sum_d3_squared(10, table) == 371
    assert np.all(np.diff(table.d3sq_prefix) >= 0)


def test_hyperbola_identity(table):
    # sum_{n<=x} d3(n) = sum_{k<=x} D(x//k) with D the divisor summatory
    x = 1000
    d_prefix = np.cumsum(table.d[:x + 1])
    lhs = int(table.d3[1:x + 1].sum())
    rhs = sum(int(d_prefix[x // k]) for k in range(1, x + 1))
    assert lhs == rhs


def test_h_unit(table):
    for U in (0.0, 1.0, 7.5):
        assert h_shift(1, U, table).value == 1.0


def test_h_reduces_to_d3(table):
    for n in range(1, 1001):
        assert abs(h_shift(n, 0.0, table).value - table.d3[n]) <= 1e-12


def test_h_two_term_expansion(table):
    for U in (0.4, 2.0, 9.0):
        expect = 2.0 + np.exp(-1j * U * math.log(2))
        assert abs(h_shift(2, U, table).value - expect) < 1e-13


def test_h_multiplicativity(table):
    for U in (0.0, 0.7, 3.2):
        for m, n in ((4, 9), (5, 12), (27, 32), (7, 121), (25, 33)):
            hm = h_shift(m, U, table).value
            hn = h_shift(n, U, table).value
            hmn = h_shift(m * n, U, table).value
            assert abs(hmn - hm * hn) <= 1e-10 * table.d3[m * n]


def test_h_triangle_bound(table):
    for U in (0.0, 1.0, 10.0):
        for n in range(1, 1001):
            assert abs(h_shift(n, U, table).value) <= table.d3[n] + 1e-12


def test_h_array_matches_scalar(table):
    vals = h_shift_array(10, 20, 1.3, table)
    for i, n in enumerate(range(10, 21)):
        assert abs(vals[i] - h_shift(n, 1.3, table).value) < 1e-14


def test_d3sq_ratio_positive(table):
    assert d3sq_ratio(10 ** 4, table) > 0


def test_bounds_errors(table):
    with pytest.raises(DomainError):
        build_divisor_table(0)
    with pytest.raises(TableBoundError):
        h_shift(10 ** 5, 0.0, table)
    with pytest.raises(TableBoundError):
        sum_d3_squared(10 ** 5, table)
    with pytest.raises(DomainError):
        d3_bruteforce(10 ** 7)


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("HARDY_CACHE_DIR", str(tmp_path))
    table = build_divisor_table(200)
    path = save_table(table)
    assert path == cache_path(200)
    loaded = load_table(path)
    assert loaded.bound == 200
    assert np.array_equal(loaded.d, table.d)
    assert np.array_equal(loaded.d3, table.d3)
    assert np.array_equal(loaded.d3sq_prefix, table.d3sq_prefix)


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "bogus.bin"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 64)
    with pytest.raises(DomainError):
        load_table(path)


def test_get_table_uses_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("HARDY_CACHE_DIR", str(tmp_path))
    t1 = get_table(150)
    assert cache_path(150).exists()
    t2 = get_table(150)
    assert np.array_equal(t1.d3, t2.d3)
