import json
import math

import numpy as np
import pytest

from hardy_moments.divisors import build_divisor_table
from hardy_moments.errors import DomainError, TableBoundError
from hardy_moments.expsum import (default_quad_samples, exp_sum_d3,
                                  exp_sum_plain, find_good_point,
                                  mean_square_exact, mean_square_quad,
                                  scan_interval, theorem2_bound,
                                  write_scan_csv, write_scan_json)


@pytest.fixture(scope="module")
def table():
    return build_divisor_table(4000)


def test_zero_phase_matches_prefix(table):
    N = 50
    s = exp_sum_d3(0.0, N, 2 * N, table)
    expect = int(table.d3[N + 1:2 * N + 1].sum())
    assert s == pytest.approx(expect)
    assert abs(s.imag) < 1e-12


def test_two_term_hand_expansion(table):
    for alpha in (0.3, 3.0 * math.pi):
        s = exp_sum_d3(alpha, 2, 4, table)
        expect = (3 * np.exp(1j * alpha * 3 ** (2 / 3))
                  + 6 * np.exp(1j * alpha * 4 ** (2 / 3)))
        assert abs(s - expect) < 1e-12


def test_triangle_inequality(table):
    N = 100
    cap = int(table.d3[N + 1:2 * N + 1].sum())
    for alpha in (0.5, 3.0 * math.pi):
        assert abs(exp_sum_d3(alpha, N, 2 * N, table)) <= cap + 1e-9


def test_plain_sum(table):
    assert exp_sum_plain(0.0, 10, 20).value == pytest.approx(10.0)
    a = exp_sum_plain(2.5, 10, 20)
    b = exp_sum_plain(-2.5, 10, 20)
    assert abs(a.value - b.value.conjugate()) < 1e-14
    assert a.bound_ratio == pytest.approx(abs(a.value) * 2.5 / 10 ** (1 / 3))


def test_range_guards(table):
    with pytest.raises(DomainError):
        exp_sum_d3(1.0, 10, 25, table)  # N' > 2N
    with pytest.raises(DomainError):
        exp_sum_d3(1.0, 10, 10, table)
    with pytest.raises(TableBoundError):
        exp_sum_d3(1.0, 3000, 6000, table)
    with pytest.raises(DomainError):
        mean_square_exact(4.0, 1.0, 100, table)
    with pytest.raises(DomainError):
        mean_square_exact(1.0, 4.0, 10 ** 6, table)


def test_mean_square_single_term(table):
    # N=1: the window (1, 2] contains only n=2, so no cross terms survive
    ms = mean_square_exact(1.0, 4.0, 1, table)
    assert ms == pytest.approx(3.0 * table.d3[2] ** 2)


def test_mean_square_degenerate_interval(table):
    assert mean_square_exact(2.0, 2.0, 100, table) == 0.0


def test_mean_square_exact_vs_quadrature(table):
    ms = mean_square_exact(1.0, 4.0, 100, table)
    msq, alphas, svals = mean_square_quad(1.0, 4.0, 100, table)
    assert abs(ms - msq) <= 1e-6 * ms
    # stored grid reproduces ms_quad exactly (same samples)
    again = float(np.trapezoid(np.abs(svals) ** 2, alphas))
    assert again == msq


def test_mean_square_brute_force():
    # direct dense numerical integral as an independent oracle at tiny N
    table = build_divisor_table(20)
    N, A, B = 5, 0.5, 2.5
    ms = mean_square_exact(A, B, N, table)
    alphas = np.linspace(A, B, 200001)
    svals = np.array([exp_sum_d3(a, N, 2 * N, table) for a in alphas[::400]])
    coarse = np.trapezoid(np.abs(svals) ** 2, alphas[::400])
    assert abs(ms - coarse) < 1e-3 * ms


def test_good_point(table):
    gp = find_good_point(1.0, 4.0, 100, table)
    assert 1.0 <= gp.C <= 4.0
    assert gp.magnitude <= theorem2_bound(100)
    # a minimum never exceeds the interval mean
    ms = mean_square_exact(1.0, 4.0, 100, table)
    assert gp.magnitude ** 2 <= ms / 3.0 + 1e-9
    with pytest.raises(DomainError):
        find_good_point(1.0, 1.05, 100, table)


def test_scan_outputs(tmp_path, table):
    scan = scan_interval(1.0, 1.5, 50, table)
    assert scan.ms_exact >= 0
    assert abs(scan.ms_exact - scan.ms_quad) <= 1e-6 * scan.ms_exact
    assert scan.grid.shape[0] == default_quad_samples(1.0, 1.5, 50)

    csv_path = tmp_path / "scan.csv"
    write_scan_csv(csv_path, scan)
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "alpha,S_re,S_im,abs_S"
    assert len(lines) == scan.grid.shape[0] + 1

    json_path = tmp_path / "scan.json"
    write_scan_json(json_path, scan)
    summary = json.loads(json_path.read_text())
    assert set(summary) == {"N", "A", "B", "ms_exact", "ms_quad", "ratio",
                            "C", "abs_S_at_C", "bound"}
    assert summary["abs_S_at_C"] <= summary["bound"]


def test_threaded_matches_serial(table, monkeypatch):
    ms_par = mean_square_exact(1.0, 4.0, 400, table)
    monkeypatch.setenv("HARDY_THREADS", "1")
    ms_ser = mean_square_exact(1.0, 4.0, 400, table)
    assert ms_par == ms_ser
