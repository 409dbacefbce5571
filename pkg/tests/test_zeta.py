import math

import mpmath as mp
import numpy as np
import pytest

from hardy_moments.errors import DomainError
from hardy_moments.zeta import (ZMethod, chi_factor, hardy_z, theta_phase,
                                z_oracle_array, z_riemann_siegel_array,
                                zeta_half_oracle, zeta_strip_oracle)

# frozen reference: zeta(1/2) from the independent mpmath implementation
ZETA_HALF = -1.4603545088095868


def test_oracle_at_zero():
    assert abs(zeta_half_oracle(0.0) - ZETA_HALF) < 1e-10


@pytest.mark.parametrize("t", [1.0, 14.0, 100.0, 1000.0])
def test_oracle_vs_mpmath(t):
    # mpmath's zeta is an independent implementation (Euler-Maclaurin based)
    with mp.workdps(30):
        ref = complex(mp.zeta(mp.mpc(0.5, t)))
    assert abs(zeta_half_oracle(t) - ref) < 1e-9
    assert abs(zeta_half_oracle(t, digits=20) - ref) < 1e-15 * (1 + abs(ref))


def test_oracle_conjugate_symmetry():
    s = 0.5 + 37.25j
    assert abs(zeta_strip_oracle(s.conjugate())
               - zeta_strip_oracle(s).conjugate()) < 1e-12


def test_oracle_domain_errors():
    with pytest.raises(DomainError):
        zeta_half_oracle(10.0, digits=5)
    with pytest.raises(DomainError):
        zeta_half_oracle(10.0, digits=40)
    with pytest.raises(DomainError):
        zeta_half_oracle(float("nan"))
    with pytest.raises(DomainError):
        zeta_strip_oracle(1.5 + 2j)


def test_chi_fixed_point():
    assert abs(chi_factor(0.5).value - 1.0) < 1e-12


def test_chi_unimodular_on_critical_line():
    for t in (50.0, 1000.0, 1e5):
        assert abs(chi_factor(0.5 + 1j * t).modulus - 1.0) <= 1e-12


def test_chi_functional_equation_off_line():
    s = 0.3 + 500j
    lhs = zeta_strip_oracle(s)
    rhs = chi_factor(s).value * zeta_strip_oracle(1 - s)
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


def test_chi_vs_mpmath_generic():
    for s in (0.3 + 10j, 0.7 + 25j, 0.5 + 3j):
        with mp.workdps(30):
            ref = complex(2 ** mp.mpc(s) * mp.pi ** (mp.mpc(s) - 1)
                          * mp.sin(mp.pi * mp.mpc(s) / 2) * mp.gamma(1 - mp.mpc(s)))
        assert abs(chi_factor(s).value - ref) < 1e-10 * abs(ref)


def test_chi_poles_and_zeros():
    for s in (1.0, 3.0, 5.0):
        with pytest.raises(DomainError):
            chi_factor(s)
    with pytest.raises(DomainError):
        chi_factor(-2.0)
    with pytest.raises(DomainError):
        chi_factor(complex("inf"))


def test_chi_argument_continuity():
    # argument along increasing t never jumps by ~2 pi between close samples
    ts = np.linspace(1.0, 200.0, 4001)
    args = np.array([chi_factor(0.5 + 1j * t).argument for t in ts])
    assert np.max(np.abs(np.diff(args))) < 1.0


def test_theta_anchor():
    # theta(0) = 0 anchors chi(1/2) = 1
    assert abs(theta_phase(0.0)) < 1e-14


def test_z_evenness():
    for t in (100.0, 1000.0):
        assert abs(hardy_z(t).z - hardy_z(-t).z) <= 1e-9


def test_z_first_zero():
    assert abs(hardy_z(14.134725141, ZMethod.ORACLE).z) <= 1e-5


def test_z_rs_requires_height():
    with pytest.raises(DomainError):
        hardy_z(30.0, ZMethod.RIEMANN_SIEGEL)


def test_z_rs_vs_oracle_grid():
    ts = np.geomspace(100.0, 3e4, 120)
    dev = np.abs(z_riemann_siegel_array(ts) - z_oracle_array(ts))
    assert float(dev.max()) <= 1e-6


def test_z_est_error_fields():
    rs = hardy_z(5000.0)
    assert rs.est_error <= 1.0 * 5000.0 ** -0.75 + 1e-15
    orc = hardy_z(75.0, "oracle")
    assert orc.method is ZMethod.ORACLE
    assert orc.est_error > 0


def test_z_magnitude_matches_zeta():
    t = 250.0
    assert abs(abs(hardy_z(t, "oracle").z)
               - abs(zeta_half_oracle(t))) < 1e-9
