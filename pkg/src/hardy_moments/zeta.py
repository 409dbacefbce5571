"""Critical-line zeta machinery: chi factor, Hardy Z, and the eta-series oracle.

Two independent evaluation routes are provided for Z(t):

* a fast Riemann-Siegel path (main sum of length floor(sqrt(t/2pi)) plus five
  correction terms), valid for t >= 50 and vectorized over arrays of t;
* a slow oracle based on the alternating eta series with an iterated-averaging
  tail, valid for any t >= 0 and for general s in the strip Re s > 0.

The two routes share no code beyond the theta phase, so cross-validating them
is a genuine two-method check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath as mp
import numpy as np
from scipy.special import loggamma

from .errors import DomainError
from .summation import averaged_tail, chunked_csum

TWO_PI = 2.0 * math.pi

# Taylor coefficients (even orders 0,2,...,62) about p = 1/2 of
#   Psi(p) = cos(2*pi*(p^2 - p - 1/16)) / cos(2*pi*p),
# the entire function giving the leading Riemann-Siegel remainder.  Psi is
# symmetric about 1/2, so odd coefficients vanish.  Values were obtained once
# from a 50-digit Cauchy integral (tools/gen_psi_coeffs.py) and are exact to
# the last printed digit.
_PSI_EVEN = [
    +3.82683432365089782e-01, +1.74896187231008171e+00, +2.11802520768549618e+00,
    -8.70721667051148063e-01, -3.47331122434651673e+00, -1.66269473089993247e+00,
    +1.21673128891923210e+00, +1.30143041610079768e+00, +3.05110218273616715e-02,
    -3.75580305154509519e-01, -1.08578441656406594e-01, +5.18329029995496238e-02,
    +2.99994806199022773e-02, -2.27593967061256444e-03, -4.38264741658033873e-03,
    -4.06423018372984715e-04, +4.00609778542211398e-04, +8.97105799138884146e-05,
    -2.30256500272391078e-05, -9.38000660190679249e-06, +6.32351494760910754e-07,
    +6.55102281923150186e-07, +2.21052374555269715e-08, -3.32231617644562884e-08,
    -3.73491098993365592e-09, +1.24450670607977384e-09, +2.47682053765021900e-10,
    -3.28427281689162695e-11, -1.13054068522984043e-11, +4.56546397958869386e-13,
    +3.95984809452492136e-13, +7.84956622125961696e-15,
]


def _psi_derivative_coeffs() -> list[np.ndarray]:
    full = np.zeros(64)
    full[0::2] = _PSI_EVEN
    out = [full]
    for _ in range(12):
        prev = out[-1]
        out.append(prev[1:] * np.arange(1, prev.size))
    return out


_PSI_D = _psi_derivative_coeffs()


def _psi(order: int, p):
    """order-th derivative of Psi at p, via the frozen Taylor series."""
    return np.polyval(_PSI_D[order][::-1], np.asarray(p) - 0.5)


_PI2 = math.pi ** 2


def _rs_correction_terms(p):
    """C0..C4 of the Riemann-Siegel remainder expansion at fractional part p."""
    c0 = _psi(0, p)
    c1 = -_psi(3, p) / (96 * _PI2)
    c2 = _psi(2, p) / (64 * _PI2) + _psi(6, p) / (18432 * _PI2 ** 2)
    c3 = (-_psi(1, p) / (64 * _PI2) - _psi(5, p) / (3840 * _PI2 ** 2)
          - _psi(9, p) / (5308416 * _PI2 ** 3))
    c4 = (_psi(0, p) / (128 * _PI2) + 19 * _psi(4, p) / (24576 * _PI2 ** 2)
          + 11 * _psi(8, p) / (5898240 * _PI2 ** 3)
          + _psi(12, p) / (2038431744 * _PI2 ** 4))
    return c0, c1, c2, c3, c4


# ----------------------------------------------------------------------------
# chi factor and theta phase
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ChiDecomposition:
    """chi(s) split into modulus, continuous argument, and complex value."""
    modulus: float
    argument: float
    value: complex


def theta_phase(t):
    """Riemann-Siegel theta: continuous argument of chi(1/2+it)^(-1/2).

    Exact for all t via the complex log-gamma, so Z(t) = e^{i theta} zeta(1/2+it)
    is real with the branch anchored at chi(1/2) = 1.
    """
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def _log_sin_half_pi_s(s: complex) -> complex:
    """log sin(pi*s/2), stable for large |Im s|, continuous in t at fixed sigma."""
    z = 0.5 * math.pi * s
    if z.imag >= 0:
        # sin z = (i/2) e^{-iz} (1 - e^{2iz}); |e^{2iz}| < 1 for Im z > 0 and
        # Re(1 - e^{2iz}) >= 0 always, so the principal log below never jumps.
        return -1j * z + np.log1p(-np.exp(2j * z)) - math.log(2) + 0.5j * math.pi
    return np.conj(_log_sin_half_pi_s(np.conj(s)))


def chi_factor(s: complex) -> ChiDecomposition:
    """Functional-equation factor chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s).

    Evaluated in log space so the modulus never overflows and the argument is
    continuous along any path of increasing t at fixed sigma.
    """
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError(f"non-finite argument {s!r}")
    if s.imag == 0.0 and s.real == round(s.real):
        k = round(s.real)
        if k == 1 or (k >= 3 and k % 2 == 1):
            raise DomainError(f"chi has a pole at s = {k}")
        if k <= 0 and k % 2 == 0:
            raise DomainError(f"chi vanishes at s = {k}; no log decomposition")
    if s.real == 0.5:
        # on the critical line |chi| = 1 exactly and arg chi = -2 theta(t);
        # the generic log-space route would lose ~t*log(t)*eps of modulus
        # accuracy to cancellation, so use the identity directly
        arg = -2.0 * float(theta_phase(s.imag))
        return ChiDecomposition(modulus=1.0, argument=arg,
                                value=complex(np.exp(1j * arg)))
    log_chi = (s * math.log(2) + (s - 1) * math.log(math.pi)
               + _log_sin_half_pi_s(s) + loggamma(1 - s))
    return ChiDecomposition(
        modulus=float(np.exp(log_chi.real)),
        argument=float(log_chi.imag),
        value=complex(np.exp(log_chi)),
    )


# ----------------------------------------------------------------------------
# eta-series oracle
# ----------------------------------------------------------------------------

_AVG_PASSES = 48
_DIRECT_MULT = 6


def _eta_zeta_f64(s: complex) -> complex:
    """zeta(s) for Re s > 0 by the eta series, double precision.

    Direct compensated summation to ~6|Im s| terms, where consecutive phases
    rotate slowly, then iterated averaging of the alternating tail.
    """
    t = abs(s.imag)
    n_direct = max(64, int(_DIRECT_MULT * t) + 64)
    n = np.arange(1, n_direct + _AVG_PASSES + 2)
    terms = np.exp(-s * np.log(n))
    terms[1::2] = -terms[1::2]
    head = chunked_csum(terms[:n_direct])
    tail_partials = head + np.cumsum(terms[n_direct:])
    eta = averaged_tail(tail_partials)
    return eta / (1.0 - np.exp((1.0 - s) * math.log(2)))


def _eta_zeta_mp(s: complex, digits: int) -> complex:
    """Arbitrary-precision variant of the same eta algorithm."""
    with mp.workdps(digits + 10):
        sm = mp.mpc(s)
        t = abs(s.imag)
        n_direct = max(64, int(_DIRECT_MULT * t) + 64)
        passes = max(_AVG_PASSES, int(2.0 * digits) + 8)
        acc = mp.mpc(0)
        for n in range(1, n_direct + 1):
            term = mp.power(n, -sm)
            acc += term if n % 2 == 1 else -term
        partials = []
        run = acc
        for n in range(n_direct + 1, n_direct + passes + 2):
            term = mp.power(n, -sm)
            run += term if n % 2 == 1 else -term
            partials.append(run)
        while len(partials) > 1:
            partials = [(a + b) / 2 for a, b in zip(partials, partials[1:])]
        eta = partials[0]
        val = eta / (1 - mp.power(2, 1 - sm))
        return complex(val)


def zeta_strip_oracle(s: complex, digits: int = 10) -> complex:
    """Oracle zeta(s) for Re s in (0, 1]; Schwarz reflection handles Im s < 0."""
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError(f"non-finite argument {s!r}")
    if not 0.0 < s.real <= 1.0:
        raise DomainError("strip oracle requires 0 < Re s <= 1")
    if s.imag < 0:
        return np.conj(zeta_strip_oracle(np.conj(s), digits))
    if digits <= 10:
        return _eta_zeta_f64(s)
    return _eta_zeta_mp(s, digits)


def zeta_half_oracle(t: float, digits: int = 10) -> complex:
    """zeta(1/2+it) to the requested significant digits, eta-series route."""
    if not math.isfinite(t):
        raise DomainError(f"non-finite t {t!r}")
    if not 10 <= digits <= 30:
        raise DomainError(f"digits must lie in [10, 30], got {digits}")
    if t < 0:
        raise DomainError("oracle is defined for t >= 0; use conjugation")
    return zeta_strip_oracle(0.5 + 1j * t, digits)


def _zeta_half_oracle_array(t: np.ndarray) -> np.ndarray:
    """Vectorized double-precision oracle for a batch of heights.

    Shares one n-grid sized for max(t); intended for modest heights (the
    quadrature head region) where that grid stays small.
    """
    t = np.asarray(t, dtype=float)
    tmax = float(t.max(initial=0.0))
    n_direct = max(64, int(_DIRECT_MULT * tmax) + 64)
    n = np.arange(1, n_direct + _AVG_PASSES + 2)
    log_n = np.log(n)
    s = 0.5 + 1j * t[:, None]
    terms = np.exp(-s * log_n[None, :]) / 1.0
    terms[:, 1::2] = -terms[:, 1::2]
    head = terms[:, :n_direct].sum(axis=1)
    ps = head[:, None] + np.cumsum(terms[:, n_direct:], axis=1)
    while ps.shape[1] > 1:
        ps = 0.5 * (ps[:, :-1] + ps[:, 1:])
    eta = ps[:, 0]
    return eta / (1.0 - np.exp((0.5 - 1j * t) * math.log(2)))


# ----------------------------------------------------------------------------
# Hardy Z
# ----------------------------------------------------------------------------

class ZMethod(Enum):
    RIEMANN_SIEGEL = "rs"
    ORACLE = "oracle"


@dataclass(frozen=True)
class ZEvaluation:
    t: float
    z: float
    method: ZMethod
    est_error: float


RS_MIN_T = 50.0
# Calibrated envelope for the Riemann-Siegel remainder scale; the realized
# error with five correction terms is orders of magnitude below this.
RS_EST_COEFF = 1.0


def z_riemann_siegel_array(t: np.ndarray, block: int = 4096) -> np.ndarray:
    """Vectorized Riemann-Siegel Z(t) for t >= RS_MIN_T."""
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    if flat.size and float(flat.min()) < RS_MIN_T:
        raise DomainError(f"Riemann-Siegel path requires t >= {RS_MIN_T}")
    out = np.empty_like(flat)
    for lo in range(0, flat.size, block):
        tb = flat[lo:lo + block]
        a = np.sqrt(tb / TWO_PI)
        big_n = np.floor(a).astype(np.int64)
        p = a - big_n
        nmax = int(big_n.max(initial=1))
        n = np.arange(1, nmax + 1)
        phases = theta_phase(tb)[:, None] - tb[:, None] * np.log(n)[None, :]
        terms = np.cos(phases) / np.sqrt(n)[None, :]
        terms[n[None, :] > big_n[:, None]] = 0.0
        main = 2.0 * terms.sum(axis=1)
        x = (tb / TWO_PI) ** -0.25
        c0, c1, c2, c3, c4 = _rs_correction_terms(p)
        corr = c0 + x**2 * (c1 + x**2 * (c2 + x**2 * (c3 + x**2 * c4)))
        sign = np.where(big_n % 2 == 1, 1.0, -1.0)
        out[lo:lo + block] = main + sign * x * corr
    return out.reshape(t.shape)


def z_oracle_array(t: np.ndarray, max_cells: int = 1 << 24) -> np.ndarray:
    """Vectorized oracle Z(t) (eta route), any t >= 0.

    The eta grid length scales with max(t), so heights are sorted and batched
    to keep each (points x grid) workspace under max_cells entries.
    """
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty_like(flat)
    order = np.argsort(flat)
    pos = 0
    while pos < order.size:
        end = pos + 1
        while end < order.size:
            grid = _DIRECT_MULT * flat[order[end]] + 64 + _AVG_PASSES
            if (end - pos + 1) * grid > max_cells:
                break
            end += 1
        idx = order[pos:end]
        zeta_vals = _zeta_half_oracle_array(flat[idx])
        out[idx] = np.real(np.exp(1j * theta_phase(flat[idx])) * zeta_vals)
        pos = end
    return out.reshape(t.shape)


def hardy_z(t: float, method: ZMethod | str = ZMethod.RIEMANN_SIEGEL) -> ZEvaluation:
    """Hardy's Z(t); even in t, real-valued, |Z(t)| = |zeta(1/2+it)|."""
    method = ZMethod(method)
    if not math.isfinite(t):
        raise DomainError(f"non-finite t {t!r}")
    ta = abs(float(t))
    if method is ZMethod.RIEMANN_SIEGEL:
        if ta < RS_MIN_T:
            raise DomainError(
                f"Riemann-Siegel path requires |t| >= {RS_MIN_T}; use the oracle")
        z = float(z_riemann_siegel_array(np.array([ta]))[0])
        return ZEvaluation(t=float(t), z=z, method=method,
                           est_error=RS_EST_COEFF * ta ** -0.75)
    zc = np.exp(1j * theta_phase(ta)) * zeta_half_oracle(ta, digits=10)
    leak = abs(zc.imag)
    if leak > 1e-10 * max(1.0, abs(zc.real)):
        raise DomainError(
            f"imaginary leakage {leak:.3e} in oracle Z({t}); branch inconsistency")
    return ZEvaluation(t=float(t), z=float(zc.real), method=method,
                       est_error=1e-10 * max(1.0, abs(zc.real)))
