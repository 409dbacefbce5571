"""Oscillation-aware quadrature for moment integrals of Hardy's Z.

Panels are sized from the local zero spacing 2pi/log(t/2pi) so each
oscillation of Z receives at least points_per_oscillation sample points;
each run is repeated with halved panels and the difference of the two
levels serves as the error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import DomainError, ToleranceError
from .summation import chunked_fsum
from .zeta import RS_MIN_T, z_oracle_array, z_riemann_siegel_array

TWO_PI = 2.0 * math.pi
HEAD_END = 100.0
DESK_T_MIN = 100.0
DESK_T_MAX = 1e5
MAX_EXTRA_REFINEMENTS = 4


class PanelRule(Enum):
    GAUSS_LEGENDRE_16 = "gl16"
    ADAPTIVE_SIMPSON = "simpson"


class MomentKind(Enum):
    M1 = "m1"
    M2SHIFT = "m2shift"
    M3SHIFT = "m3shift"
    M3CONJ = "m3conj"
    M4 = "m4"


@dataclass(frozen=True)
class QuadratureSpec:
    a: float = 0.0
    b: float = 0.0
    points_per_oscillation: int = 12
    panel_rule: PanelRule = PanelRule.GAUSS_LEGENDRE_16
    abs_tol: float = 1e-6
    rel_tol: float = 1e-7

    def __post_init__(self):
        if self.a > self.b:
            raise DomainError("quadrature spec needs a <= b")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.points_per_oscillation < 8:
            raise DomainError("points_per_oscillation must be >= 8")


@dataclass(frozen=True)
class MomentResult:
    kind: MomentKind
    T: float
    U: float
    value: float
    est_error: float
    evaluations: int
    diagnostic: float | None = None


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_SIMPSON_PTS = 17  # composite Simpson points per panel


def _z_mixed(t: np.ndarray) -> np.ndarray:
    """Z on |t| with evenness; Riemann-Siegel above RS_MIN_T, oracle below."""
    ta = np.abs(np.asarray(t, dtype=float))
    out = np.empty_like(ta)
    hi = ta >= RS_MIN_T
    if hi.any():
        out[hi] = z_riemann_siegel_array(ta[hi])
    if (~hi).any():
        out[~hi] = z_oracle_array(ta[~hi])
    return out


class _Integrand:
    """Z-product integrand with an evaluation counter."""

    def __init__(self, kind: MomentKind, U: float, z_eval=_z_mixed):
        self.kind = kind
        self.U = U
        self.z_eval = z_eval
        self.evaluations = 0

    def __call__(self, t: np.ndarray) -> np.ndarray:
        z = self.z_eval(t)
        self.evaluations += t.size
        if self.kind is MomentKind.M1:
            return z
        if self.kind is MomentKind.M4:
            return z ** 4
        zs = self.z_eval(t + self.U)
        self.evaluations += t.size
        if self.kind is MomentKind.M2SHIFT:
            return z * zs
        if self.kind is MomentKind.M3SHIFT:
            return z * z * zs
        if self.kind is MomentKind.M3CONJ:
            return zs * zs * z
        raise DomainError(f"unknown moment kind {self.kind!r}")


def _oscillation_length(t: float) -> float:
    return TWO_PI / max(1.6, math.log(max(abs(t), 1.0) / TWO_PI))


def _build_edges(a: float, b: float, ppo: int, pts_per_panel: int) -> np.ndarray:
    edges = [a]
    t = a
    while t < b:
        width = pts_per_panel / ppo * _oscillation_length(t)
        t = min(b, t + width)
        edges.append(t)
    return np.array(edges)


def _halve(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(edges.size + mids.size)
    out[0::2] = edges
    out[1::2] = mids
    return out


def _panel_pass(edges: np.ndarray, rule: PanelRule, integrand: _Integrand) -> float:
    lo = edges[:-1]
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = lo + half
    if rule is PanelRule.GAUSS_LEGENDRE_16:
        nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :])
        vals = integrand(nodes.ravel()).reshape(nodes.shape)
        panel_ints = half * (vals @ _GL_WEIGHTS)
    else:
        # composite Simpson inside each panel
        m = _SIMPSON_PTS
        x = np.linspace(0.0, 1.0, m)
        nodes = lo[:, None] + (2.0 * half)[:, None] * x[None, :]
        vals = integrand(nodes.ravel()).reshape(nodes.shape)
        w = np.ones(m)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        h = (2.0 * half) / (m - 1)
        panel_ints = h / 3.0 * (vals @ w)
    return chunked_fsum(panel_ints)


def integrate_range(kind: MomentKind | str, a: float, b: float, U: float,
                    spec: QuadratureSpec | None = None,
                    z_eval=_z_mixed) -> MomentResult:
    """Integrate the kind's Z-product over [a, b] with panel refinement."""
    kind = MomentKind(kind)
    spec = spec or QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(U)):
        raise DomainError("non-finite integration parameters")
    if b <= a:
        return MomentResult(kind=kind, T=b, U=U, value=0.0, est_error=0.0,
                            evaluations=0)
    integrand = _Integrand(kind, U, z_eval=z_eval)
    pts = 16 if spec.panel_rule is PanelRule.GAUSS_LEGENDRE_16 else _SIMPSON_PTS
    edges = _build_edges(a, b, spec.points_per_oscillation, pts)
    prev = _panel_pass(edges, spec.panel_rule, integrand)
    for _ in range(1 + MAX_EXTRA_REFINEMENTS):
        edges = _halve(edges)
        cur = _panel_pass(edges, spec.panel_rule, integrand)
        est = abs(cur - prev)
        if est <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return MomentResult(kind=kind, T=b, U=U, value=cur, est_error=est,
                                evaluations=integrand.evaluations)
        prev = cur
    raise ToleranceError(
        f"{kind.value} over [{a}, {b}]: estimate {est:.3e} above tolerance "
        f"after {MAX_EXTRA_REFINEMENTS} extra refinements (value {cur:.6e})")


_head_cache: dict[tuple, tuple[float, float, int]] = {}


def _head_integral(kind: MomentKind, U: float, spec: QuadratureSpec):
    """Oracle-only integral over [0, HEAD_END], computed once per (kind, U)."""
    key = (kind, U, spec.points_per_oscillation, spec.panel_rule)
    if key not in _head_cache:
        res = integrate_range(kind, 0.0, HEAD_END, U, spec,
                              z_eval=lambda t: z_oracle_array(np.abs(t)))
        _head_cache[key] = (res.value, res.est_error, res.evaluations)
    return _head_cache[key]


def integrate_moment(kind: MomentKind | str, T: float, U: float = 0.0,
                     spec: QuadratureSpec | None = None) -> MomentResult:
    """Moment integral at height T: [T/2, T] for the cubic kinds, [0, T] else."""
    kind = MomentKind(kind)
    spec = spec or QuadratureSpec()
    if not DESK_T_MIN <= T <= DESK_T_MAX:
        raise DomainError(f"desk-scale T must lie in [{DESK_T_MIN}, {DESK_T_MAX}]")
    if not 0.0 <= U <= math.sqrt(T):
        raise DomainError("shift must satisfy 0 <= U <= sqrt(T)")
    if kind in (MomentKind.M3SHIFT, MomentKind.M3CONJ):
        res = integrate_range(kind, T / 2.0, T, U, spec)
        return replace(res, T=T)
    head_val, head_err, head_evals = _head_integral(kind, U, spec)
    main = integrate_range(kind, HEAD_END, T, U, spec)
    return MomentResult(kind=kind, T=T, U=U, value=head_val + main.value,
                        est_error=head_err + main.est_error,
                        evaluations=head_evals + main.evaluations)


def first_moment_diag(T: float, spec: QuadratureSpec | None = None) -> MomentResult:
    """First moment over [0, T] with the value/T^(1/4) diagnostic attached."""
    res = integrate_moment(MomentKind.M1, T, 0.0, spec)
    return replace(res, diagnostic=res.value / T ** 0.25)
