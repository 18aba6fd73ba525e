"""Norms, energy ledgers, difference metrics, and the tri-linear reporter.

All spectral norms are Parseval-exact over Omega = (0,l1) x (0,l2) x (-1,1).
"""

from dataclasses import dataclass, field

import numpy as np

from .constraints import (
    EVEN_IN_Z,
    ODD_IN_Z,
    VectorState,
    divergence_defect,
    hydrostatic_reconstruct,
    parity_defect,
)
from .spectral import SpectralField, l2_norm, partial_derivative, to_physical


def norm_l2(f: SpectralField) -> float:
    return l2_norm(f)


def grad_h_norm_sq(f: SpectralField) -> float:
    return l2_norm(partial_derivative(f, "x")) ** 2 + l2_norm(partial_derivative(f, "y")) ** 2


def dz_norm_sq(f: SpectralField) -> float:
    return l2_norm(partial_derivative(f, "z")) ** 2


def norm_h1(f: SpectralField) -> float:
    """H1 norm: ||f||^2 + sum over axes of ||df||^2."""
    s = l2_norm(f) ** 2
    for axis in ("x", "y", "z"):
        s += l2_norm(partial_derivative(f, axis)) ** 2
    return float(np.sqrt(s))


def gamma_of_alpha(alpha: float) -> float:
    """Convergence-rate exponent min{2, alpha - 2} for alpha > 2."""
    if alpha <= 2:
        raise ValueError(f"alpha must exceed 2, got {alpha}")
    return min(2.0, alpha - 2.0)


# ---------------------------------------------------------------------------
# energy ledger

@dataclass
class DiagnosticsRecord:
    t: float
    e_l2: float
    dissipation_accum: float
    h1_norms: dict = field(default_factory=dict)
    parity_defect: float = 0.0
    div_defect: float = 0.0


def shmhd_energy(a: VectorState, b: VectorState, eps: float) -> float:
    """E = ||A_h||^2 + ||B_h||^2 + eps^2 ||A3||^2 + eps^2 ||B3||^2."""
    return (
        l2_norm(a.h1) ** 2
        + l2_norm(a.h2) ** 2
        + l2_norm(b.h1) ** 2
        + l2_norm(b.h2) ** 2
        + eps**2 * (l2_norm(a.v) ** 2 + l2_norm(b.v) ** 2)
    )


def shmhd_dissipation_rate(a: VectorState, b: VectorState, eps: float, alpha: float) -> float:
    """Instantaneous integrand of the anisotropically weighted dissipation."""
    w = eps ** (alpha - 2.0)
    rate = 0.0
    for f in (a.h1, a.h2, b.h1, b.h2):
        rate += grad_h_norm_sq(f) + w * dz_norm_sq(f)
    for f in (a.v, b.v):
        rate += eps**2 * grad_h_norm_sq(f) + eps**alpha * dz_norm_sq(f)
    return rate


def pehm_energy(a_h, b_h) -> float:
    return sum(l2_norm(f) ** 2 for f in (*a_h, *b_h))


def pehm_dissipation_rate(a_h, b_h) -> float:
    return sum(grad_h_norm_sq(f) for f in (*a_h, *b_h))


@dataclass
class LedgerReport:
    lhs: list[float]
    rhs: float
    residuals: list[float]
    passed: bool


def energy_ledger(records: list[DiagnosticsRecord], slack: float = 1e-4) -> LedgerReport:
    """Check the discrete energy inequality E(t) + 2*int(dissipation) <= E(0).

    Verdict is PASS iff the left-hand side never exceeds the initial energy by
    more than the relative slack.
    """
    if not records:
        raise ValueError("empty trajectory")
    rhs = records[0].e_l2
    lhs = [r.e_l2 + 2.0 * r.dissipation_accum for r in records]
    residuals = [(v - rhs) / rhs if rhs > 0 else v - rhs for v in lhs]
    passed = all(v <= rhs * (1.0 + slack) + (0.0 if rhs > 0 else slack) for v in lhs)
    return LedgerReport(lhs, rhs, residuals, passed)


def trapezoid_accumulate(times, rates) -> list[float]:
    """Running trapezoid integral of sampled rates, for trajectories that do
    not carry solver-accumulated dissipation."""
    acc = [0.0]
    for i in range(1, len(times)):
        acc.append(acc[-1] + 0.5 * (times[i] - times[i - 1]) * (rates[i] + rates[i - 1]))
    return acc


# ---------------------------------------------------------------------------
# difference metrics (SHMHD state minus hydrostatically lifted PEHM state)

@dataclass
class DiffRecord:
    t: float
    d_l2: float
    d_diss_rate: float
    d_diss_accum: float
    d_h1: float


def difference_metrics(s_eps, s_lim, eps: float, alpha: float, d_diss_accum: float = 0.0) -> DiffRecord:
    """Weighted norms of the difference between an SHMHD state and a PEHM
    state with diagnosed vertical components: the vertical parts carry the
    eps weights of the energy functional."""
    if s_eps.a.grid is not s_lim.a_h[0].grid and s_eps.a.grid != s_lim.a_h[0].grid:
        raise ValueError("grid mismatch between states")
    if abs(s_eps.t - s_lim.t) > 1e-12 * max(1.0, abs(s_eps.t)):
        raise ValueError(f"time mismatch: {s_eps.t} vs {s_lim.t}")
    a3 = hydrostatic_reconstruct(s_lim.a_h)
    b3 = hydrostatic_reconstruct(s_lim.b_h)
    u1 = s_eps.a.h1 - s_lim.a_h[0]
    u2 = s_eps.a.h2 - s_lim.a_h[1]
    u3 = s_eps.a.v - a3
    v1 = s_eps.b.h1 - s_lim.b_h[0]
    v2 = s_eps.b.h2 - s_lim.b_h[1]
    v3 = s_eps.b.v - b3

    d_l2 = (
        l2_norm(u1) ** 2
        + l2_norm(u2) ** 2
        + l2_norm(v1) ** 2
        + l2_norm(v2) ** 2
        + eps**2 * (l2_norm(u3) ** 2 + l2_norm(v3) ** 2)
    )
    w = eps ** (alpha - 2.0)
    d_diss_rate = 0.0
    for f in (u1, u2, v1, v2):
        d_diss_rate += grad_h_norm_sq(f) + w * dz_norm_sq(f)
    for f in (u3, v3):
        d_diss_rate += eps**2 * grad_h_norm_sq(f) + eps**alpha * dz_norm_sq(f)
    d_h1 = (
        norm_h1(u1) ** 2
        + norm_h1(u2) ** 2
        + norm_h1(v1) ** 2
        + norm_h1(v2) ** 2
        + eps**2 * (norm_h1(u3) ** 2 + norm_h1(v3) ** 2)
    )
    return DiffRecord(s_eps.t, d_l2, d_diss_rate, d_diss_accum, d_h1)


# ---------------------------------------------------------------------------
# tri-linear reporter

@dataclass
class TrilinearReport:
    lhs: float
    rhs_a: float
    rhs_b: float
    implied_c: float


def _half_bracket(f: SpectralField) -> float:
    """||f||^(1/2) * (||f||^(1/2) + ||grad_H f||^(1/2))."""
    n = l2_norm(f)
    gh = float(np.sqrt(grad_h_norm_sq(f)))
    return np.sqrt(n) * (np.sqrt(n) + np.sqrt(gh))


def trilinear_check(f: SpectralField, g: SpectralField, h: SpectralField) -> TrilinearReport:
    """Evaluate both sides of the anisotropic tri-linear estimate without the
    unquantified constant; reports the constant the data implies.

    The left side is evaluated by collocation quadrature with the absolute
    values taken pointwise; no dealiasing is involved.
    """
    grid = f.grid
    fa = np.abs(to_physical(f))
    gh_prod = np.abs(to_physical(g) * to_physical(h))
    int_f = np.sum(fa, axis=2) * grid.dz
    int_gh = np.sum(gh_prod, axis=2) * grid.dz
    lhs = float(np.sum(int_f * int_gh) * grid.dx * grid.dy)
    rhs_a = _half_bracket(f) * l2_norm(h) * _half_bracket(g)
    rhs_b = l2_norm(f) * _half_bracket(g) * _half_bracket(h)
    denom = min(rhs_a, rhs_b)
    implied_c = lhs / denom if denom > 0 else 0.0
    return TrilinearReport(lhs, rhs_a, rhs_b, implied_c)


# ---------------------------------------------------------------------------
# per-state defect summaries

def shmhd_defects(a: VectorState, b: VectorState) -> tuple[float, float]:
    """Max parity defect and max divergence defect over both vector states."""
    par = max(
        parity_defect(a.h1, EVEN_IN_Z),
        parity_defect(a.h2, EVEN_IN_Z),
        parity_defect(a.v, ODD_IN_Z),
        parity_defect(b.h1, EVEN_IN_Z),
        parity_defect(b.h2, EVEN_IN_Z),
        parity_defect(b.v, ODD_IN_Z),
    )
    div = max(divergence_defect(a), divergence_defect(b))
    return par, div
