"""Blow-up criterion functional and the a priori inequality chain along a trajectory.

Each sample records energy, enstrophy, the two negative-index Besov norms of
the vorticity and the criterion integrand

    b_low^(2/(2-alpha)) + b_high^(2/(1-alpha)),

with ``b_low = ||w||_{B^{-alpha}_{inf,inf}}`` and
``b_high = ||w||_{B^{-1-alpha}_{inf,inf}}``; ``M(t)`` is its trapezoidal time
integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .besov import as_spectrum, block_lebesgue_norms, lq_combine, weighted_terms
from .errors import InvalidInputError, InvalidParameterError
from .littlewood_paley import SMOOTH, Cutoff
from .spectral import Grid, Spectrum, inner_product, l2_norm_squared, weighted_l2_squared

COLUMNS = ("t", "energy", "enstrophy", "grad_enstrophy", "b_low", "b_high", "integrand", "M", "energy_residual")


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")


def integrand_from_norms(b_low, b_high, alpha):
    return b_low ** (2.0 / (2.0 - alpha)) + b_high ** (2.0 / (1.0 - alpha))


def criterion_integrand(omega, alpha, cutoff: Cutoff = SMOOTH):
    """``(b_low, b_high, integrand)`` for a vorticity field (the mean is ignored)."""
    _check_alpha(alpha)
    norms = block_lebesgue_norms(omega, math.inf, cutoff)
    b_low = lq_combine(weighted_terms(norms, -alpha), math.inf)
    b_high = lq_combine(weighted_terms(norms, -1.0 - alpha), math.inf)
    return b_low, b_high, integrand_from_norms(b_low, b_high, alpha)


@dataclass(frozen=True)
class MonitorRow:
    t: float
    energy: float = 0.0
    enstrophy: float = 0.0
    grad_enstrophy: float = 0.0
    b_low: float = 0.0
    b_high: float = 0.0
    integrand: float = 0.0
    M: float = 0.0
    energy_residual: float = 0.0

    def values(self):
        return tuple(getattr(self, c) for c in COLUMNS)


@dataclass
class MonitorSeries:
    alpha: float
    rows: list = field(default_factory=list)
    # per-row quantities kept in memory only (not part of series.csv)
    extras: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        if name in COLUMNS:
            return np.array([getattr(r, name) for r in self.rows])
        return np.array([e[name] for e in self.extras])


def accumulate(series: MonitorSeries, row: MonitorRow) -> MonitorSeries:
    """Append ``row`` with ``M`` advanced by the trapezoid rule from the previous sample."""
    if series.rows:
        prev = series.rows[-1]
        if not row.t > prev.t:
            raise InvalidInputError(f"sample times must increase strictly: {row.t} after {prev.t}")
        m = prev.M + 0.5 * (row.t - prev.t) * (prev.integrand + row.integrand)
    else:
        m = 0.0
    series.rows.append(replace(row, M=m))
    return series


class Monitor:
    """Turns solver snapshots into rows of a :class:`MonitorSeries`.

    The dissipation integral in the energy identity uses the trapezoid rule
    with the Hermite end correction ``h^2/12 (D'_a - D'_b)``, where ``D' =
    d/dt ||grad u||_2^2`` comes from the right-hand side at the sample.
    """

    def __init__(self, grid: Grid, alpha: float, cutoff: Cutoff = SMOOTH):
        _check_alpha(alpha)
        self.grid = grid
        self.alpha = alpha
        self.cutoff = cutoff
        self.series = MonitorSeries(alpha)
        self._dissipated = 0.0
        self._energy0 = None

    def sample(self, t, omega: Spectrum, velocity: Spectrum, omega_dot: Spectrum, velocity_dot: Spectrum):
        grid = self.grid
        ksq = grid.k_squared
        energy = l2_norm_squared(velocity)
        enstrophy = l2_norm_squared(omega)
        grad_enstrophy = weighted_l2_squared(omega, ksq)
        grad_u_sq = weighted_l2_squared(velocity, ksq)
        # d/dt ||grad u||^2 = 2 (grad u, grad u_t)
        d_grad_u_sq = 2.0 * inner_product(velocity, Spectrum(grid, velocity_dot.coeffs * ksq))
        b_low, b_high, integrand = criterion_integrand(omega, self.alpha, self.cutoff)

        if self.series.rows:
            prev_t = self.series.rows[-1].t
            prev = self.series.extras[-1]
            h = t - prev_t
            self._dissipated += 0.5 * h * (prev["grad_u_sq"] + grad_u_sq) + h * h / 12.0 * (
                prev["d_grad_u_sq"] - d_grad_u_sq
            )
        else:
            self._energy0 = energy
        balance = energy + 2.0 * self._dissipated - self._energy0
        residual = balance / self._energy0 if self._energy0 > 0 else balance

        row = MonitorRow(t, energy, enstrophy, grad_enstrophy, b_low, b_high, integrand, 0.0, residual)
        accumulate(self.series, row)
        self.series.extras.append(
            {
                "grad_u_sq": grad_u_sq,
                "d_grad_u_sq": d_grad_u_sq,
                # (w . grad u, w) after dealiasing; zero in 2D
                "stretching": inner_product(omega_dot, omega) + grad_enstrophy,
            }
        )
        return self.series.rows[-1]


# --- a priori bounds ---------------------------------------------------------------


@dataclass(frozen=True)
class GronwallReport:
    C: float
    bound_holds: bool
    unbounded: bool
    cz_max_rel_dev: float


def gronwall_check(series: MonitorSeries, omega0_l2: float, rtol=1e-12) -> GronwallReport:
    """Fit the smallest C with ``||grad u(t)||_2 <= ||w_0||_2 exp(C M(t))`` on every row.

    ``||grad u||_2`` is taken from the velocity spectrum and compared with
    ``||w||_2`` (equal for divergence-free mean-free fields).
    """
    if not series.rows:
        raise InvalidInputError("empty series")
    enst = np.sqrt(series.column("enstrophy"))
    grad_u = np.sqrt(series.column("grad_u_sq")) if series.extras else enst
    m = series.column("M")
    nz = enst > 0
    cz = float(np.max(np.abs(grad_u[nz] - enst[nz]) / enst[nz])) if np.any(nz) else 0.0

    c = 0.0
    unbounded = False
    for g, mt in zip(grad_u, m):
        if g <= omega0_l2 * (1.0 + rtol):
            continue
        if mt <= 0.0:
            unbounded = True
            continue
        c = max(c, math.log(g / omega0_l2) / mt)
    holds = not unbounded and bool(np.all(grad_u <= omega0_l2 * np.exp(c * m) * (1.0 + rtol) + 1e-300))
    return GronwallReport(c, holds, unbounded, cz)


@dataclass(frozen=True)
class EnstrophyReport:
    C: float
    lhs: np.ndarray
    rhs: np.ndarray
    flagged: tuple


def enstrophy_inequality_check(series: MonitorSeries, noise_rtol=1e-5) -> EnstrophyReport:
    """Smallest C with ``1/2 d/dt ||w||^2 + ||grad w||^2 <= C ||w||^2 * integrand`` rowwise.

    The time derivative is a second-order finite difference (centred inside,
    one-sided at the ends). LHS values below ``noise_rtol`` times the size of
    its two terms count as zero; rows with positive LHS but zero RHS are flagged.
    """
    if len(series) < 3:
        raise InvalidInputError("the enstrophy check needs at least 3 samples")
    t = series.column("t")
    e = series.column("enstrophy")
    g = series.column("grad_enstrophy")
    half_de = 0.5 * np.gradient(e, t, edge_order=2)
    lhs = half_de + g
    rhs = e * series.column("integrand")
    floor = noise_rtol * (np.abs(half_de) + np.abs(g))
    c = 0.0
    flagged = []
    for i, (a, b, tol) in enumerate(zip(lhs, rhs, floor)):
        if a <= tol:
            continue
        if b <= 0.0:
            flagged.append(i)
            continue
        c = max(c, a / b)
    return EnstrophyReport(c, lhs, rhs, tuple(flagged))


def closed_form_taylor_green_M(alpha, t):
    """Criterion integral for the Taylor-Green vortex, where ``b_low = b_high = 2 exp(-2t)``."""
    a = 2.0 / (2.0 - alpha)
    b = 2.0 / (1.0 - alpha)
    return 2.0**a * (1.0 - math.exp(-2.0 * a * t)) / (2.0 * a) + 2.0**b * (1.0 - math.exp(-2.0 * b * t)) / (2.0 * b)
