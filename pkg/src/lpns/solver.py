"""Pseudo-spectral solver for the vorticity form of Navier-Stokes on T^2 and T^3.

    d_t w - Lap w + (u . grad) w - (w . grad) u = 0,   u = Biot-Savart(w)

Viscosity is 1. Pressure never appears because the velocity is recovered from
the vorticity. Diffusion is integrated exactly by an integrating factor and
the nonlinear term by classical RK4 (Lawson scheme). Products use the 2/3
rule: every mode with some ``|k_i| > N/3`` is zeroed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import spectral
from .errors import CFLError, InstabilityError, InvalidInputError, InvalidParameterError
from .fields import random_solenoidal, random_spectrum, taylor_green_vorticity
from .monitor import Monitor, MonitorSeries
from .spectral import Grid, Spectrum, cross, forward_transform

log = logging.getLogger(__name__)

INITIAL_CONDITIONS = ("taylor-green", "random", "zero", "file")
CFL_NUMBER = 0.5


@dataclass(frozen=True)
class RunConfig:
    dim: int = 2
    n: int = 64
    dt: float = 1e-3
    t_end: float = 1.0
    alpha: float = 0.5
    initial: str = "taylor-green"
    seed: int = 0
    slope: float = 2.0
    amplitude: float = 1.0
    init_file: Optional[str] = None
    sample_every: int = 1
    output_dir: Optional[str] = None

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise InvalidParameterError(f"the solver runs in 2 or 3 dimensions, got dim={self.dim}")
        Grid(self.dim, self.n)
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.dt > 0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt}")
        if not self.t_end > 0:
            raise InvalidParameterError(f"t_end must be positive, got {self.t_end}")
        if self.sample_every < 1:
            raise InvalidParameterError(f"sample_every must be >= 1, got {self.sample_every}")
        if self.initial not in INITIAL_CONDITIONS:
            raise InvalidParameterError(f"initial must be one of {INITIAL_CONDITIONS}, got {self.initial!r}")
        if self.initial == "taylor-green" and self.dim != 2:
            raise InvalidParameterError("the Taylor-Green initial condition is two-dimensional")
        if self.initial == "file" and not self.init_file:
            raise InvalidParameterError("initial='file' needs init_file")

    @property
    def grid(self):
        return Grid(self.dim, self.n)


@dataclass(frozen=True, eq=False)
class SolverState:
    t: float
    omega_hat: np.ndarray
    u_hat: np.ndarray
    grid: Grid

    @property
    def omega(self) -> Spectrum:
        return Spectrum(self.grid, self.omega_hat)

    @property
    def velocity(self) -> Spectrum:
        return Spectrum(self.grid, self.u_hat)

    def invariant_defects(self):
        """Relative size of div w (3D), div u and the k = 0 modes."""
        k = self.grid.wavevector
        zero = (slice(None),) + (0,) * self.grid.dim
        scale_w = float(np.max(np.abs(self.omega_hat))) or 1.0
        scale_u = float(np.max(np.abs(self.u_hat))) or 1.0
        out = {
            "div_u": float(np.max(np.abs(np.sum(k * self.u_hat, axis=0)))) / scale_u,
            "mean_omega": float(np.max(np.abs(self.omega_hat[zero]))) / scale_w,
            "mean_u": float(np.max(np.abs(self.u_hat[zero]))) / scale_u,
        }
        if self.grid.dim == 3:
            out["div_omega"] = float(np.max(np.abs(np.sum(k * self.omega_hat, axis=0)))) / scale_w
        return out


def _biot_savart_coeffs(omega_hat, grid: Grid):
    k = grid.wavevector_odd
    inv = grid.inv_k_squared
    if grid.dim == 2:
        w = omega_hat[0]
        return np.stack((1j * k[1] * w * inv, -1j * k[0] * w * inv))
    return 1j * cross(k, omega_hat) * inv


def biot_savart(omega: Spectrum) -> Spectrum:
    """Divergence-free velocity whose curl is ``omega``.

    2D (scalar vorticity ``d1 u2 - d2 u1``): ``u_k = i (k2, -k1) w_k / |k|^2``.
    3D: ``u_k = i k x w_k / |k|^2``, which also discards any gradient part of ``w``.
    """
    grid = omega.grid
    expected = 1 if grid.dim == 2 else 3
    if grid.dim not in (2, 3) or omega.components != expected:
        raise InvalidInputError(f"vorticity on a {grid.dim}D grid must have {expected} component(s)")
    scale = float(np.max(np.abs(omega.coeffs))) if omega.coeffs.size else 0.0
    if scale > 0 and float(np.max(np.abs(omega.mean))) > 1e-12 * scale:
        raise InvalidInputError("vorticity must have zero mean")
    return Spectrum(grid, _biot_savart_coeffs(omega.coeffs, grid))


class VorticitySolver:
    def __init__(self, grid: Grid):
        if grid.dim not in (2, 3):
            raise InvalidParameterError("the solver runs in 2 or 3 dimensions")
        self.grid = grid
        self.ncomp = 1 if grid.dim == 2 else 3
        self.mask = np.all(np.abs(grid.wavevector) <= grid.n // 3, axis=0)
        self._factors = {}

    # --- spatial operators ------------------------------------------------------

    def velocity(self, omega_hat):
        return _biot_savart_coeffs(omega_hat, self.grid)

    def _physical(self, coeffs):
        return spectral.real_ifft(coeffs, self.grid)

    def advection(self, omega_hat):
        """``(u . grad) w`` in spectral space, 2/3-rule truncated."""
        g = self.grid
        u = self._physical(self.velocity(omega_hat))
        grad_w = self._physical(spectral.gradient(Spectrum(g, omega_hat)).coeffs)
        grad_w = grad_w.reshape((self.ncomp, g.dim) + g.shape)
        adv = np.einsum("i...,ci...->c...", u, grad_w)
        return spectral.fft(adv, g) * self.mask

    def nonlinear(self, omega_hat):
        """``-(u . grad) w + (w . grad) u``, dealiased; 3D result re-projected to div-free."""
        g = self.grid
        if g.dim == 2:
            return -self.advection(omega_hat)
        u = self._physical(self.velocity(omega_hat))
        w = self._physical(omega_hat)
        # for div-free u and w: curl(u x w) = (w . grad) u - (u . grad) w
        uxw = spectral.fft(cross(u, w), g) * self.mask
        rhs = spectral.curl(Spectrum(g, uxw)).coeffs
        return spectral.leray(Spectrum(g, rhs)).coeffs

    def time_derivative(self, omega_hat):
        return -self.grid.k_squared * omega_hat + self.nonlinear(omega_hat)

    def max_velocity(self, omega_hat):
        u = self._physical(self.velocity(omega_hat))
        return float(np.max(np.sqrt(np.sum(u * u, axis=0))))

    def cfl_limit(self, omega_hat):
        umax = self.max_velocity(omega_hat)
        return math.inf if umax == 0.0 else CFL_NUMBER * self.grid.spacing / umax

    # --- time stepping ------------------------------------------------------------

    def _integrating_factors(self, dt):
        if dt not in self._factors:
            ksq = self.grid.k_squared
            self._factors[dt] = (np.exp(-ksq * dt), np.exp(-ksq * dt / 2.0))
        return self._factors[dt]

    def _clean(self, omega_hat):
        omega_hat = omega_hat * self.mask
        omega_hat[(slice(None),) + (0,) * self.grid.dim] = 0.0
        if self.grid.dim == 3:
            omega_hat = spectral.leray(Spectrum(self.grid, omega_hat)).coeffs
        return omega_hat

    def make_state(self, t, omega_hat):
        omega_hat = self._clean(np.array(omega_hat, dtype=np.complex128))
        return SolverState(t, omega_hat, self.velocity(omega_hat), self.grid)

    def step(self, state: SolverState, dt: float, t_new: Optional[float] = None) -> SolverState:
        """One integrating-factor RK4 step; diffusion ``exp(-|k|^2 dt)`` is exact."""
        e, e2 = self._integrating_factors(dt)
        w = state.omega_hat
        n1 = self.nonlinear(w)
        n2 = self.nonlinear(e2 * (w + 0.5 * dt * n1))
        n3 = self.nonlinear(e2 * w + 0.5 * dt * n2)
        n4 = self.nonlinear(e * w + dt * e2 * n3)
        w_new = e * w + dt / 6.0 * (e * n1 + 2.0 * e2 * (n2 + n3) + n4)
        if not np.all(np.isfinite(w_new)):
            raise InstabilityError(f"non-finite vorticity after t={state.t}", state.t)
        return self.make_state(state.t + dt if t_new is None else t_new, w_new)


# --- initial data and driver --------------------------------------------------------


def initial_vorticity(config: RunConfig) -> Spectrum:
    grid = config.grid
    if config.initial == "taylor-green":
        return forward_transform(taylor_green_vorticity(grid))
    if config.initial == "zero":
        ncomp = 1 if grid.dim == 2 else 3
        return Spectrum(grid, np.zeros((ncomp,) + grid.shape, dtype=np.complex128))
    if config.initial == "random":
        kmax = max(1, grid.n // 6)
        if grid.dim == 2:
            # velocity spectrum |k|^-slope  <=>  scalar vorticity spectrum |k|^(1-slope)
            w = random_spectrum(grid, config.seed, slope=config.slope - 1.0, kmax=kmax)
            u = biot_savart(w)
            scale = math.sqrt(float(np.sum(np.abs(u.coeffs) ** 2)))
            return w * (config.amplitude / scale) if scale > 0 else w
        u = random_solenoidal(grid, config.seed, slope=config.slope, kmax=kmax, rms=config.amplitude)
        return spectral.curl(u)
    from .io import read_field

    f = read_field(config.init_file)
    if f.grid != grid:
        raise InvalidInputError(f"initial field grid {f.grid} does not match the run grid {grid}")
    return forward_transform(f)


@dataclass
class RunResult:
    series: MonitorSeries
    state: SolverState
    termination: str
    steps: int
    initial: SolverState


def _sample(monitor: Monitor, solver: VorticitySolver, state: SolverState):
    w_dot = solver.time_derivative(state.omega_hat)
    u_dot = solver.velocity(w_dot)
    g = state.grid
    return monitor.sample(state.t, state.omega, state.velocity, Spectrum(g, w_dot), Spectrum(g, u_dot))


def run(config: RunConfig, monitor: Optional[Monitor] = None) -> RunResult:
    """Integrate to ``t_end``, sampling the monitor at t = 0, every ``sample_every`` steps and at the end.

    A CFL violation in the initial data raises :class:`CFLError`. Non-finite
    values or a CFL violation later stop the run early with termination
    reason ``'instability'`` or ``'cfl'`` and a truncated series.
    """
    grid = config.grid
    solver = VorticitySolver(grid)
    state = solver.make_state(0.0, initial_vorticity(config).coeffs)
    if config.dt > solver.cfl_limit(state.omega_hat):
        raise CFLError(f"dt={config.dt} exceeds the advective limit {solver.cfl_limit(state.omega_hat):.4g}")
    monitor = monitor or Monitor(grid, config.alpha)
    initial = state
    _sample(monitor, solver, state)

    n_steps = max(1, math.ceil(config.t_end / config.dt - 1e-9))
    termination = "completed"
    steps = 0
    for i in range(1, n_steps + 1):
        t_new = config.t_end if i == n_steps else i * config.dt
        h = config.dt if i < n_steps else config.t_end - state.t
        try:
            state = solver.step(state, h, t_new)
        except InstabilityError as exc:
            log.warning("stopping: %s", exc)
            termination = "instability"
            break
        steps = i
        if i % config.sample_every == 0 or i == n_steps:
            _sample(monitor, solver, state)
            if config.dt > solver.cfl_limit(state.omega_hat):
                log.warning("stopping: CFL limit violated at t=%s", state.t)
                termination = "cfl"
                break
    return RunResult(monitor.series, state, termination, steps, initial)
