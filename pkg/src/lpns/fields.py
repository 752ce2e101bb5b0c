"""Closed-form test fields and seeded random band-limited fields.

Random fields are drawn on a canonical grid set by the bandwidth alone and
then zero-padded, so a given ``(seed, stream, kmax)`` yields the same function
on every resolution that can hold it.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameterError
from .spectral import Field, Grid, Spectrum, conjugate_partner, inverse_transform, leray, resize_coefficients


def counter_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed on ``(seed, stream)``; platform independent."""
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def cosine_mode(grid: Grid, k, amplitude=1.0) -> Field:
    """``amplitude * cos(k . x)`` for an integer wavevector (or axis-1 wavenumber)."""
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    if k.size == 1 and grid.dim > 1:
        k = np.concatenate([k, np.zeros(grid.dim - 1)])
    phase = sum(ki * xi for ki, xi in zip(k, grid.coordinates()))
    return Field(grid, amplitude * np.cos(phase))


def taylor_green_vorticity(grid: Grid, t=0.0) -> Field:
    """``-2 cos x cos y exp(-2t)``: an exact decaying solution in 2D."""
    if grid.dim != 2:
        raise InvalidParameterError("Taylor-Green vortex is two-dimensional")
    x, y = grid.coordinates()
    return Field(grid, -2.0 * np.cos(x) * np.cos(y) * math.exp(-2.0 * t))


def taylor_green_velocity(grid: Grid, t=0.0) -> Field:
    if grid.dim != 2:
        raise InvalidParameterError("Taylor-Green vortex is two-dimensional")
    x, y = grid.coordinates()
    decay = math.exp(-2.0 * t)
    return Field(grid, np.stack((np.cos(x) * np.sin(y), -np.sin(x) * np.cos(y))) * decay)


def canonical_size(kmax: int) -> int:
    """Smallest admissible grid size whose Nyquist strictly exceeds ``kmax``."""
    m = 8
    while m // 2 <= kmax:
        m *= 2
    return m


def random_spectrum(grid: Grid, seed: int, *, slope=2.0, kmax=None, components=1, stream=0, rms=None) -> Spectrum:
    """Gaussian coefficients with magnitude ``|k|^-slope`` on ``0 < |k| <= kmax``.

    Hermitian-symmetrized and mean-free. ``rms`` rescales so that
    ``||f||_2 / (2 pi)^(n/2)`` equals it.
    """
    if kmax is None:
        kmax = grid.n // 4
    kmax = int(kmax)
    if kmax < 1:
        raise InvalidParameterError(f"kmax must be >= 1, got {kmax}")
    m = canonical_size(kmax)
    if m > grid.n:
        raise InvalidParameterError(f"kmax={kmax} needs at least N={m}, grid has N={grid.n}")
    base = Grid(grid.dim, m)
    rng = counter_rng(seed, stream)
    draw = rng.standard_normal((2, components) + base.shape)
    coeffs = draw[0] + 1j * draw[1]
    kn = base.k_norm
    weight = np.zeros_like(kn)
    band = (kn > 0) & (kn <= kmax)
    weight[band] = kn[band] ** (-float(slope))
    coeffs = coeffs * weight
    coeffs = 0.5 * (coeffs + conjugate_partner(coeffs, base))
    if rms is not None:
        energy = np.sum(np.abs(coeffs) ** 2)
        if energy > 0:
            coeffs *= rms / math.sqrt(energy)
    return Spectrum(grid, resize_coefficients(coeffs, base, grid.n))


def random_field(grid: Grid, seed: int, **kwargs) -> Field:
    return inverse_transform(random_spectrum(grid, seed, **kwargs))


def random_solenoidal(grid: Grid, seed: int, *, slope=2.0, kmax=None, rms=1.0, stream=0) -> Spectrum:
    """Divergence-free random velocity spectrum (Leray projection of a Gaussian field)."""
    if grid.dim < 2:
        raise InvalidParameterError("solenoidal fields need dim >= 2")
    raw = random_spectrum(grid, seed, slope=slope, kmax=kmax, components=grid.dim, stream=stream)
    u = leray(raw)
    energy = float(np.sum(np.abs(u.coeffs) ** 2))
    if energy > 0 and rms is not None:
        u = u * (rms / math.sqrt(energy))
    return u
