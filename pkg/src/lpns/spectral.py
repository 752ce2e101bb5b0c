"""Torus grids, Fourier transforms, quadrature norms and Fourier multipliers.

Fields live on the torus [0, 2*pi)^n sampled at ``N`` points per axis. The
coefficient convention is ``f(x) = sum_k c_k exp(i k.x)``, so ``c_k`` does
not depend on ``N`` and Parseval reads ``||f||_2^2 = (2 pi)^n sum_k |c_k|^2``.
(The continuum transform with the symmetric ``(2 pi)^(-n/2)`` factor differs
from these coefficients by the constant ``(2 pi)^(n/2)``.)

All array layouts carry a leading component axis: a scalar field on a 2D grid
has samples of shape ``(1, N, N)``, a 3D vector field ``(3, N, N, N)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np
import scipy.fft

from . import _backend
from .errors import InvalidInputError, InvalidParameterError, SymmetryError
from .parallel import threads

TWO_PI = 2.0 * math.pi
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, 2 pi)^dim with ``n`` points per axis."""

    dim: int
    n: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise InvalidParameterError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 8 or self.n & (self.n - 1):
            raise InvalidParameterError(f"points per axis must be a power of two >= 8, got {self.n}")

    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def axes(self):
        """Grid axes of a component-major array."""
        return tuple(range(1, self.dim + 1))

    @property
    def spacing(self):
        return TWO_PI / self.n

    @property
    def volume(self):
        return TWO_PI**self.dim

    @property
    def nyquist(self):
        return self.n // 2

    @cached_property
    def k_axis(self):
        """Integer wavenumbers along one axis in FFT order, Nyquist taken as +N/2."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        k[self.n // 2] = self.n // 2
        k.flags.writeable = False
        return k

    @cached_property
    def wavevector(self):
        """Array of shape ``(dim, *shape)`` holding k for every grid mode."""
        k = np.stack(np.meshgrid(*([self.k_axis] * self.dim), indexing="ij"))
        k.flags.writeable = False
        return k

    @cached_property
    def wavevector_odd(self):
        """Wavevector with the Nyquist plane zeroed, for odd symbols such as ``i k``."""
        k = np.array(self.wavevector)
        k[k == self.n // 2] = 0.0
        k.flags.writeable = False
        return k

    @cached_property
    def k_squared(self):
        ksq = np.sum(self.wavevector**2, axis=0)
        ksq.flags.writeable = False
        return ksq

    @cached_property
    def inv_k_squared(self):
        """``1/|k|^2`` with 0 at k = 0."""
        ksq = self.k_squared
        inv = np.zeros_like(ksq)
        inv[ksq > 0] = 1.0 / ksq[ksq > 0]
        inv.flags.writeable = False
        return inv

    @cached_property
    def k_norm(self):
        kn = np.sqrt(self.k_squared)
        kn.flags.writeable = False
        return kn

    @property
    def max_wavenumber(self):
        return math.sqrt(self.dim) * (self.n // 2)

    def coordinates(self):
        """Tuple of coordinate arrays ``x_1, ..., x_dim`` broadcast over the grid."""
        x = np.arange(self.n) * self.spacing
        return tuple(np.meshgrid(*([x] * self.dim), indexing="ij"))


def _as_component_array(grid, values, dtype):
    arr = np.asarray(values, dtype=dtype)
    if arr.shape == grid.shape:
        arr = arr[np.newaxis]
    if arr.ndim != grid.dim + 1 or arr.shape[1:] != grid.shape:
        raise InvalidInputError(f"array of shape {np.shape(values)} does not match grid shape {grid.shape}")
    arr = np.ascontiguousarray(arr)
    view = arr.view()
    view.flags.writeable = False
    return view


@dataclass(frozen=True, eq=False)
class Field:
    """Real samples of a scalar or vector field, shape ``(components, *grid.shape)``."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        arr = _as_component_array(self.grid, self.samples, np.float64)
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("field samples must be finite")
        object.__setattr__(self, "samples", arr)

    @property
    def components(self):
        return self.samples.shape[0]

    def __add__(self, other):
        _check_same_grid(self, other)
        return Field(self.grid, self.samples + other.samples)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return Field(self.grid, self.samples - other.samples)

    def __mul__(self, scalar):
        return Field(self.grid, self.samples * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.samples)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients ``c_k`` in FFT order, shape ``(components, *grid.shape)``."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_component_array(self.grid, self.coeffs, np.complex128))

    @property
    def components(self):
        return self.coeffs.shape[0]

    @property
    def mean(self):
        """The k = 0 coefficients, one per component."""
        return self.coeffs[(slice(None),) + (0,) * self.grid.dim].copy()

    def without_mean(self):
        c = np.array(self.coeffs)
        c[(slice(None),) + (0,) * self.grid.dim] = 0.0
        return Spectrum(self.grid, c)

    def __add__(self, other):
        _check_same_grid(self, other)
        return Spectrum(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return Spectrum(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return Spectrum(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise InvalidInputError(f"grid mismatch: {a.grid} vs {b.grid}")
    if type(a) is type(b) and a.components != b.components and min(a.components, b.components) != 1:
        raise InvalidInputError(f"component mismatch: {a.components} vs {b.components}")


# --- raw transforms on component-major arrays -------------------------------


def fft(samples, grid):
    return scipy.fft.fftn(samples, axes=grid.axes, workers=threads()) / grid.n**grid.dim


def ifft(coeffs, grid):
    return scipy.fft.ifftn(coeffs, axes=grid.axes, workers=threads()) * grid.n**grid.dim


def real_ifft(coeffs, grid):
    """Inverse transform of Hermitian coefficients straight to real samples."""
    half = coeffs[..., : grid.n // 2 + 1]
    return scipy.fft.irfftn(half, s=grid.shape, axes=grid.axes, workers=threads()) * grid.n**grid.dim


def conjugate_partner(coeffs, grid):
    """``conj(c_{-k})`` laid out at index k."""
    flipped = np.flip(coeffs, axis=grid.axes)
    return np.conj(np.roll(flipped, 1, axis=grid.axes))


def hermitian_defect(s: Spectrum):
    """Largest ``|c_k - conj(c_{-k})|`` relative to the largest coefficient."""
    scale = float(np.max(np.abs(s.coeffs))) if s.coeffs.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(s.coeffs - conjugate_partner(s.coeffs, s.grid)))) / scale


def forward_transform(f: Field) -> Spectrum:
    if not isinstance(f, Field):
        raise InvalidInputError(f"expected a Field, got {type(f).__name__}")
    return Spectrum(f.grid, fft(f.samples, f.grid))


def inverse_transform(s: Spectrum, check_symmetry=True) -> Field:
    """Inverse transform; the imaginary round-off residue is discarded.

    Raises SymmetryError if the spectrum is not Hermitian to ``1e-10`` relative.
    """
    if not isinstance(s, Spectrum):
        raise InvalidInputError(f"expected a Spectrum, got {type(s).__name__}")
    if check_symmetry:
        defect = hermitian_defect(s)
        if defect > SYMMETRY_TOL:
            raise SymmetryError(f"spectrum violates Hermitian symmetry (relative defect {defect:.3e})")
    return Field(s.grid, ifft(s.coeffs, s.grid).real)


# --- reductions ---------------------------------------------------------------


def compensated_sum(values):
    """Deterministic compensated sum of a real array (any shape)."""
    flat = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
    return _backend.neumaier_sum(flat)


def parse_exponent(p, name="p"):
    """Validate a Lebesgue/summability exponent in [1, inf]; strings 'inf' allowed."""
    if isinstance(p, str):
        token = p.strip().lower()
        if token in ("inf", "infinity", "oo"):
            return math.inf
        try:
            p = float(token)
        except ValueError:
            raise InvalidParameterError(f"{name} must be a number >= 1 or 'inf', got {p!r}") from None
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise InvalidParameterError(f"{name} must satisfy 1 <= {name} <= inf, got {p}")
    return p


def lebesgue_norm(f: Field, p) -> float:
    """Grid quadrature of the L^p norm; vector fields use the pointwise Euclidean magnitude.

    Exact for p = 2 on band-limited fields (Parseval). For other finite p this
    is the rectangle rule, which converges spectrally for smooth fields.
    """
    p = parse_exponent(p)
    flat = f.samples.reshape(f.components, -1)
    if math.isinf(p):
        return _backend.magnitude_max(flat)
    total = _backend.magnitude_power_sum(flat, p)
    return (f.grid.spacing**f.grid.dim * total) ** (1.0 / p)


def l2_norm_squared(s: Spectrum) -> float:
    """``||f||_2^2`` from coefficients via Parseval."""
    pairs = s.coeffs.view(np.float64).reshape(1, -1)
    return s.grid.volume * _backend.magnitude_power_sum(pairs, 2.0)


def weighted_l2_squared(s: Spectrum, weight) -> float:
    """``(2 pi)^n sum_k w(k) |c_k|^2`` summed over components."""
    w = np.broadcast_to(weight, s.grid.shape)
    terms = (s.coeffs.real**2 + s.coeffs.imag**2) * w
    return s.grid.volume * compensated_sum(terms)


def inner_product(a: Spectrum, b: Spectrum) -> float:
    """Real L^2 inner product ``(f, g)`` summed over components."""
    _check_same_grid(a, b)
    return a.grid.volume * compensated_sum(np.real(np.conj(a.coeffs) * b.coeffs))


# --- multipliers ----------------------------------------------------------------

Symbol = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


def multiplier(s: Spectrum, m: Symbol) -> Spectrum:
    """Apply a Fourier multiplier coefficient-wise.

    ``m`` is an array or a callable receiving the wavevector array of shape
    ``(dim, *grid.shape)``. A result of shape ``grid.shape`` (or broadcastable
    to it) is a scalar symbol applied to every component; shape
    ``(out, in, *grid.shape)`` is a matrix symbol.
    """
    grid = s.grid
    sym = np.asarray(m(grid.wavevector) if callable(m) else m)
    if sym.ndim == grid.dim + 2:
        if sym.shape[1] != s.components or sym.shape[2:] != grid.shape:
            raise InvalidInputError(f"matrix symbol of shape {sym.shape} does not fit {s.components} components")
        return Spectrum(grid, np.einsum("ab...,b...->a...", sym, s.coeffs))
    try:
        return Spectrum(grid, s.coeffs * np.broadcast_to(sym, grid.shape))
    except ValueError:
        raise InvalidInputError(f"symbol of shape {sym.shape} does not match grid {grid.shape}") from None


def fractional_laplacian(s: Spectrum, alpha: float) -> Spectrum:
    """``Lambda^alpha = (-Delta)^(alpha/2)``, symbol ``|k|^alpha``; the k = 0 mode maps to 0."""
    kn = s.grid.k_norm
    sym = np.zeros_like(kn)
    nz = kn > 0
    sym[nz] = kn[nz] ** alpha
    return multiplier(s, sym)


def gradient(s: Spectrum) -> Spectrum:
    """Component ``c * dim + i`` of the result is ``d f_c / d x_i``."""
    k = s.grid.wavevector_odd
    out = 1j * k[np.newaxis] * s.coeffs[:, np.newaxis]
    return Spectrum(s.grid, out.reshape((-1,) + s.grid.shape))


def divergence(s: Spectrum) -> Spectrum:
    if s.components != s.grid.dim:
        raise InvalidInputError("divergence needs a vector field with dim components")
    k = s.grid.wavevector_odd
    return Spectrum(s.grid, np.sum(1j * k * s.coeffs, axis=0))


def curl(s: Spectrum) -> Spectrum:
    """2D: scalar ``d1 u2 - d2 u1``; 3D: the usual vector curl."""
    grid = s.grid
    k = grid.wavevector_odd
    c = s.coeffs
    if grid.dim == 2 and s.components == 2:
        return Spectrum(grid, 1j * (k[0] * c[1] - k[1] * c[0]))
    if grid.dim == 3 and s.components == 3:
        return Spectrum(grid, 1j * cross(k, c))
    raise InvalidInputError("curl is defined for 2-vectors in 2D and 3-vectors in 3D")


def cross(a, b):
    """Cross product along the leading axis."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    np.subtract(a[1] * b[2], a[2] * b[1], out=out[0])
    np.subtract(a[2] * b[0], a[0] * b[2], out=out[1])
    np.subtract(a[0] * b[1], a[1] * b[0], out=out[2])
    return out


def leray(s: Spectrum) -> Spectrum:
    """Projection onto divergence-free fields, symbol ``I - k k^T / |k|^2`` (identity at k = 0)."""
    if s.components != s.grid.dim:
        raise InvalidInputError("Leray projection needs a vector field with dim components")
    k = s.grid.wavevector
    kdotc = np.einsum("i...,i...->...", k, s.coeffs)
    return Spectrum(s.grid, s.coeffs - k * (kdotc * s.grid.inv_k_squared))


# --- zero-padded products -------------------------------------------------------


def _resize_axis(c, axis, n_new):
    n_old = c.shape[axis]
    c = np.moveaxis(c, axis, 0)
    out = np.zeros((n_new,) + c.shape[1:], dtype=c.dtype)
    if n_new > n_old:
        h = n_old // 2
        out[:h] = c[:h]
        out[n_new - h + 1 :] = c[h + 1 :]
        # the Nyquist coefficient stands for cos(h x): split it over +h and -h
        out[h] = 0.5 * c[h]
        out[n_new - h] = 0.5 * c[h]
    else:
        h = n_new // 2
        out[:h] = c[:h]
        out[h + 1 :] = c[n_old - h + 1 :]
        # +h and -h alias onto the same sample-space mode
        out[h] = c[h] + c[n_old - h]
    return np.moveaxis(out, 0, axis)


def resize_coefficients(coeffs, grid: Grid, n_new: int):
    """Zero-pad (``n_new > n``) or truncate coefficients to another resolution."""
    out = np.asarray(coeffs, dtype=np.complex128)
    for ax in grid.axes:
        out = _resize_axis(out, ax, n_new)
    return out


def padded_samples(s: Spectrum, factor=2):
    """Samples of ``s`` on the ``factor``-times finer grid."""
    fine = Grid(s.grid.dim, s.grid.n * factor)
    return ifft(resize_coefficients(s.coeffs, s.grid, fine.n), fine).real


def from_padded_samples(samples, grid: Grid, factor=2) -> Spectrum:
    """Transform samples on the fine grid and truncate back to ``grid``."""
    fine = Grid(grid.dim, grid.n * factor)
    return Spectrum(grid, resize_coefficients(fft(samples, fine), fine, grid.n))


def dealiased_product(a: Spectrum, b: Spectrum) -> Spectrum:
    """Pointwise product computed on a 2x zero-padded grid.

    Exact (all product modes resolved before truncation) whenever both inputs
    are band-limited to N/2. Components multiply pairwise; a scalar broadcasts.
    """
    _check_same_grid(a, b)
    prod = padded_samples(a) * padded_samples(b)
    return from_padded_samples(prod, a.grid)


def top_frequency(s: Spectrum, rel_tol=1e-13):
    """Largest per-axis ``|k_i|`` carrying a coefficient above ``rel_tol`` of the maximum."""
    mag = np.max(np.abs(s.coeffs), axis=0)
    peak = float(np.max(mag)) if mag.size else 0.0
    if peak == 0.0:
        return 0
    active = mag > rel_tol * peak
    kabs = np.max(np.abs(s.grid.wavevector), axis=0)
    return int(np.max(kabs[active]))
