"""Dyadic cutoff, block symbols and the projectors S_j (ball) and Delta_j (annulus).

The cutoff ``chi`` equals 1 on ``r <= 3/4`` and 0 on ``r >= 4/3``, with a
C-infinity monotone transition built from ``exp(-1/t)`` bumps. Block symbols
are ``phi_j(k) = chi(|k| / 2^(j+1)) - chi(|k| / 2^j)``, so block ``j`` lives in
``(3/4) 2^j < |k| < (8/3) 2^j``. Everything is evaluated as a spectral
multiplier; no real-space convolution kernels are formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError
from .spectral import Grid, Spectrum, multiplier

PLATEAU = 0.75
SUPPORT = 4.0 / 3.0
_SCAN = range(-16, 40)


def _theta(t):
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


@dataclass(frozen=True)
class Cutoff:
    """Radial low-pass profile. ``kind='sharp'`` is the indicator of ``r <= 1``.

    The sharp variant is a diagnostic negative control: it is discontinuous,
    so smoothness-dependent guarantees (kernel decay, bounded multipliers) are lost.
    """

    kind: str = "smooth"

    def __post_init__(self):
        if self.kind not in ("smooth", "sharp"):
            raise InvalidParameterError(f"cutoff kind must be 'smooth' or 'sharp', got {self.kind!r}")

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        if self.kind == "sharp":
            return np.where(r <= 1.0, 1.0, 0.0)
        t = np.atleast_1d((SUPPORT - r) / (SUPPORT - PLATEAU))
        a = _theta(t)
        b = _theta(1.0 - t)
        out = np.where(t >= 1.0, 1.0, np.where(t <= 0.0, 0.0, a / np.where(a + b > 0, a + b, 1.0)))
        return out.reshape(r.shape) if r.ndim else out[0]


SMOOTH = Cutoff("smooth")
SHARP = Cutoff("sharp")


def chi(r: float, cutoff: Cutoff = SMOOTH) -> float:
    if r < 0:
        raise InvalidParameterError(f"chi is defined for r >= 0, got {r}")
    return float(cutoff(r))


def _radius(k):
    k = np.asarray(k, dtype=np.float64)
    return abs(float(k)) if k.ndim == 0 else float(np.linalg.norm(k))


def block_symbol(j: int, k, cutoff: Cutoff = SMOOTH) -> float:
    """``chi(|k| / 2^(j+1)) - chi(|k| / 2^j)``; ``k`` is a wavevector or a radius."""
    r = _radius(k)
    return float(cutoff(math.ldexp(r, -(j + 1))) - cutoff(math.ldexp(r, -j)))


@lru_cache(maxsize=512)
def low_pass_symbol(grid: Grid, j: int, cutoff: Cutoff = SMOOTH):
    sym = cutoff(np.ldexp(grid.k_norm, -j))
    sym.flags.writeable = False
    return sym


@lru_cache(maxsize=512)
def block_symbol_array(grid: Grid, j: int, cutoff: Cutoff = SMOOTH):
    sym = low_pass_symbol(grid, j + 1, cutoff) - low_pass_symbol(grid, j, cutoff)
    sym.flags.writeable = False
    return sym


def low_pass(s: Spectrum, j: int, cutoff: Cutoff = SMOOTH) -> Spectrum:
    """``S_j``: multiplier ``chi(|k| / 2^j)``. The k = 0 mode passes unchanged."""
    return multiplier(s, low_pass_symbol(s.grid, j, cutoff))


def dyadic_block(s: Spectrum, j: int, cutoff: Cutoff = SMOOTH) -> Spectrum:
    """``Delta_j = S_{j+1} - S_j``."""
    return multiplier(s, block_symbol_array(s.grid, j, cutoff))


@lru_cache(maxsize=64)
def active_block_range(grid: Grid, cutoff: Cutoff = SMOOTH):
    """``(j_min, j_max)``: every block outside this range vanishes identically on ``grid``.

    Found by scanning the block symbols over the distinct nonzero ``|k|`` of
    the grid; j_min = -1 for any torus grid since the smallest ``|k|`` is 1.
    """
    radii = np.unique(grid.k_norm)
    radii = radii[radii > 0]
    active = [j for j in _SCAN if np.any(cutoff(np.ldexp(radii, -(j + 1))) - cutoff(np.ldexp(radii, -j)) != 0.0)]
    return min(active), max(active)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """The blocks ``Delta_j f`` for ``j_min <= j <= j_max``."""

    j_min: int
    j_max: int
    blocks: dict = field(repr=False)
    source: Spectrum = field(repr=False)

    def __iter__(self):
        return iter(range(self.j_min, self.j_max + 1))

    def reconstruct(self) -> Spectrum:
        total = np.zeros_like(self.source.coeffs)
        for j in self:
            total = total + self.blocks[j].coeffs
        return Spectrum(self.source.grid, total)

    def nonzero(self, rel_tol=1e-14):
        """Indices of blocks whose largest coefficient exceeds ``rel_tol`` of the source's."""
        scale = float(np.max(np.abs(self.source.coeffs))) or 1.0
        return [j for j in self if float(np.max(np.abs(self.blocks[j].coeffs))) > rel_tol * scale]


def decompose(s: Spectrum, cutoff: Cutoff = SMOOTH) -> BlockDecomposition:
    j_min, j_max = active_block_range(s.grid, cutoff)
    blocks = {j: dyadic_block(s, j, cutoff) for j in range(j_min, j_max + 1)}
    return BlockDecomposition(j_min, j_max, blocks, s)


def symbol_table(grid: Grid, cutoff: Cutoff = SMOOTH):
    """Rows ``(j, |k|, value)`` over the distinct nonzero radii of ``grid``."""
    radii = np.unique(grid.k_norm)
    radii = radii[radii > 0]
    j_min, j_max = active_block_range(grid, cutoff)
    rows = []
    for j in range(j_min, j_max + 1):
        vals = cutoff(np.ldexp(radii, -(j + 1))) - cutoff(np.ldexp(radii, -j))
        rows.extend((j, float(r), float(v)) for r, v in zip(radii, vals))
    return rows
