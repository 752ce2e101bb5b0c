"""Littlewood-Paley/Besov analysis on the torus, Bony paraproducts and a
vorticity-form spectral Navier-Stokes solver with blow-up criterion monitoring."""
from . import _backend
from .besov import BesovIndex, homogeneous_norm, inhomogeneous_norm, lowpass_seminorm, scaling_check
from .errors import (
    AliasingError,
    CFLError,
    InstabilityError,
    InvalidInputError,
    InvalidParameterError,
    LPNSError,
    SymmetryError,
)
from .littlewood_paley import SHARP, SMOOTH, Cutoff, block_symbol, chi, decompose, dyadic_block, low_pass
from .monitor import Monitor, MonitorSeries, criterion_integrand, enstrophy_inequality_check, gronwall_check
from .paraproduct import (
    BilinearExponents,
    BonyParts,
    CorpusConfig,
    bilinear_report,
    bony_decompose,
    corpus_verify,
    paraproduct_T,
    remainder_R,
)
from .solver import RunConfig, VorticitySolver, biot_savart, run
from .spectral import Field, Grid, Spectrum, forward_transform, inverse_transform, lebesgue_norm

__version__ = "0.1.0"
BACKEND = _backend.name

__all__ = [
    "AliasingError",
    "BACKEND",
    "BesovIndex",
    "BilinearExponents",
    "BonyParts",
    "CFLError",
    "CorpusConfig",
    "Cutoff",
    "Field",
    "Grid",
    "InstabilityError",
    "InvalidInputError",
    "InvalidParameterError",
    "LPNSError",
    "Monitor",
    "MonitorSeries",
    "RunConfig",
    "SHARP",
    "SMOOTH",
    "Spectrum",
    "SymmetryError",
    "VorticitySolver",
    "bilinear_report",
    "biot_savart",
    "block_symbol",
    "bony_decompose",
    "chi",
    "corpus_verify",
    "criterion_integrand",
    "decompose",
    "dyadic_block",
    "enstrophy_inequality_check",
    "forward_transform",
    "gronwall_check",
    "homogeneous_norm",
    "inhomogeneous_norm",
    "inverse_transform",
    "lebesgue_norm",
    "low_pass",
    "lowpass_seminorm",
    "paraproduct_T",
    "remainder_R",
    "run",
    "scaling_check",
]
