"""Bony paraproduct decomposition and the empirical bilinear Hoelder-type estimate.

Products are formed on a 2x zero-padded grid and summed there before a single
transform back, so each part is the exact (alias-free) trig polynomial
whenever the inputs are band-limited to N/4.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import spectral
from .besov import BesovIndex, as_spectrum, homogeneous_norm, lowpass_seminorm
from .errors import AliasingError, InvalidInputError, InvalidParameterError
from .fields import random_spectrum
from .littlewood_paley import SMOOTH, Cutoff, active_block_range, block_symbol_array, low_pass_symbol
from .parallel import threads
from .spectral import Field, Grid, Spectrum, dealiased_product, lebesgue_norm, top_frequency

INF = math.inf


def _padded(s: Spectrum, symbol):
    return spectral.padded_samples(Spectrum(s.grid, s.coeffs * symbol))


def _check_pair(f: Spectrum, g: Spectrum):
    if f.grid != g.grid:
        raise InvalidInputError(f"grid mismatch: {f.grid} vs {g.grid}")


def _to_field(s: Spectrum) -> Field:
    return Field(s.grid, spectral.ifft(s.coeffs, s.grid).real)


def _blocks(s: Spectrum, cutoff):
    j_min, j_max = active_block_range(s.grid, cutoff)
    return {j: _padded(s, block_symbol_array(s.grid, j, cutoff)) for j in range(j_min, j_max + 1)}


def _paraproduct_padded(g: Spectrum, f_blocks, cutoff):
    total = 0.0
    for j, fj in sorted(f_blocks.items()):
        total = total + _padded(g, low_pass_symbol(g.grid, j - 1, cutoff)) * fj
    return total


def _remainder_padded(f: Spectrum, g: Spectrum, f_blocks, g_blocks):
    total = 0.0
    for j, fj in sorted(f_blocks.items()):
        near = sum(g_blocks[i] for i in (j - 1, j, j + 1) if i in g_blocks)
        total = total + near * fj
    # the two means pair with each other: k = 0 acts as the lowest diagonal block
    mean = np.real(f.mean * g.mean).reshape((-1,) + (1,) * f.grid.dim)
    return total + mean


def paraproduct_T(g, f, cutoff: Cutoff = SMOOTH) -> Field:
    """``T_g f = sum_j S_{j-1} g * Delta_j f``."""
    g, f = as_spectrum(g), as_spectrum(f)
    _check_pair(f, g)
    total = _paraproduct_padded(g, _blocks(f, cutoff), cutoff)
    return _to_field(spectral.from_padded_samples(np.broadcast_to(total, _fine_shape(f)), f.grid))


def remainder_R(f, g, cutoff: Cutoff = SMOOTH) -> Field:
    """``R(f, g) = sum_{|i-j|<=1} Delta_i g * Delta_j f`` (plus the product of the means)."""
    f, g = as_spectrum(f), as_spectrum(g)
    _check_pair(f, g)
    total = _remainder_padded(f, g, _blocks(f, cutoff), _blocks(g, cutoff))
    return _to_field(spectral.from_padded_samples(np.broadcast_to(total, _fine_shape(f)), f.grid))


def _fine_shape(s: Spectrum):
    return (s.components,) + (2 * s.grid.n,) * s.grid.dim


@dataclass(frozen=True, eq=False)
class BonyParts:
    para_gf: Field
    para_fg: Field
    remainder: Field
    product: Field

    def residual(self) -> float:
        """``||T_g f + T_f g + R - f g||_inf / ||f g||_inf``."""
        total = self.para_gf.samples + self.para_fg.samples + self.remainder.samples
        scale = lebesgue_norm(self.product, INF)
        err = lebesgue_norm(Field(self.product.grid, total - self.product.samples), INF)
        return err / scale if scale > 0 else err


def bony_decompose(f, g, cutoff: Cutoff = SMOOTH) -> BonyParts:
    f, g = as_spectrum(f), as_spectrum(g)
    _check_pair(f, g)
    limit = f.grid.n // 4
    for name, s in (("f", f), ("g", g)):
        top = top_frequency(s)
        if top > limit:
            raise AliasingError(f"{name} has frequency {top} above N/4 = {limit}; the product is not representable")
    fb, gb = _blocks(f, cutoff), _blocks(g, cutoff)
    shape = _fine_shape(f)
    parts = [
        _paraproduct_padded(g, fb, cutoff),
        _paraproduct_padded(f, gb, cutoff),
        _remainder_padded(f, g, fb, gb),
    ]
    para_gf, para_fg, rem = (_to_field(spectral.from_padded_samples(np.broadcast_to(p, shape), f.grid)) for p in parts)
    return BonyParts(para_gf, para_fg, rem, _to_field(dealiased_product(f, g)))


def paraproduct_terms(g, f, cutoff: Cutoff = SMOOTH):
    """Yield ``(j, spectrum of S_{j-1} g * Delta_j f)`` for every nonzero summand."""
    g, f = as_spectrum(g), as_spectrum(f)
    _check_pair(f, g)
    for j, fj in sorted(_blocks(f, cutoff).items()):
        if not np.any(fj):
            continue
        term = _padded(g, low_pass_symbol(g.grid, j - 1, cutoff)) * fj
        yield j, spectral.from_padded_samples(term, f.grid)


def support_certificate(g, f, cutoff: Cutoff = SMOOTH) -> float:
    """Worst relative coefficient of any ``S_{j-1} g Delta_j f`` outside its annulus.

    The annulus is ``(1/3) 2^(j-2) <= |k| <= (5/3) 2^(j+1)``; a value near
    round-off certifies the support arithmetic.
    """
    worst = 0.0
    for j, term in paraproduct_terms(g, f, cutoff):
        mag = np.max(np.abs(term.coeffs), axis=0)
        peak = float(np.max(mag))
        if peak == 0.0:
            continue
        kn = term.grid.k_norm
        outside = (kn < math.ldexp(1.0 / 3.0, j - 2)) | (kn > math.ldexp(5.0 / 3.0, j + 1))
        if np.any(outside):
            worst = max(worst, float(np.max(mag[outside])) / peak)
    return worst


# --- bilinear estimate -----------------------------------------------------------


@dataclass(frozen=True)
class BilinearExponents:
    """Integrability/summability exponents of the bilinear estimate."""

    p: float = 2.0
    q: float = 2.0
    p1: float = 2.0
    q1: float = 2.0
    p2: float = INF
    q2: float = INF
    p3: float = INF
    q3: float = INF
    p4: float = 2.0
    q4: float = 2.0

    def __post_init__(self):
        for name in ("p", "q", "p1", "q1", "p2", "q2", "p3", "q3", "p4", "q4"):
            object.__setattr__(self, name, spectral.parse_exponent(getattr(self, name), name))
        checks = (
            ("1/p = 1/p1 + 1/p2", self.p, self.p1, self.p2),
            ("1/p = 1/p3 + 1/p4", self.p, self.p3, self.p4),
            ("1/q = 1/q1 + 1/q2", self.q, self.q1, self.q2),
            ("1/q = 1/q3 + 1/q4", self.q, self.q3, self.q4),
        )
        for label, whole, a, b in checks:
            if abs(1.0 / whole - (1.0 / a + 1.0 / b)) > 1e-12:
                raise InvalidParameterError(f"Hoelder relation violated: {label} ({whole}, {a}, {b})")

    def as_dict(self):
        return {k: getattr(self, k) for k in ("p", "q", "p1", "q1", "p2", "q2", "p3", "q3", "p4", "q4")}


@dataclass(frozen=True)
class BilinearReport:
    lhs: float
    term1: float
    term2: float
    ratio: float
    s: float
    alpha: float
    beta: float
    exponents: BilinearExponents


def _check_orders(s, alpha, beta):
    for name, v in (("s", s), ("alpha", alpha), ("beta", beta)):
        if not v > 0:
            raise InvalidParameterError(f"{name} must be positive, got {v}")


def _require_mean_free(name, s: Spectrum):
    scale = float(np.max(np.abs(s.coeffs))) if s.coeffs.size else 0.0
    if scale > 0 and float(np.max(np.abs(s.mean))) > 1e-12 * scale:
        raise InvalidInputError(f"{name} must have zero mean")


def _bound_terms(f1, f2, s, alpha, beta, e, cutoff):
    term1 = homogeneous_norm(f1, BesovIndex(s + alpha, e.p1, e.q1), cutoff) * homogeneous_norm(
        f2, BesovIndex(-alpha, e.p2, e.q2), cutoff
    )
    term2 = homogeneous_norm(f1, BesovIndex(-beta, e.p3, e.q3), cutoff) * homogeneous_norm(
        f2, BesovIndex(s + beta, e.p4, e.q4), cutoff
    )
    return term1, term2


def _ratio(num, den):
    if den > 0:
        return num / den
    return 0.0 if num == 0 else math.inf


def bilinear_report(f1, f2, s, alpha, beta, exponents: BilinearExponents = BilinearExponents(), cutoff: Cutoff = SMOOTH):
    """All five norms of the estimate and ``lhs / (term1 + term2)``."""
    _check_orders(s, alpha, beta)
    f1, f2 = as_spectrum(f1), as_spectrum(f2)
    _check_pair(f1, f2)
    _require_mean_free("f1", f1)
    _require_mean_free("f2", f2)
    e = exponents
    lhs = homogeneous_norm(dealiased_product(f1, f2), BesovIndex(s, e.p, e.q), cutoff)
    term1, term2 = _bound_terms(f1, f2, s, alpha, beta, e, cutoff)
    return BilinearReport(lhs, term1, term2, _ratio(lhs, term1 + term2), s, alpha, beta, e)


def bony_diagnostics(f1, f2, s, alpha, beta, exponents: BilinearExponents = BilinearExponents(), cutoff: Cutoff = SMOOTH):
    """Per-part rows ``(part, norm, bound, ratio)``.

    I1 = T_{f2} f1 and I3 = R are bounded by the first product of norms, I2 =
    T_{f1} f2 by the second. Two extra rows compare the S_j-based seminorm
    with the block norm at the negative indices used in those bounds.
    """
    _check_orders(s, alpha, beta)
    f1, f2 = as_spectrum(f1), as_spectrum(f2)
    e = exponents
    parts = bony_decompose(f1, f2, cutoff)
    term1, term2 = _bound_terms(f1, f2, s, alpha, beta, e, cutoff)
    idx = BesovIndex(s, e.p, e.q)
    rows = []
    for name, part, bound in (
        ("I1", parts.para_fg, term1),
        ("I2", parts.para_gf, term2),
        ("I3", parts.remainder, term1),
    ):
        norm = homogeneous_norm(part, idx, cutoff)
        rows.append((name, norm, bound, _ratio(norm, bound)))
    for name, f, neg in (("S_j(f2)", f2, BesovIndex(-alpha, e.p2, e.q2)), ("S_j(f1)", f1, BesovIndex(-beta, e.p3, e.q3))):
        low = lowpass_seminorm(f, neg, cutoff)
        rows.append((name, low, homogeneous_norm(f, neg, cutoff), _ratio(low, homogeneous_norm(f, neg, cutoff))))
    return rows


# --- corpus harness ---------------------------------------------------------------


@dataclass(frozen=True)
class CorpusConfig:
    count: int = 100
    seed: int = 0
    dim: int = 1
    n: int = 256
    kmax: int = 32
    slope: float = 2.0
    s: float = 0.5
    alpha: float = 0.5
    beta: float = 0.5
    exponents: BilinearExponents = field(default_factory=BilinearExponents)
    cutoff: Cutoff = SMOOTH

    def __post_init__(self):
        if self.count < 0:
            raise InvalidParameterError(f"count must be >= 0, got {self.count}")
        _check_orders(self.s, self.alpha, self.beta)
        if 4 * self.kmax > self.n:
            raise InvalidParameterError(f"kmax={self.kmax} exceeds N/4 for N={self.n}")

    def with_resolution(self, n):
        return replace(self, n=n)


@dataclass
class CorpusStats:
    rows: list
    max_ratio: float | None
    quantiles: dict

    @property
    def count(self):
        return len(self.rows)


QUANTILES = (0.5, 0.9, 0.99)


def corpus_pair(config: CorpusConfig, index: int):
    """The ``index``-th pair: seed ``config.seed + index``, streams 0 and 1."""
    grid = Grid(config.dim, config.n)
    seed = config.seed + index
    f1 = random_spectrum(grid, seed, slope=config.slope, kmax=config.kmax, stream=0)
    f2 = random_spectrum(grid, seed, slope=config.slope, kmax=config.kmax, stream=1)
    return seed, f1, f2


def _instance(config: CorpusConfig, index: int):
    seed, f1, f2 = corpus_pair(config, index)
    return seed, bilinear_report(f1, f2, config.s, config.alpha, config.beta, config.exponents, config.cutoff)


def corpus_verify(config: CorpusConfig, csv_path=None) -> CorpusStats:
    """Evaluate the estimate over a seeded corpus; rows come back in seed order."""
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        rows = list(pool.map(lambda i: _instance(config, i), range(config.count)))
    if rows:
        ratios = np.array([r.ratio for _, r in rows])
        stats = CorpusStats(rows, float(ratios.max()), {q: float(np.quantile(ratios, q)) for q in QUANTILES})
    else:
        stats = CorpusStats([], None, {})
    if csv_path is not None:
        from .io import write_corpus_csv

        write_corpus_csv(csv_path, stats)
    return stats
