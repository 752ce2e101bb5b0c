"""Invariant suites behind ``lpns check-identities``.

Every suite returns a :class:`CheckResult` holding the measured worst-case
value, its tolerance and the verdict, so a failing run says by how much.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .fields import random_solenoidal, random_spectrum
from .littlewood_paley import PLATEAU, SMOOTH, SUPPORT, Cutoff, active_block_range, block_symbol_array, low_pass_symbol
from .paraproduct import bony_decompose, support_certificate
from .solver import RunConfig, VorticitySolver, run
from .spectral import Grid, Spectrum, fractional_laplacian, gradient, inverse_transform, lebesgue_norm


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""


def _result(name, measured, tolerance, detail="", strict=False):
    ok = measured < tolerance if strict else measured <= tolerance
    return CheckResult(name, float(measured), float(tolerance), bool(ok), detail)


def partition_of_unity(cutoff: Cutoff = SMOOTH, sizes=(32, 64)):
    worst = 0.0
    for dim in (1, 2, 3):
        for n in sizes:
            g = Grid(dim, n)
            j_min, j_max = active_block_range(g, cutoff)
            total = sum(block_symbol_array(g, j, cutoff) for j in range(j_min, j_max + 1))
            nz = g.k_norm > 0
            worst = max(worst, float(np.max(np.abs(total[nz] - 1.0))))
    return _result("partition of unity", worst, 1e-12, "max |sum_j phi_j(k) - 1|, k != 0, dim 1-3")


def support_algebra(cutoff: Cutoff = SMOOTH, sizes=(32, 64)):
    """Products of blocks two or more apart, and of chi with blocks j >= 1, vanish exactly."""
    worst = 0.0
    for dim in (1, 2, 3):
        for n in sizes:
            g = Grid(dim, n)
            j_min, j_max = active_block_range(g, cutoff)
            blocks = {j: block_symbol_array(g, j, cutoff) for j in range(j_min, j_max + 1)}
            for j, a in blocks.items():
                for i, b in blocks.items():
                    if abs(i - j) >= 2:
                        worst = max(worst, float(np.max(np.abs(a * b))))
            low = low_pass_symbol(g, 0, cutoff)
            for j in range(1, j_max + 1):
                worst = max(worst, float(np.max(np.abs(low * blocks[j]))))
    return _result("support algebra", worst, 0.0, "max |phi_j phi_j'| (|j-j'|>=2) and |chi phi_j| (j>=1)")


def _pairs(seed, count):
    for dim, n in ((1, 256), (2, 128)):
        g = Grid(dim, n)
        for i in range(count):
            f = random_spectrum(g, seed + i, kmax=n // 4, stream=0)
            h = random_spectrum(g, seed + i, kmax=n // 4, stream=1)
            yield f, h


def bony_identity(cutoff: Cutoff = SMOOTH, seed=0, count=20):
    worst = max(bony_decompose(f, g, cutoff).residual() for f, g in _pairs(seed, count))
    return _result("Bony identity", worst, 1e-10, f"{count} pairs each in 1D N=256 and 2D N=128")


def paraproduct_support(cutoff: Cutoff = SMOOTH, seed=0, count=20):
    worst = 0.0
    for f, g in _pairs(seed, count):
        worst = max(worst, support_certificate(g, f, cutoff), support_certificate(f, g, cutoff))
    return _result("paraproduct support", worst, 1e-13, "coefficients of S_{j-1}g Delta_j f outside their annulus")


def cutoff_profile(cutoff: Cutoff = SMOOTH, step=1e-5):
    """The cutoff must be 1 below 3/4, 0 above 4/3 and continuous in between.

    Measured: the largest jump between neighbouring samples of chi on [0, 2].
    A continuous profile gives about ``step * max|chi'|``; an indicator gives 1.
    """
    r = np.arange(0.0, 2.0 + step, step)
    vals = cutoff(r)
    jump = float(np.max(np.abs(np.diff(vals))))
    plateau = float(np.max(np.abs(vals[r <= PLATEAU] - 1.0)))
    tail = float(np.max(np.abs(vals[r >= SUPPORT])))
    return _result("cutoff profile", max(jump, plateau, tail), 1e-3, "max jump of chi on a 1e-5 mesh of [0, 2]")


def _scalar_corpus(seed, count, n=64):
    g = Grid(2, n)
    for i in range(count):
        yield random_spectrum(g, seed + i, kmax=n // 4, rms=1.0)


def gagliardo_nirenberg(seed=0, count=20, alphas=(0.25, 0.5, 0.75)):
    """``||Lambda^a w||_2 - ||w||_2^(1-a) ||grad w||_2^a``, worst over the corpus (must be <= 1e-12)."""
    worst = -math.inf
    for w in _scalar_corpus(seed, count):
        l2 = math.sqrt(spectral.l2_norm_squared(w))
        grad = math.sqrt(spectral.l2_norm_squared(gradient(w)))
        for a in alphas:
            lhs = math.sqrt(spectral.l2_norm_squared(fractional_laplacian(w, a)))
            worst = max(worst, lhs - l2 ** (1.0 - a) * grad**a)
    return _result("Gagliardo-Nirenberg", worst, 1e-12, f"alpha in {alphas}, {count} fields")


def _solenoidal_corpus(seed, count):
    for dim, n in ((2, 64), (3, 32)):
        g = Grid(dim, n)
        for i in range(count):
            u = random_solenoidal(g, seed + i, kmax=n // 4)
            yield u, spectral.curl(u)


def calderon_zygmund_l2(seed=0, count=20):
    worst = 0.0
    for u, w in _solenoidal_corpus(seed, count):
        gu = lebesgue_norm(inverse_transform(gradient(u)), 2)
        wl = lebesgue_norm(inverse_transform(w), 2)
        worst = max(worst, abs(gu - wl) / wl)
    return _result("Calderon-Zygmund p=2", worst, 1e-12, "| ||grad u||_2 - ||w||_2 | / ||w||_2, 2D and 3D")


def calderon_zygmund_lp(seed=0, count=20, exponents=(4.0 / 3.0, 4.0)):
    worst = 0.0
    for u, w in _solenoidal_corpus(seed, count):
        gu, wf = inverse_transform(gradient(u)), inverse_transform(w)
        for p in exponents:
            worst = max(worst, lebesgue_norm(gu, p) / lebesgue_norm(wf, p))
    return _result("Calderon-Zygmund p=4/3,4", worst, 10.0, "max ||grad u||_p / ||w||_p (envelope)")


def advection_skew(seed=0, count=5):
    """``((u . grad) w, w) = 0`` for the dealiased 3D advection term."""
    g = Grid(3, 32)
    solver = VorticitySolver(g)
    worst = 0.0
    for i in range(count):
        u = random_solenoidal(g, seed + i, kmax=g.n // 6)
        w = solver.make_state(0.0, spectral.curl(u).coeffs).omega
        adv = Spectrum(g, solver.advection(w.coeffs))
        scale = math.sqrt(spectral.l2_norm_squared(adv) * spectral.l2_norm_squared(w))
        worst = max(worst, abs(spectral.inner_product(adv, w)) / scale)
    return _result("advection skew-symmetry", worst, 1e-10, "|((u.grad)w, w)| / (||(u.grad)w|| ||w||), 3D")


def energy_identity(dim=2, n=0, dt=1e-3, t_end=0.1, seed=0):
    n = n or (64 if dim == 2 else 32)
    result = run(RunConfig(dim=dim, n=n, dt=dt, t_end=t_end, initial="random", seed=seed))
    worst = float(np.max(np.abs(result.series.column("energy_residual"))))
    tol = 1e-6 if dim == 2 else 1e-4
    return _result(f"energy identity ({dim}D)", worst, tol, f"N={n}, dt={dt:g}, T={t_end:g}, random data seed {seed}")


def state_invariants(dim=3, n=32, dt=1e-3, t_end=0.05, seed=0):
    cfg = RunConfig(dim=dim, n=n, dt=dt, t_end=t_end, initial="random", seed=seed)
    result = run(cfg)
    defects = result.state.invariant_defects()
    return _result(f"state invariants ({dim}D)", max(defects.values()), 1e-10, "div w, div u, k=0 modes at T")


def run_all(*, cutoff: Cutoff = SMOOTH, seed=0, count=20, dim=2, n=0, dt=1e-3, t_end=0.1):
    """All suites in a fixed order."""
    results = [
        partition_of_unity(cutoff),
        support_algebra(cutoff),
        cutoff_profile(cutoff),
        bony_identity(cutoff, seed, count),
        paraproduct_support(cutoff, seed, count),
        gagliardo_nirenberg(seed, count),
        calderon_zygmund_l2(seed, count),
        calderon_zygmund_lp(seed, count),
        advection_skew(seed),
        energy_identity(dim, n, dt, t_end, seed),
    ]
    if dim == 3:
        results.append(state_invariants(3, n or 32, dt, min(t_end, 0.05), seed))
    return results


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  {'measured':>12}  {'tolerance':>10}  result"]
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.measured:12.3e}  {r.tolerance:10.1e}  {verdict}  {r.detail}")
    return "\n".join(lines)
