import math

import numpy as np
import pytest
from helpers import rel
from hypothesis import given
from hypothesis import strategies as st

from lpns.besov import (
    BesovIndex,
    block_lebesgue_norms,
    dilate,
    homogeneous_norm,
    inhomogeneous_norm,
    lowpass_seminorm,
    lq_combine,
    scaling_check,
)
from lpns.errors import InvalidParameterError
from lpns.fields import cosine_mode, random_field, random_spectrum, taylor_green_vorticity
from lpns.spectral import Field, Grid

INF = math.inf
seeds = st.integers(0, 2**31)
exps = st.sampled_from([1.0, 1.5, 2.0, 3.0, INF])


def single_block_modes(count=20, dims=(1, 2, 3), jmax=4):
    """Integer wavevectors with (4/3) 2^j < |k| <= (3/2) 2^j; exactly one block carries them."""
    groups = []
    for j in range(1, jmax + 1):
        lo, hi = (4.0 / 3.0) * 2**j, 1.5 * 2**j
        r = int(hi)
        for dim in dims:
            modes = [k for k in np.ndindex(*(r + 1,) * dim) if lo < math.sqrt(sum(c * c for c in k)) <= hi]
            groups.append([(j, dim, k) for k in modes[::-1]])
    picked = []
    while len(picked) < count and any(groups):
        for grp in groups:
            if grp and len(picked) < count:
                picked.append(grp.pop())
    return picked


class TestIndex:
    def test_rejects_small_exponents(self):
        with pytest.raises(InvalidParameterError):
            BesovIndex(0.0, 0.5, 2)
        with pytest.raises(InvalidParameterError):
            BesovIndex(0.0, 2, 0.9)

    def test_inf_string(self):
        assert BesovIndex(-1, "inf", "inf").p == INF


class TestHomogeneous:
    @pytest.mark.parametrize("s", [-1.5, -0.5, 0.0, 0.5, 2.0])
    def test_cos3_sup(self, cos3, s):
        assert homogeneous_norm(cos3, BesovIndex(s, INF, INF)) == pytest.approx(2.0**s, rel=1e-14)

    def test_cos3_frozen(self, cos3):
        assert homogeneous_norm(cos3, BesovIndex(-0.5, INF, INF)) == pytest.approx(0.7071067811865476, rel=1e-14)

    def test_cos3_l2(self, cos3):
        for s in (-0.5, 0.5, 1.0):
            expected = 2.0**s * math.sqrt(math.pi)
            assert homogeneous_norm(cos3, BesovIndex(s, 2, 2)) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    def test_taylor_green(self, alpha):
        w = taylor_green_vorticity(Grid(2, 32))
        assert homogeneous_norm(w, BesovIndex(-alpha, INF, INF)) == pytest.approx(2.0, rel=1e-14)

    def test_mean_ignored(self, grid1, cos3):
        shifted = Field(grid1, cos3.samples + 5.0)
        idx = BesovIndex(0.3, 2, 1)
        assert homogeneous_norm(shifted, idx) == pytest.approx(homogeneous_norm(cos3, idx), rel=1e-13)

    def test_zero(self, grid1):
        assert homogeneous_norm(Field(grid1, np.zeros(32)), BesovIndex(1, 2, 2)) == 0.0

    @pytest.mark.parametrize("j,dim,k", single_block_modes())
    def test_single_mode_law(self, j, dim, k):
        g = Grid(dim, 64)
        f = cosine_mode(g, k)
        norms = block_lebesgue_norms(f, INF)
        # other blocks only see sampling round-off of cos at large arguments
        assert [i for i, v in norms.items() if v > 1e-12] == [j]
        for s in (-1.0, 0.5):
            assert rel(homogeneous_norm(f, BesovIndex(s, INF, INF)), 2.0 ** (j * s)) <= 1e-12

    @given(seed=seeds, s=st.floats(-2, 2), p=exps, q1=exps, q2=exps)
    def test_monotone_in_q(self, seed, s, p, q1, q2):
        q1, q2 = min(q1, q2), max(q1, q2)
        f = random_field(Grid(1, 64), seed, kmax=16)
        a = homogeneous_norm(f, BesovIndex(s, p, q1))
        b = homogeneous_norm(f, BesovIndex(s, p, q2))
        assert a >= b * (1 - 1e-13)

    @given(seed=seeds, s=st.floats(-2, 2), p=exps, q=exps)
    def test_triangle(self, seed, s, p, q):
        g = Grid(2, 32)
        f, h = random_field(g, seed, kmax=8), random_field(g, seed, kmax=8, stream=1)
        idx = BesovIndex(s, p, q)
        assert homogeneous_norm(f + h, idx) <= (homogeneous_norm(f, idx) + homogeneous_norm(h, idx)) * (1 + 1e-13)

    @given(seed=seeds, c=st.one_of(st.just(0.0), st.floats(1e-6, 10), st.floats(-10, -1e-6)))
    def test_homogeneity(self, seed, c):
        f = random_field(Grid(1, 64), seed, kmax=16)
        idx = BesovIndex(0.5, 3, 2)
        assert homogeneous_norm(f * c, idx) == pytest.approx(abs(c) * homogeneous_norm(f, idx), rel=1e-12, abs=1e-300)


class TestInhomogeneous:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0, INF])
    def test_constant(self, dim, p):
        g = Grid(dim, 16)
        expected = (2 * math.pi) ** (dim / p) if p != INF else 1.0
        for s, q in ((0.0, 1.0), (1.5, INF), (-2.0, 2.0)):
            assert inhomogeneous_norm(Field(g, np.ones(g.shape)), BesovIndex(s, p, q)) == pytest.approx(expected, rel=1e-14)

    def test_cos3(self, cos3):
        for s in (0.0, 0.5, 1.0):
            assert inhomogeneous_norm(cos3, BesovIndex(s, INF, INF)) == pytest.approx(2.0**s, rel=1e-14)

    def test_one_plus_cos3(self, grid1, cos3):
        f = Field(grid1, 1.0 + cos3.samples)
        assert inhomogeneous_norm(f, BesovIndex(0, INF, 1)) == pytest.approx(2.0, rel=1e-14)

    @given(seed=seeds, s=st.floats(-1, 2), p=exps, q=exps)
    def test_agrees_with_homogeneous_at_high_frequency(self, seed, s, p, q):
        g = Grid(1, 64)
        spec = random_spectrum(g, seed, kmax=16)
        c = spec.coeffs.copy()
        c[:, np.abs(g.k_axis) <= 3] = 0.0  # no j <= 0 content and S_0 f = 0
        f = Field(g, np.fft.ifft(c[0]).real * g.n)
        idx = BesovIndex(s, p, q)
        assert inhomogeneous_norm(f, idx) == pytest.approx(homogeneous_norm(f, idx), rel=1e-12)


class TestLowpass:
    def test_cos3(self, cos3):
        assert lowpass_seminorm(cos3, BesovIndex(-1, INF, INF)) == pytest.approx(0.25, rel=1e-14)

    def test_zero(self, grid1):
        assert lowpass_seminorm(Field(grid1, np.zeros(32)), BesovIndex(-1, 2, 2)) == 0.0

    @pytest.mark.parametrize("s", [0.0, 0.5])
    def test_rejects_nonnegative(self, cos3, s):
        with pytest.raises(InvalidParameterError):
            lowpass_seminorm(cos3, BesovIndex(s, 2, 2))

    def test_finite_q_tail(self, cos3):
        # S_j cos3 = cos3 for j >= 2 and 0 for j <= 0; j = 1 sees chi(3/2) = 0 too
        s = -0.5
        expected = math.sqrt(math.pi) * math.sqrt(sum(2.0 ** (2 * j * s) for j in range(2, 200)))
        assert lowpass_seminorm(cos3, BesovIndex(s, 2, 2)) == pytest.approx(expected, rel=1e-14)

    def test_equivalence_ratio_is_resolution_stable(self):
        ratios = {}
        for n in (64, 128):
            g = Grid(1, n)
            vals = []
            for seed in range(10):
                f = random_field(g, seed, kmax=16)
                idx = BesovIndex(-0.5, 2, 2)
                vals.append(lowpass_seminorm(f, idx) / homogeneous_norm(f, idx))
            ratios[n] = (min(vals), max(vals))
        assert ratios[64][0] > 0
        for a, b in zip(ratios[64], ratios[128]):
            assert abs(a - b) <= 0.1 * a


class TestScaling:
    def test_dilate_cos3(self, grid1, cos3):
        assert np.allclose(dilate(cos3).samples, cosine_mode(grid1, 6).samples, atol=1e-14)

    @pytest.mark.parametrize("s", [-1.0, 0.0, 0.7])
    def test_cos3_exact(self, cos3, s):
        r = scaling_check(cos3, BesovIndex(s, INF, INF))
        assert r.rel_error <= 1e-12
        assert r.expected == 2.0**s

    @given(seed=seeds, s=st.floats(-2, 2), q=exps, dim=st.integers(1, 2))
    def test_band_limited_l2(self, seed, s, q, dim):
        # below N/4: a top mode at exactly N/4 would land on Nyquist after dilation
        f = random_field(Grid(dim, 64), seed, kmax=15)
        assert scaling_check(f, BesovIndex(s, 2, q)).rel_error <= 1e-12

    def test_needs_resolution(self):
        with pytest.raises(InvalidParameterError):
            scaling_check(cosine_mode(Grid(1, 8), 1), BesovIndex(0, 2, 2))


def test_lq_combine():
    assert lq_combine([3.0, 4.0], 2) == 5.0
    assert lq_combine([3.0, 4.0], INF) == 4.0
    assert lq_combine([], 1) == 0.0
