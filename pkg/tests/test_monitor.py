import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpns.errors import InvalidInputError, InvalidParameterError
from lpns.fields import cosine_mode, taylor_green_vorticity
from lpns.monitor import (
    COLUMNS,
    MonitorRow,
    MonitorSeries,
    accumulate,
    closed_form_taylor_green_M,
    criterion_integrand,
    enstrophy_inequality_check,
    gronwall_check,
)
from lpns.solver import RunConfig, run
from lpns.spectral import Field, Grid


def series_from(ts, integrands, alpha=0.5, **cols):
    s = MonitorSeries(alpha)
    for i, (t, v) in enumerate(zip(ts, integrands)):
        extra = {k: float(c[i]) for k, c in cols.items()}
        accumulate(s, MonitorRow(t, integrand=v, **extra))
    return s


class TestIntegrand:
    @pytest.mark.parametrize("t", [0.0, 0.3, 1.0])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_taylor_green(self, t, alpha):
        w = taylor_green_vorticity(Grid(2, 32), t)
        b_low, b_high, integrand = criterion_integrand(w, alpha)
        b = 2 * math.exp(-2 * t)
        assert b_low == pytest.approx(b, rel=1e-14)
        assert b_high == pytest.approx(b, rel=1e-14)
        assert integrand == pytest.approx(b ** (2 / (2 - alpha)) + b ** (2 / (1 - alpha)), rel=1e-13)

    def test_zero(self):
        g = Grid(2, 16)
        assert criterion_integrand(Field(g, np.zeros(g.shape)), 0.5) == (0.0, 0.0, 0.0)

    def test_single_mode(self):
        w = cosine_mode(Grid(2, 32), (3, 0))
        b_low, b_high, integrand = criterion_integrand(w, 0.5)
        assert b_low == pytest.approx(2**-0.5, rel=1e-14)
        assert b_high == pytest.approx(2**-1.5, rel=1e-14)
        assert integrand == pytest.approx(2 ** (-2 / 3) + 2**-6, rel=1e-14)

    @pytest.mark.parametrize("k,j0", [((3, 0), 1), ((6, 0), 2), ((0, 11), 3), ((2, 2), 1)])
    def test_ratio_law(self, k, j0):
        b_low, b_high, _ = criterion_integrand(cosine_mode(Grid(2, 64), k), 0.3)
        assert b_low / b_high == pytest.approx(2.0**j0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(InvalidParameterError):
            criterion_integrand(taylor_green_vorticity(Grid(2, 16)), alpha)


class TestAccumulate:
    def test_constant(self):
        ts = np.linspace(0.0, 2.0, 9)
        s = series_from(ts, [3.0] * 9)
        assert s.rows[-1].M == 6.0

    def test_single_sample(self):
        assert series_from([0.5], [7.0]).rows[0].M == 0.0

    @pytest.mark.parametrize("second", [0.0, -1.0])
    def test_monotone_time(self, second):
        s = series_from([0.0], [1.0])
        with pytest.raises(InvalidInputError):
            accumulate(s, MonitorRow(second, integrand=1.0))

    @given(st.lists(st.floats(0, 1e6), min_size=1, max_size=50))
    def test_nondecreasing(self, vals):
        s = series_from(np.arange(len(vals)) * 0.1, vals)
        m = s.column("M")
        assert m[0] == 0.0 and np.all(np.diff(m) >= 0)

    def test_columns(self):
        assert COLUMNS == ("t", "energy", "enstrophy", "grad_enstrophy", "b_low", "b_high", "integrand", "M", "energy_residual")

    def test_trapezoid_second_order_on_taylor_green(self):
        errs = []
        for k in (1, 2):
            res = run(RunConfig(n=16, dt=0.02 / k, t_end=0.4, sample_every=1))
            errs.append(abs(res.series.rows[-1].M - closed_form_taylor_green_M(0.5, 0.4)))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_closed_form_value():
    expected = 2 ** (4 / 3) * (1 - math.exp(-8 / 3)) / (8 / 3) + 16 * (1 - math.exp(-8)) / 8
    assert closed_form_taylor_green_M(0.5, 1.0) == pytest.approx(expected, rel=1e-15)
    assert closed_form_taylor_green_M(0.5, 1.0) == pytest.approx(2.8786121, abs=1e-7)


class TestGronwall:
    def test_taylor_green(self):
        res = run(RunConfig(n=16, dt=0.01, t_end=0.2))
        rep = gronwall_check(res.series, 2 * math.pi)
        assert rep.C == 0.0 and rep.bound_holds and not rep.unbounded
        assert rep.cz_max_rel_dev <= 1e-12

    def test_zero(self):
        res = run(RunConfig(n=16, dt=0.01, t_end=0.05, initial="zero"))
        rep = gronwall_check(res.series, 0.0)
        assert rep.C == 0.0 and rep.bound_holds

    def test_fitted_growth(self):
        ts = [0.0, 1.0, 2.0]
        # ||grad u|| = sqrt(enstrophy) = e at M = 1
        s = series_from(ts, [1.0, 1.0, 1.0], enstrophy=[1.0, math.e**2, math.e**2])
        rep = gronwall_check(s, 1.0)
        assert rep.C == pytest.approx(1.0) and rep.bound_holds

    def test_unbounded_flag(self):
        s = series_from([0.0, 1.0], [0.0, 0.0], enstrophy=[1.0, 4.0])
        rep = gronwall_check(s, 1.0)
        assert rep.unbounded and not rep.bound_holds

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            gronwall_check(MonitorSeries(0.5), 1.0)


class TestEnstrophy:
    def test_taylor_green(self):
        # the difference quotient is only below the noise floor at fine sampling
        res = run(RunConfig(n=16, dt=1e-3, t_end=0.2))
        rep = enstrophy_inequality_check(res.series)
        assert rep.C == 0.0 and rep.flagged == ()

    def test_zero(self):
        res = run(RunConfig(n=16, dt=0.01, t_end=0.05, initial="zero"))
        rep = enstrophy_inequality_check(res.series)
        assert rep.C == 0.0 and np.all(rep.lhs == 0.0)

    def test_needs_three_samples(self):
        with pytest.raises(InvalidInputError):
            enstrophy_inequality_check(series_from([0.0, 1.0], [1.0, 1.0]))

    def test_flags_zero_rhs(self):
        ts = [0.0, 1.0, 2.0]
        s = series_from(ts, [0.0, 0.0, 0.0], enstrophy=[1.0, 1.0, 1.0], grad_enstrophy=[1.0, 1.0, 1.0])
        assert enstrophy_inequality_check(s).flagged == (0, 1, 2)

    def test_fit(self):
        ts = [0.0, 1.0, 2.0]
        s = series_from(ts, [2.0, 2.0, 2.0], enstrophy=[1.0, 1.0, 1.0], grad_enstrophy=[1.0, 1.0, 1.0])
        assert enstrophy_inequality_check(s).C == pytest.approx(0.5)


class TestEnergyResidual:
    def test_random_2d(self):
        res = run(RunConfig(n=32, dt=1e-3, t_end=0.1, initial="random", seed=2))
        assert np.max(np.abs(res.series.column("energy_residual"))) <= 1e-6
        assert res.series.rows[0].energy_residual == 0.0

    def test_sample_every_still_accurate(self):
        res = run(RunConfig(n=32, dt=1e-3, t_end=0.1, initial="random", seed=2, sample_every=5))
        assert abs(res.series.rows[-1].energy_residual) <= 1e-6

    def test_enstrophy_balance_2d(self):
        # 1/2 d/dt ||w||^2 = -||grad w||^2 when there is no stretching
        res = run(RunConfig(n=32, dt=1e-3, t_end=0.05, initial="random", seed=4))
        s = res.series
        half = 0.5 * np.gradient(s.column("enstrophy"), s.column("t"), edge_order=2)
        g = s.column("grad_enstrophy")
        # second-order difference quotient on modes decaying at rate ~50
        assert np.max(np.abs(half + g) / g) <= 1e-3
        assert np.max(np.abs(s.column("stretching"))) <= 1e-10 * np.max(g)
