import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spinboson as sb
from spinboson import BathSpec, DomainError, ModelSpec
from spinboson.analytic import GridSpacing, TimeGrid, evaluate_closed

OHMIC = BathSpec(1.0, 1.0, 1.0)
GRID = TimeGrid(np.geomspace(1e-3, 1e2, 40), GridSpacing.LOG)


class TestTimeGrid:
    def test_log_constructor(self):
        g = TimeGrid.log(0.1, 10.0, 5)
        assert len(g) == 5 and g.spacing is GridSpacing.LOG

    def test_rejects_nonincreasing(self):
        with pytest.raises(DomainError):
            TimeGrid(np.array([0.0, 1.0, 1.0]))

    def test_log_requires_positive(self):
        with pytest.raises(DomainError):
            TimeGrid(np.array([0.0, 1.0]), GridSpacing.LOG)

    def test_immutable(self):
        g = TimeGrid.linear(0.0, 1.0, 3)
        with pytest.raises(ValueError):
            g.times[0] = 5.0


class TestGammaClosed:
    def test_ohmic_value(self):
        assert sb.gamma_closed(OHMIC, 1.0) == pytest.approx(
            0.34657359027997265, rel=1e-15
        )

    def test_zero_time_is_exactly_zero(self):
        for s in (0.3, 1.0, 1.0 + 3e-7, 2.5):
            assert sb.gamma_closed(BathSpec(s, 1.7, 2.0), 0.0) == 0.0

    def test_subohmic_value(self):
        # A*Gamma(-0.5)*(1 - 2^(1/4) cos(arctan(1)/2)), frozen via mpmath
        assert sb.gamma_closed(BathSpec(0.5, 1, 1), 1.0) == pytest.approx(
            0.34982607387843334, rel=1e-13
        )

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            sb.gamma_closed(OHMIC, -0.5)

    def test_tau_bath_rejected(self):
        with pytest.raises(DomainError):
            sb.gamma_closed(BathSpec(1, 1, 1, tau=0.5), 1.0)

    def test_decoupled_qubit(self):
        ts = np.geomspace(1e-2, 1e2, 10)
        assert np.all(sb.gamma_closed(BathSpec(1.5, 0.0, 1.0), ts) == 0.0)

    def test_nonnegative_everywhere(self):
        ts = np.geomspace(1e-8, 1e8, 200)
        for s in (0.3, 0.9, 1.0, 1.0 + 5e-7, 1.1, 2.0, 3.0):
            assert np.all(sb.gamma_closed(BathSpec(s, 1.0, 1.0), ts) >= 0.0)

    def test_exactly_linear_in_A(self):
        ts = np.geomspace(1e-3, 1e3, 50)
        for s in (0.5, 1.0, 2.5):
            g1 = sb.gamma_closed(BathSpec(s, 0.75, 1.0), ts)
            g2 = sb.gamma_closed(BathSpec(s, 1.5, 1.0), ts)
            assert np.array_equal(g2, 2.0 * g1)

    def test_extreme_times_no_overflow(self):
        # log-space evaluation holds up to Bt ~ 1e12
        for s in (0.3, 2.5, 6.0):
            g = sb.gamma_closed(BathSpec(s, 1.0, 1.0), 1e12)
            assert math.isfinite(g) and g >= 0


class TestPhaseIntegral:
    def test_ohmic_value(self):
        assert sb.phase_integral_closed(OHMIC, 1.0) == pytest.approx(
            math.pi / 4.0, rel=1e-15
        )

    def test_zero_time(self):
        assert sb.phase_integral_closed(BathSpec(2.2, 3.0, 1.5), 0.0) == 0.0

    def test_superohmic_vanishes_at_long_time(self):
        val = sb.phase_integral_closed(BathSpec(2.5, 1, 1), 1e9)
        assert abs(val) < 1e-12

    def test_ohmic_saturates_at_a_pi_over_2(self):
        val = sb.phase_integral_closed(BathSpec(1.0, 2.0, 1.0), 1e12)
        assert val == pytest.approx(2.0 * math.pi / 2.0, rel=1e-10)


class TestCorrelators:
    def test_px_ohmic(self):
        m = ModelSpec(OHMIC)
        assert sb.p_x(m, 1.0) == pytest.approx(2 ** -0.5, rel=1e-15)

    def test_px_at_zero_time(self):
        for eps in (0.0, 1.5):
            m = ModelSpec(BathSpec(0.7, 2.0, 1.0), epsilon=eps)
            assert sb.p_x(m, 0.0) == 1.0
            assert sb.c_x(m, 0.0) == 1.0

    def test_px_superohmic_plateau(self):
        # P_x(t -> inf) = exp(-A Gamma(s-1)) at s=2.5, A=1
        m = ModelSpec(BathSpec(2.5, 1.0, 1.0))
        assert sb.p_x(m, 1e10) == pytest.approx(
            math.exp(-sb.gamma_fn(1.5)), rel=1e-9
        )

    def test_cx_ohmic(self):
        m = ModelSpec(OHMIC)
        assert sb.c_x(m, 1.0) == pytest.approx(0.5, rel=1e-14)

    def test_phi_limits(self):
        # s=1, A=2: phi(inf) = cos(pi) = -1; s=2.5: phi(inf) = 1
        assert sb.phi_fn(BathSpec(1.0, 2.0, 1.0), 1e12) == pytest.approx(-1.0, abs=1e-10)
        assert sb.phi_fn(BathSpec(2.5, 1.0, 1.0), 1e12) == pytest.approx(1.0, abs=1e-12)
        assert sb.phi_fn(BathSpec(0.5, 1.0, 1.0), 0.0) == 1.0

    def test_temperature_rejected(self):
        with pytest.raises(DomainError):
            sb.p_x(ModelSpec(OHMIC, temperature=0.5), 1.0)

    def test_factorization_exact(self):
        m = ModelSpec(BathSpec(0.5, 1.0, 1.0))
        ts = GRID.times
        assert np.array_equal(
            sb.c_x(m, ts), sb.p_x(m, ts) * sb.phi_fn(m.bath, ts)
        )

    def test_eq19_identity_machine_precision(self):
        ts = np.geomspace(1e-3, 1e3, 120)
        cx = sb.c_x(ModelSpec(BathSpec(1.0, 1.0, 1.0)), ts)
        px = sb.p_x(ModelSpec(BathSpec(1.0, 2.0, 1.0)), ts)
        ulps = np.abs(cx - px) / np.spacing(np.abs(px))
        assert ulps.max() <= 4.0

    def test_biased_px_oscillates(self):
        m = ModelSpec(OHMIC, epsilon=3.0)
        assert sb.p_x(m, math.pi / 6.0) == pytest.approx(0.0, abs=1e-16)

    @given(eps=st.floats(0.01, 10.0), t=st.floats(0.0, 50.0))
    @settings(max_examples=150, deadline=None)
    def test_cx_even_in_bias(self, eps, t):
        plus = sb.c_x(ModelSpec(BathSpec(1.5, 1.0, 1.0), epsilon=eps), t)
        minus = sb.c_x(ModelSpec(BathSpec(1.5, 1.0, 1.0), epsilon=-eps), t)
        assert plus == minus

    @given(
        s=st.floats(0.2, 4.0), a=st.floats(0.0, 3.0), t=st.floats(0.0, 1e4)
    )
    @settings(max_examples=300, deadline=None)
    def test_bounds(self, s, a, t):
        bath = BathSpec(s, a, 1.0)
        m = ModelSpec(bath)
        g = sb.gamma_closed(bath, t)
        p = sb.p_x(m, t)
        assert g >= 0.0
        assert abs(sb.phi_fn(bath, t)) <= 1.0
        assert 0.0 <= p <= 1.0
        if g < 700.0:  # below the exp underflow threshold P_x > 0 strictly
            assert p > 0.0
        assert abs(sb.c_x(m, t)) <= 1.0


class TestOhmicLimitSwitch:
    def test_continuity_at_band(self):
        ts = np.geomspace(1e-2, 1e2, 25)
        g1 = sb.gamma_closed(BathSpec(1.0, 1.0, 1.0), ts)
        i1 = sb.phase_integral_closed(BathSpec(1.0, 1.0, 1.0), ts)
        for ds in (1e-7, -1e-7):
            bath = BathSpec(1.0 + ds, 1.0, 1.0)
            g = sb.gamma_closed(bath, ts)
            i = sb.phase_integral_closed(bath, ts)
            assert np.max(np.abs(g - g1) / g1) < 1e-5
            assert np.max(np.abs(i - i1) / np.abs(i1)) < 1e-5

    def test_band_edges_accurate(self):
        # both the expansion (inside |s-1| < 1e-6) and the direct branch
        # (just outside) match a 30-digit evaluation of the exact formula
        import mpmath as mp

        mp.mp.dps = 30
        ts = np.geomspace(1e-2, 1e2, 9)
        for ds in (0.99e-6, 1.01e-6, -0.99e-6, -1.01e-6):
            s = 1.0 + ds
            got = sb.gamma_closed(BathSpec(s, 1.0, 1.0), ts)
            s_mp = mp.mpf(s)  # exact binary value the package saw
            for i, t in enumerate(ts):
                x = mp.mpf(float(t))
                ref = mp.gamma(s_mp - 1) * (
                    1 - (1 + x * x) ** ((1 - s_mp) / 2)
                    * mp.cos((s_mp - 1) * mp.atan(x))
                )
                assert abs(got[i] - float(ref)) / float(ref) < 1e-9


class TestOracleEquivalence:
    """Closed forms against direct quadrature of the defining integrals."""

    def test_dense_grid_to_bt_100(self):
        ts = np.geomspace(1e-3, 1e2, 25)
        worst = 0.0
        for s in (0.3, 0.9, 1.0, 1.1, 2.0, 3.0):
            bath = BathSpec(s, 1.0, 1.0)
            model = ModelSpec(bath)
            gc = sb.gamma_closed(bath, ts)
            pc = sb.phase_integral_closed(bath, ts)
            for i, t in enumerate(ts):
                gq = sb.gamma_quadrature(model, float(t))
                pq = sb.phase_quadrature(bath, float(t))
                worst = max(
                    worst,
                    abs(gc[i] - gq) / (1 + abs(gq)),
                    abs(pc[i] - pq) / (1 + abs(pq)),
                )
        assert worst < 1e-8

    def test_long_time_decade_to_bt_1000(self):
        worst = 0.0
        for s in (0.3, 1.0, 2.5):
            bath = BathSpec(s, 1.0, 1.0)
            model = ModelSpec(bath)
            for t in np.geomspace(1e2, 1e3, 5):
                gq = sb.gamma_quadrature(model, float(t))
                pq = sb.phase_quadrature(bath, float(t))
                worst = max(
                    worst,
                    abs(sb.gamma_closed(bath, float(t)) - gq) / (1 + abs(gq)),
                    abs(sb.phase_integral_closed(bath, float(t)) - pq) / (1 + abs(pq)),
                )
        assert worst < 1e-8

    def test_nonzero_B(self):
        bath = BathSpec(1.7, 0.8, 3.5)
        model = ModelSpec(bath)
        for t in (0.1, 2.0, 30.0):
            assert sb.gamma_closed(bath, t) == pytest.approx(
                sb.gamma_quadrature(model, t), rel=1e-9, abs=1e-10
            )


class TestSeries:
    def test_columns_aligned(self):
        series = evaluate_closed(ModelSpec(OHMIC), GRID)
        assert len(series.points) == len(GRID)
        p0 = series.points[0]
        assert p0.t == GRID.times[0]
        assert p0.c_x == series.c_x[0]

    def test_source_label(self):
        series = evaluate_closed(ModelSpec(OHMIC), GRID)
        assert series.source is sb.SeriesSource.CLOSED_FORM
