import math

import numpy as np
import pytest

import spinboson as sb
from spinboson import BathSpec, DomainError, FitError, ModelSpec
from spinboson.analytic import TimeGrid, evaluate_closed
from spinboson.asymptotics import (
    CrossoverKind,
    IntegerProximity,
    OscillationLaw,
    Regime,
    crossover_time,
    envelope_points,
    fit_power_law,
    locate_crossover,
    long_time_c,
    long_time_p,
    short_time_coeffs,
)

SQRT_PI = math.sqrt(math.pi)


def model(s, a):
    return ModelSpec(BathSpec(s, a, 1.0))


class TestIntegerProximity:
    def test_fields(self):
        p = IntegerProximity.of(2.3)
        assert p.nearest_integer == 2 and p.parity == "even"
        assert p.distance == pytest.approx(0.3)

    def test_exact_detection(self):
        assert IntegerProximity.of(3.0).is_integer
        assert IntegerProximity.of(3.0 + 5e-13).is_integer
        assert not IntegerProximity.of(3.0 + 1e-11).is_integer


class TestShortTime:
    def test_ohmic(self):
        assert short_time_coeffs(model(1.0, 1.0)) == (0.5, 1.0)

    def test_decoupled(self):
        assert short_time_coeffs(model(2.0, 0.0)) == (0.0, 0.0)

    def test_subohmic_frozen(self):
        c_p, c_c = short_time_coeffs(model(0.5, 1.0))
        # c_P = s A Gamma(s)/2 = Gamma(0.5)/4; c_C = A G (A G + s)/2
        assert c_p == pytest.approx(SQRT_PI / 4.0, rel=1e-14)
        assert c_c == pytest.approx(0.5 * SQRT_PI * (SQRT_PI + 0.5), rel=1e-14)
        assert c_c == pytest.approx(2.0139097895212756, rel=1e-13)

    @pytest.mark.parametrize("s,a", [(1.0, 0.8), (1.0, 2.0), (0.5, 1.0), (2.5, 1.0)])
    def test_against_quadratic_fit(self, s, a):
        bath = BathSpec(s, a, 1.0)
        ts = np.geomspace(1e-4, 1e-2, 50)
        g = sb.gamma_closed(bath, ts)
        ph = sb.phase_integral_closed(bath, ts)
        one_m_p = -np.expm1(-g)
        one_m_c = -np.expm1(-g) * np.cos(ph) + 2.0 * np.sin(0.5 * ph) ** 2
        c_p, c_c = short_time_coeffs(model(s, a))
        assert np.polyfit(ts * ts, one_m_p, 1)[0] == pytest.approx(c_p, rel=5e-3)
        assert np.polyfit(ts * ts, one_m_c, 1)[0] == pytest.approx(c_c, rel=5e-3)

    def test_rejects_biased_model(self):
        with pytest.raises(DomainError):
            short_time_coeffs(ModelSpec(BathSpec(1, 1, 1), epsilon=0.5))


class TestLongTimeP:
    def test_ohmic(self):
        rep = long_time_p(model(1.0, 0.8))
        assert rep.regime is Regime.OHMIC_GENERIC
        assert rep.exponent == -0.8 and rep.plateau == 0.0

    def test_subohmic_rate(self):
        rep = long_time_p(model(0.5, 1.0))
        assert rep.regime is Regime.SUB_OHMIC
        assert rep.exponent == 0.5
        # alpha_1 = -Gamma(-1/2) sin(pi/4) = 2 sqrt(pi) / sqrt(2)
        assert rep.amplitude == pytest.approx(2.5066282746310005, rel=1e-13)

    def test_superohmic_plateau(self):
        rep = long_time_p(model(2.5, 1.0))
        assert rep.regime is Regime.SUPER_OHMIC_GENERIC
        assert rep.plateau == pytest.approx(math.exp(-sb.gamma_fn(1.5)), rel=1e-14)
        assert rep.exponent == -1.5

    def test_even_s_branch(self):
        rep = long_time_p(model(2.0, 1.0))
        assert rep.regime is Regime.SUPER_OHMIC_EVEN_S
        assert rep.exponent == -2.0
        # alpha_2 = A Gamma(2) (-1)^1 = -1: approach from above
        assert rep.amplitude == pytest.approx(-1.0, rel=1e-14)
        assert rep.crossover == math.inf

    def test_odd_s_uses_generic_branch(self):
        rep = long_time_p(model(3.0, 1.0))
        assert rep.regime is Regime.SUPER_OHMIC_GENERIC
        assert rep.exponent == -2.0
        # sin(3 pi/2) = -1 so alpha_1 = Gamma(2) = 1
        assert rep.amplitude == pytest.approx(1.0, rel=1e-13)


class TestLongTimeC:
    def test_odd_A_anomaly(self):
        rep = long_time_c(model(1.0, 1.0))
        assert rep.regime is Regime.OHMIC_ODD_A
        assert rep.exponent == -2.0 and rep.amplitude == 1.0
        assert rep.crossover == math.inf

    def test_even_A(self):
        rep = long_time_c(model(1.0, 2.0))
        assert rep.regime is Regime.OHMIC_GENERIC
        assert rep.exponent == -2.0
        assert rep.amplitude == pytest.approx(math.cos(math.pi), rel=1e-12)

    def test_generic_superohmic_oscillation(self):
        rep = long_time_c(model(2.5, 1.0))
        assert rep.osc_law is OscillationLaw.POWER_ONE_MINUS_S
        # w1 = Gamma(1.5) cos(1.25 pi)
        assert rep.osc_coefficient == pytest.approx(-0.62665706865775013, rel=1e-13)

    def test_odd_s_oscillation(self):
        rep = long_time_c(model(3.0, 1.0))
        assert rep.regime is Regime.SUPER_OHMIC_ODD_S
        assert rep.osc_law is OscillationLaw.POWER_MINUS_S
        assert rep.osc_coefficient == pytest.approx(sb.gamma_fn(3.0), rel=1e-13)

    def test_subohmic_frequency_law(self):
        # the oscillation argument grows as (Bt)^(1-s) for s < 1: the
        # instantaneous frequency d/dt ~ t^-s decreases with t
        rep = long_time_c(model(0.5, 1.0))
        assert rep.osc_law is OscillationLaw.POWER_ONE_MINUS_S
        w = rep.osc_coefficient
        t = np.array([1e4, 1e6, 1e8])
        inst_freq = np.abs(w) * np.abs(1 - 0.5) * t ** -0.5
        assert np.all(np.diff(inst_freq) < 0)


class TestCrossover:
    def test_ohmic_odd_a_value(self):
        bt = crossover_time(model(1.0, 0.8), CrossoverKind.OHMIC_ODD_A)
        assert bt == pytest.approx(2.4621468297402027, rel=1e-13)

    def test_sentinels_at_integers(self):
        assert crossover_time(model(1.0, 1.0), CrossoverKind.OHMIC_ODD_A) == math.inf
        assert crossover_time(model(2.0, 1.0), CrossoverKind.EVEN_S_P) == math.inf
        assert crossover_time(model(3.0, 1.0), CrossoverKind.ODD_S_PHI) == math.inf
        assert crossover_time(model(3.0, 1.0), CrossoverKind.ODD_S_C) == math.inf

    def test_even_s_value(self):
        bt = crossover_time(model(2.5, 1.0), CrossoverKind.EVEN_S_P)
        assert bt == pytest.approx(2.0 / 3.0, rel=1e-13)

    def test_odd_s_value(self):
        bt = crossover_time(model(2.9, 1.0), CrossoverKind.ODD_S_C)
        assert bt == pytest.approx(1.9 * abs(math.tan(1.45 * math.pi)), rel=1e-12)


class TestFitPowerLaw:
    def grid(self):
        return TimeGrid.log(1e1, 1e5, 120)

    def test_ohmic_exponent(self):
        series = evaluate_closed(model(1.0, 0.8), self.grid())
        expo, amp, r2 = fit_power_law(series, (1e2, 1e4))
        assert expo == pytest.approx(-0.8, abs=1e-2)
        assert r2 > 0.999999

    def test_plateau_subtracted_odd_s(self):
        grid = TimeGrid.log(1e2, 1e4, 100)
        series = evaluate_closed(model(3.0, 1.0), grid)
        expo, amp, _ = fit_power_law(series, (1e2, 1e4), subtract_plateau=True)
        assert expo == pytest.approx(-2.0, abs=2e-2)

    def test_degenerate_input_raises(self):
        # plateau-subtracted constant series -> exact zeros -> error
        grid = TimeGrid.log(1.0, 100.0, 20)
        series = evaluate_closed(model(1.0, 0.0), grid)  # P_x identically 1
        with pytest.raises(FitError):
            fit_power_law(series, (1.0, 100.0), subtract_plateau=True, plateau=1.0)

    def test_too_few_points(self):
        series = evaluate_closed(model(1.0, 1.0), TimeGrid.log(1.0, 100.0, 20))
        with pytest.raises(FitError):
            fit_power_law(series, (1.0, 1.5))

    def test_negative_amplitude_sign(self):
        # C_x(s=1, A=2) ~ cos(pi) (Bt)^-2 = -(Bt)^-2
        series = evaluate_closed(model(1.0, 2.0), self.grid())
        expo, amp, _ = fit_power_law(series, (1e2, 1e4), field="c_x")
        assert expo == pytest.approx(-2.0, abs=2e-2)
        assert amp == pytest.approx(-1.0, abs=2e-2)


class TestBranchContinuity:
    @pytest.mark.parametrize("ds", [1e-3, -1e-3])
    def test_near_even_s(self, ds):
        # at s = 2 +- 1e-3 and Bt well below the crossover (~636), the
        # even-s law P0 exp(-alpha2 (Bt)^-s) tracks the exact approach
        s = 2.0 + ds
        m = model(s, 1.0)
        p0 = math.exp(-sb.gamma_fn(s - 1.0))
        alpha2 = sb.gamma_fn(s) * (-1.0)  # (-1)^(s/2) at nearest even s = 2
        bt_cr = crossover_time(m, CrossoverKind.EVEN_S_P)
        assert bt_cr > 500.0
        # the generic term contributes ~Bt/Bt_cr relatively, so "well
        # below" means Bt <~ Bt_cr/30 for 5% agreement
        for bt in (10.0, 20.0):
            exact = sb.p_x(m, bt) - p0
            even_pred = p0 * math.expm1(-alpha2 * bt ** -s)
            assert even_pred == pytest.approx(exact, rel=5e-2)

    @pytest.mark.parametrize("ds", [1e-3, -1e-3])
    def test_generic_dominates_beyond_crossover(self, ds):
        s = 2.0 + ds
        m = model(s, 1.0)
        p0 = math.exp(-sb.gamma_fn(s - 1.0))
        rep = long_time_p(m)
        for bt in (1e5, 1e6):
            exact = sb.p_x(m, bt) - p0
            generic_pred = p0 * math.expm1(-rep.amplitude * bt ** (1.0 - s))
            assert generic_pred == pytest.approx(exact, rel=5e-2)


class TestEnvelopeAndDetector:
    def test_envelope_extraction(self):
        t = np.linspace(0.1, 20.0, 2000)
        values = np.exp(-0.1 * t) * np.cos(3.0 * t)
        te, ve = envelope_points(t, values)
        assert len(te) >= 8
        # peaks of e^{-at} cos(wt) sit a factor w/sqrt(a^2+w^2) below the
        # pure exponential: ~5.6e-4 here, plus sampling offset
        assert np.allclose(ve, np.exp(-0.1 * te), rtol=3e-3)

    def test_detector_near_odd_A(self):
        m = model(1.0, 0.8)
        series = evaluate_closed(m, TimeGrid.log(1e-1, 1e3, 241))
        located = locate_crossover(series.times, series.c_x)
        expected = crossover_time(m, CrossoverKind.OHMIC_ODD_A)
        assert expected / 2.0 <= located <= expected * 2.0
