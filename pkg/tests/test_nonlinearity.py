import time

import numpy as np
import pytest

from exceptions import DeltaTooLarge, TimeOutOfRange
from theory.nonlinearity import (
    Nonlinearity, barrier_constants, check_barrier_constants, eval_f, eval_super_sub, lambda_exponent,
    solve_H, solve_rho, solve_wave_profile,
)
from theory.nonlinearity import _speed_shot


class TestNonlinearity:

    def test_cubic_values(self, nl):
        assert eval_f(nl, -0.5) == pytest.approx(0.125)
        for zero in (0.0, nl.alpha, 1.0):
            assert eval_f(nl, zero) == pytest.approx(0.0, abs=1e-15)
        assert eval_f(nl, 0.5) > 0.0
        assert eval_f(nl, 0.1) < 0.0

    def test_linear_extension_outside_unit_interval(self, nl):
        assert eval_f(nl, 1.5) == pytest.approx(nl.df1 * 0.5)
        assert nl.df0 == pytest.approx(-nl.alpha)
        assert nl.df1 == pytest.approx(-(1.0 - nl.alpha))

    def test_primitive(self, nl):
        assert nl.F1 == pytest.approx(1.0 / 12.0 - nl.alpha / 6.0)
        s = np.linspace(-0.5, 1.5, 41)
        eps = 1e-6
        slope = (nl.F(s + eps) - nl.F(s - eps)) / (2.0 * eps)
        assert np.allclose(slope, nl.f(s), atol=1e-8)

    def test_theta_and_delta0(self, nl):
        assert nl.alpha < nl.theta < 1.0
        assert nl.F(nl.theta) == pytest.approx(0.0, abs=1e-12)
        assert 0.0 < nl.delta0 < nl.alpha
        assert nl.df(nl.delta0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize('alpha', [0.0, 0.5, 0.7, -0.1])
    def test_alpha_out_of_range(self, alpha):
        with pytest.raises(ValueError):
            Nonlinearity(alpha=alpha)

    def test_from_config_ignores_none(self):
        assert Nonlinearity.from_config(alpha=None).alpha == Nonlinearity.from_config().alpha
        assert Nonlinearity.from_config(alpha=0.3).alpha == 0.3

    def test_stable_zero(self, nl):
        assert nl.stable_zero(0.01) == pytest.approx(1.0 - 0.01 / 0.75, abs=2e-3)


class TestBarrierConstants:

    def test_reference_triple_is_valid(self, nl):
        ok, scan_min = check_barrier_constants(nl, 0.2, 0.2, 0.0015)
        assert ok
        assert scan_min >= 0.0015

    def test_sigma_too_large_is_rejected(self, nl):
        ok, _ = check_barrier_constants(nl, 0.2, 0.2, 0.01)
        assert not ok

    def test_search_returns_valid_triple(self, nl):
        delta, mu, sigma = barrier_constants(nl)
        assert 0.0 < delta <= nl.alpha
        assert mu > 0.0 and sigma > 0.0
        assert check_barrier_constants(nl, delta, mu, sigma)[0]

    @pytest.mark.parametrize('alpha', [0.1, 0.25, 0.4])
    def test_check_accepts_searched_triple(self, alpha):
        nl = Nonlinearity(alpha=alpha)
        delta, mu, sigma = barrier_constants(nl)
        ok, scan_min = check_barrier_constants(nl, delta, mu, sigma)
        assert ok
        assert scan_min == pytest.approx(sigma)

    def test_small_mu_is_admissible(self, nl):
        # mu below |f'(1)| / 4 still bounds -F from below
        ok, _ = check_barrier_constants(nl, 0.25, 0.15, 0.002)
        assert ok


class TestWaveProfile:

    @pytest.mark.parametrize('alpha', [0.1, 0.25, 0.4])
    def test_speed_matches_closed_form(self, alpha):
        start = time.perf_counter()
        wp = solve_wave_profile(Nonlinearity(alpha=alpha))
        elapsed = time.perf_counter() - start
        closed_form = (1.0 - 2.0 * alpha) / np.sqrt(2.0)
        assert abs(wp.c - closed_form) / closed_form <= 0.02
        assert elapsed < 5.0

    @pytest.mark.parametrize('c, expected', [(0.0, 1), (0.2, 1), (0.5, -1), (0.95, -1)])
    def test_speed_shot_sides(self, nl, c, expected):
        assert _speed_shot(nl, c) == expected

    def test_profile_shape(self, nl, wave):
        assert float(wave(0.0)) == pytest.approx(nl.alpha, abs=1e-6)
        assert np.all(np.diff(wave.phi) <= 1e-12)
        assert wave.phi[0] > 1.0 - 1e-6
        assert wave.phi[-1] < 1e-6
        assert wave.residual <= 1e-6

    def test_tails_extend_monotonically(self, wave):
        z = np.array([-80.0, -60.0, 60.0, 80.0])
        values = wave(z)
        assert np.all(np.diff(values) <= 0.0)
        assert np.all((values >= 0.0) & (values <= 1.0))

    def test_lambda_exponent(self, nl, wave):
        assert lambda_exponent(nl, wave.c) == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-5)


class TestHalfLineProfiles:

    def test_H_slope_at_zero(self, nl):
        H = solve_H(nl)
        assert H.slope0 == pytest.approx(-np.sqrt(1.0 / 12.0), abs=1e-7)
        assert float(H(0.5)) == 0.0
        assert float(H(-39.0)) == pytest.approx(1.0, abs=1e-4)
        assert H.first_integral_residual <= 1e-6
        assert H.ode_residual <= 1e-6

    def test_H_is_monotone(self, nl):
        H = solve_H(nl)
        assert np.all(np.diff(H.values) <= 1e-12)
        z = np.linspace(-45.0, 2.0, 400)
        assert np.all(np.diff(H(z)) <= 1e-12)

    def test_rho_is_monotone(self, nl):
        rho = solve_rho(nl, 0.01)
        assert np.all(np.diff(rho.values) <= 1e-12)
        assert rho.first_integral_residual <= 1e-6
        assert rho.ode_residual <= 1e-6

    def test_rho_plateau(self, nl):
        rho = solve_rho(nl, 0.01)
        assert rho.b_root == pytest.approx(0.9866, abs=2e-3)
        assert float(rho(0.0)) == pytest.approx(0.0, abs=1e-12)
        assert np.all(rho.values <= rho.b_root + 1e-9)
        assert np.all(rho.values >= -1e-12)

    def test_delta_too_large(self, nl):
        with pytest.raises(DeltaTooLarge):
            solve_rho(nl, 0.5)


class TestSuperSubPair:

    def test_horizon_identity(self, pair):
        assert pair.c * pair.T + float(pair.xi(pair.T)) == pytest.approx(0.0, abs=1e-9)
        assert pair.T_prime <= pair.T

    def test_xi_is_increasing(self, pair):
        t = np.linspace(pair.T - 60.0, pair.T, 121)
        xi = pair.xi(t)
        assert np.all(np.diff(xi) > 0.0)
        assert np.all(xi > 0.0)

    def test_xi_closed_form(self, pair):
        t = np.linspace(pair.T - 40.0, pair.T - 0.5, 40)
        eps = 1e-6
        slope = (pair.xi(t + eps) - pair.xi(t - eps)) / (2.0 * eps)
        expected = pair.M1 * np.exp(pair.lambda_exp * (pair.c * t + pair.xi(t)))
        assert np.allclose(slope, expected, rtol=1e-4)
        assert np.allclose(pair.xi_prime(t), expected, rtol=1e-12)
        early = pair.T - 40.0
        assert float(pair.xi(early)) == pytest.approx(
            pair.M1 * np.exp(pair.lambda_exp * pair.c * early) / (pair.lambda_exp * pair.c), rel=1e-3)

    def test_time_out_of_range(self, pair, wave):
        with pytest.raises(TimeOutOfRange):
            eval_super_sub(pair, wave, pair.T + 1.0, np.zeros(3))

    def test_ordering(self, pair, wave):
        x1 = np.linspace(-40.0, 10.0, 201)
        for t in (pair.T_prime - 40.0, pair.T_prime - 10.0, pair.T_prime):
            w_minus, w_plus = eval_super_sub(pair, wave, t, x1)
            assert np.all(w_minus <= w_plus + 1e-12)
            assert np.all(w_minus[x1 > 0.0] == 0.0)
            assert np.all(w_minus <= 1.0 + 1e-12)
