import numpy as np
import pytest

from exceptions import TooCloseToObstacle
from geometry.grid import rasterize
from geometry.obstacles import Empty
from theory.radial import (
    bubble_energy, distance_to_obstacle, embed_bubble, find_R0, first_integral_half_length,
    min_half_length_1d, minimal_zero_radius, radial_summary, solve_bubble,
)


@pytest.fixture(scope='module')
def R0(nl):
    return find_R0(nl, 2)


@pytest.fixture(scope='module')
def bubble(nl, R0):
    return solve_bubble(nl, 1.25 * R0, 2)


class TestBubbles:

    def test_no_bubble_on_small_ball(self, nl):
        assert solve_bubble(nl, 0.5) is None

    @pytest.mark.parametrize('kwargs', [{'R': 0.0}, {'R': -1.0}, {'R': 5.0, 'N_dim': 0},
                                        {'R': 5.0, 'branch': 'middle'}])
    def test_bad_arguments(self, nl, kwargs):
        with pytest.raises(ValueError):
            solve_bubble(nl, **kwargs)

    def test_R0_brackets_existence(self, nl, R0):
        assert 1.0 < R0 < 50.0
        assert solve_bubble(nl, R0) is not None
        assert solve_bubble(nl, R0 - 0.01) is None

    def test_R0_matches_minimal_zero_radius(self, nl, R0):
        _, r_min = minimal_zero_radius(nl, 2)
        assert R0 == pytest.approx(r_min, abs=2e-3)

    def test_bubble_shape(self, nl, bubble, R0):
        assert bubble.R == pytest.approx(1.25 * R0)
        assert bubble.branch == 'upper'
        assert nl.alpha < bubble.center_value < 1.0
        assert bubble.psi[-1] == 0.0
        assert np.all(np.diff(bubble.psi) <= 1e-12)
        assert float(bubble(bubble.R + 1.0)) == 0.0

    def test_lower_branch_sits_below(self, nl, bubble, R0):
        lower = solve_bubble(nl, 1.25 * R0, 2, branch='lower')
        assert lower is not None
        assert lower.center_value < bubble.center_value

    def test_energy_property(self, bubble):
        assert bubble.energy == pytest.approx(bubble_energy(bubble))
        assert np.isfinite(bubble.energy)

    def test_upper_branch_above_critical_radius(self, nl, R0):
        centers = []
        for scale in (1.05, 1.2, 1.4, 1.7, 2.0):
            result = solve_bubble(nl, scale * R0, 2)
            assert result is not None
            centers.append(result.center_value)
        assert np.all(np.diff(centers) >= -1e-9)

    def test_energy_negative_on_large_ball(self, nl, R0):
        assert solve_bubble(nl, 2.0 * R0, 2).energy < 0.0

    def test_summary_keys(self, nl):
        summary = radial_summary(nl, 2)
        assert set(summary) == {'alpha', 'N_dim', 'critical_center_value', 'critical_radius'}
        assert nl.alpha < summary['critical_center_value'] < 1.0


class TestOneDimensional:

    def test_half_length_infinite_below_theta(self, nl):
        assert first_integral_half_length(nl, 0.5 * nl.theta) == np.inf
        assert first_integral_half_length(nl, 1.0) == np.inf

    def test_half_length_blows_up_near_theta(self, nl):
        psi0, L = min_half_length_1d(nl)
        assert nl.theta < psi0 < 1.0
        assert first_integral_half_length(nl, nl.theta + 1e-4) > L

    def test_shooting_agrees_with_first_integral(self, nl):
        _, L = min_half_length_1d(nl)
        assert find_R0(nl, 1) == pytest.approx(L, rel=1e-2)


class TestEmbedding:

    def test_distance_on_empty_grid(self):
        grid = rasterize(Empty(), 0.5, extent=(-5.0, 5.0, 4.0))
        assert distance_to_obstacle(grid, (0.0, 2.0)) == np.inf

    def test_distance_to_slit_wall(self, slit_grid):
        expected = np.hypot(3.0625, 0.1875)
        assert distance_to_obstacle(slit_grid, (-3.0, 2.0)) == pytest.approx(expected)

    def test_embed_bubble(self, bubble):
        side = 2.0 * np.ceil(bubble.R + 2.0)
        grid = rasterize(Empty(), 0.25, extent=(-side, side, side))
        field = embed_bubble(bubble, (0.0, side / 2.0), grid)
        assert field.max() == pytest.approx(bubble.center_value, abs=2e-2)
        assert field.min() == 0.0
        assert field.max() <= 1.0

    def test_too_close(self, bubble, slit_grid):
        with pytest.raises(TooCloseToObstacle):
            embed_bubble(bubble, (-1.0, 2.0), slit_grid)
