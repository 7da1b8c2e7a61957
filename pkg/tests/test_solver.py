import numpy as np
import pandas as pd
import pytest

from exceptions import CFLViolation, HorizonReached
from geometry.grid import GridDomain, ScalarField, rasterize
from geometry.obstacles import Empty
from simulation.solver import (
    StepConfig, compare_evolutions, front_position, front_speed, laplacian, probe_mask, run_to_steady, step,
)


class TestStepConfig:

    def test_default_dt_is_the_monotone_bound(self, small_empty_grid):
        cfg = StepConfig.for_grid(small_empty_grid)
        assert cfg.dt == pytest.approx(0.8 * 0.25 / 4.0)
        cfg.check(small_empty_grid.h)

    def test_overrides_skip_none(self, small_empty_grid):
        cfg = StepConfig.for_grid(small_empty_grid, t_max=None, steady_tol=1e-6)
        assert cfg.steady_tol == 1e-6
        assert cfg.t_max > 0

    def test_cfl_violation(self, nl, small_empty_grid):
        cfg = StepConfig.for_grid(small_empty_grid, dt=0.1)
        with pytest.raises(CFLViolation):
            cfg.check(small_empty_grid.h)
        with pytest.raises(CFLViolation):
            step(ScalarField.zeros(small_empty_grid), nl, cfg)

    def test_cfl_factor_above_bound(self, small_empty_grid):
        with pytest.raises(CFLViolation):
            StepConfig.for_grid(small_empty_grid, cfl_factor=0.9).check(small_empty_grid.h)


class TestLaplacian:

    def test_constant_field(self, slit_grid):
        values = np.where(slit_grid.fluid, 0.3, 0.0)
        lap = laplacian(values, slit_grid)
        assert np.allclose(lap[slit_grid.fluid], 0.0)

    def test_quadratic_interior(self):
        grid = rasterize(Empty(), 0.5, extent=(-5.0, 5.0, 2.0))
        X, _ = grid.centers()
        lap = laplacian(X ** 2, grid)
        assert np.allclose(lap[1:-1, :], 2.0)

    def test_no_flux_through_closed_faces(self):
        fluid = np.ones((4, 3), dtype=bool)
        fluid[1, :] = False
        grid = GridDomain(h=1.0, x1_min=0.0, fluid=fluid, lateral_bc='reflecting')
        values = np.zeros((4, 3))
        values[0, :] = 1.0
        lap = laplacian(values, grid)
        assert np.allclose(lap[0, :], 0.0)
        assert np.allclose(lap[2:, :], 0.0)

    def test_mass_is_conserved(self, slit_grid, rng):
        values = np.where(slit_grid.fluid, rng.random(slit_grid.shape), 0.0)
        assert laplacian(values, slit_grid).sum() == pytest.approx(0.0, abs=1e-8)


class TestFrontPosition:

    def test_interpolated_crossing(self, small_empty_grid):
        field = ScalarField.from_x1(small_empty_grid, lambda x1: np.clip(0.5 - x1 / 4.0, 0.0, 1.0))
        assert front_position(field) == pytest.approx(0.0, abs=1e-12)

    def test_no_crossing(self, small_empty_grid):
        assert np.isnan(front_position(ScalarField.zeros(small_empty_grid)))
        full = ScalarField.full(small_empty_grid, 1.0)
        assert front_position(full) == pytest.approx(small_empty_grid.x1[-1])

    def test_speed_fit(self):
        t = np.linspace(0.0, 10.0, 11)
        history = pd.DataFrame({'t': t, 'front_x': 0.3 * t - 2.0})
        assert front_speed(history) == pytest.approx(0.3)
        assert np.isnan(front_speed(history.iloc[:2]))


class TestRunToSteady:

    def test_zero_is_steady(self, nl, small_empty_grid):
        cfg = StepConfig.for_grid(small_empty_grid)
        result = run_to_steady(ScalarField.zeros(small_empty_grid), nl, cfg)
        assert result.converged
        assert not result.horizon_reached
        assert result.steps == 1
        assert result.require_steady() is result

    def test_horizon_is_a_flag(self, nl, small_empty_grid):
        u0 = ScalarField.from_x1(small_empty_grid, lambda x1: (x1 < 0).astype(float))
        cfg = StepConfig.for_grid(small_empty_grid, t_max=1.0)
        result = run_to_steady(u0, nl, cfg)
        assert result.horizon_reached
        assert result.t == pytest.approx(1.0)
        with pytest.raises(HorizonReached):
            result.require_steady()

    def test_history_columns(self, nl, small_empty_grid):
        u0 = ScalarField.from_x1(small_empty_grid, lambda x1: (x1 < 0).astype(float))
        cfg = StepConfig.for_grid(small_empty_grid, t_max=3.0)
        probe = probe_mask(small_empty_grid, offset=-5.0)
        result = run_to_steady(u0, nl, cfg, probe=probe)
        assert list(result.history.columns) == ['t', 'front_x', 'probe_min', 'probe_max', 'rate']
        assert result.history['t'].is_monotonic_increasing
        assert result.history['t'].iloc[0] == 0.0

    def test_observers_are_called(self, nl, small_empty_grid):
        seen = []
        cfg = StepConfig.for_grid(small_empty_grid, t_max=2.0)
        run_to_steady(ScalarField.full(small_empty_grid, 0.5), nl, cfg, observers=[lambda t, u: seen.append(t)])
        assert seen[0] == 0.0
        assert len(seen) >= 3

    def test_solid_cells_stay_zero(self, nl, slit_grid):
        u0 = ScalarField.from_x1(slit_grid, lambda x1: (x1 < 0.5).astype(float))
        cfg = StepConfig.for_grid(slit_grid, t_max=0.5)
        result = run_to_steady(u0, nl, cfg)
        assert np.all(result.field.values[slit_grid.solid] == 0.0)


class TestStepInvariants:

    @pytest.mark.parametrize('level', [0.0, 0.25, 1.0])
    def test_constant_zeros_are_fixed(self, nl, slit_grid, level):
        u = ScalarField(slit_grid, np.where(slit_grid.fluid, level, 0.0))
        cfg = StepConfig.for_grid(slit_grid)
        after = step(step(u, nl, cfg), nl, cfg)
        assert np.array_equal(after.values, u.values)

    def test_y_independence_is_preserved(self, nl):
        grid = rasterize(Empty(), 0.25, extent=(-5.0, 5.0, 2.0))
        u = ScalarField.from_x1(grid, lambda x1: 0.5 * (1.0 - np.tanh(x1)))
        cfg = StepConfig.for_grid(grid)
        for _ in range(50):
            u = step(u, nl, cfg)
        assert np.all(u.values == u.values[:, :1])

    def test_values_stay_in_unit_interval(self, nl, rng):
        fluid = rng.random((24, 12)) > 0.25
        grid = GridDomain(h=0.5, x1_min=-6.0, fluid=fluid, lateral_bc='periodic')
        cfg = StepConfig.for_grid(grid)
        u = ScalarField(grid, rng.random(grid.shape))
        for _ in range(100):
            u = step(u, nl, cfg)
            assert u.min() >= -1e-12
            assert u.max() <= 1.0 + 1e-12


class TestComparison:

    def test_random_ordered_pairs_stay_ordered(self, nl):
        rng = np.random.default_rng(7)
        for _ in range(100):
            fluid = rng.random((16, 8)) > 0.2
            grid = GridDomain(h=0.5, x1_min=-4.0, fluid=fluid, lateral_bc='periodic')
            u0 = ScalarField(grid, rng.random(grid.shape))
            v0 = ScalarField(grid, np.minimum(1.0, u0.values + rng.random(grid.shape) * (rng.random(grid.shape) > 0.5)))
            cfg = StepConfig.for_grid(grid, t_max=2.0)
            assert compare_evolutions(u0, v0, nl, cfg)

    def test_unordered_pair_is_reported(self, nl, small_empty_grid):
        cfg = StepConfig.for_grid(small_empty_grid, t_max=0.5)
        high = ScalarField.full(small_empty_grid, 0.8)
        low = ScalarField.full(small_empty_grid, 0.2)
        assert not compare_evolutions(high, low, nl, cfg)


@pytest.mark.slow
class TestFreePropagation:

    def test_front_speed_on_fine_strip(self, nl, wave):
        grid = rasterize(Empty(), 0.05, extent=(-40.0, 40.0, 8.0))
        u0 = ScalarField.from_x1(grid, lambda x1: wave(x1 + 30.0))
        cfg = StepConfig.for_grid(grid, t_max=30.0)
        result = run_to_steady(u0, nl, cfg)
        speed = front_speed(result.history, x1_cap=grid.x1_max - 10.0)
        assert abs(speed - wave.c) / wave.c <= 0.05
