import numpy as np
import pandas as pd
import pytest

from exceptions import FrontTooClose, PathTooClose
from geometry.grid import ScalarField, rasterize
from geometry.obstacles import Debris, Empty, PeriodicSlits
from simulation.dynamics import (
    ClassificationResult, PropagationLab, SlideReport, _sample_path, build_entire_initial, choose_t_start,
    classify, monotonicity_check, plain_initial,
)
from simulation.solver import RunResult, front_speed
from theory.radial import solve_bubble


def _steady(field: ScalarField, horizon: bool = False) -> RunResult:
    return RunResult(field=field, history=pd.DataFrame(), t=1.0, steps=1, converged=not horizon,
                     horizon_reached=horizon, max_negative_increment=0.0, final_rate=0.0)


def _reference(field: ScalarField) -> ClassificationResult:
    run = _steady(field)
    return ClassificationResult(verdict='Undecided', probe_min=0.0, probe_max=0.0, front_history=run.history,
                                residual=0.0, run=run, t_start=0.0, eps=0.05)


@pytest.fixture(scope='module')
def lab(nl):
    return PropagationLab(nl, h=0.5)


@pytest.fixture(scope='module')
def empty_limit(lab):
    return lab.limit_profile(Empty())


@pytest.fixture(scope='module')
def slit_limit(lab):
    return lab.limit_profile(PeriodicSlits(thickness=1.0, slit_width=0.5, period=4.0))


@pytest.fixture
def probe_grid():
    return rasterize(Empty(), 0.5, extent=(-5.0, 15.0, 2.0))


class TestInitializer:

    def test_t_start_places_the_front(self, pair):
        t_start = choose_t_start(pair)
        assert pair.front_position(t_start) == pytest.approx(-20.0, abs=1e-6)
        assert t_start < pair.T_prime

    def test_initial_field_is_ordered(self, wave, pair):
        grid = rasterize(Empty(), 0.5, extent=(-60.0, 10.0, 2.0))
        t_start = choose_t_start(pair)
        u0 = build_entire_initial(wave, pair, grid, t_start)
        column = u0.values[:, 0]
        assert u0.min() >= 0.0 and u0.max() <= 1.0
        assert np.all(np.diff(column) <= 1e-15)
        assert np.all(column[grid.x1 > 0.0] == 0.0)
        assert plain_initial(wave, pair, grid, t_start).dominated_by(u0, 1e-15)

    def test_front_too_close(self, wave, pair, small_empty_grid):
        with pytest.raises(FrontTooClose):
            build_entire_initial(wave, pair, small_empty_grid, pair.T_prime + 1.0)


class TestClassify:

    def test_propagation(self, probe_grid):
        verdict, lo, hi = classify(_steady(ScalarField.full(probe_grid, 1.0)))
        assert verdict == 'Propagation'
        assert lo == hi == 1.0

    def test_blocking(self, probe_grid):
        assert classify(_steady(ScalarField.zeros(probe_grid)))[0] == 'Blocking'

    def test_intermediate_is_undecided(self, probe_grid):
        assert classify(_steady(ScalarField.full(probe_grid, 0.5)))[0] == 'Undecided'

    def test_horizon_is_undecided(self, probe_grid):
        assert classify(_steady(ScalarField.full(probe_grid, 1.0), horizon=True))[0] == 'Undecided'

    def test_eps_threshold(self, probe_grid):
        assert classify(_steady(ScalarField.full(probe_grid, 0.96)))[0] == 'Propagation'
        assert classify(_steady(ScalarField.full(probe_grid, 0.96)), eps=0.01)[0] == 'Undecided'

    def test_window_without_fluid(self, small_empty_grid):
        with pytest.raises(ValueError):
            classify(_steady(ScalarField.zeros(small_empty_grid)))


class TestSlides:

    def test_sample_path_spacing(self):
        points = _sample_path([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)], 0.25)
        assert len(points) == 9
        assert points[0] == (0.0, 0.0)
        assert points[-1] == (1.0, 1.0)

    def test_slide_report(self):
        report = SlideReport(lambdas=np.arange(4.0), D_measure=np.array([0.0, 0.1, 0.1, 0.2]),
                             max_violation=0.2, nu=0.4, h=0.1)
        assert report.within_nu
        assert report.is_nondecreasing()
        assert list(report.to_frame().columns) == ['lambda', 'D_measure']
        assert not SlideReport(lambdas=np.arange(2.0), D_measure=np.array([0.3, 0.0]),
                               max_violation=0.3, nu=0.1, h=0.1).is_nondecreasing()

    def test_path_through_wall(self, lab, nl, slit_grid):
        reference = _reference(ScalarField.full(slit_grid, 1.0))
        bubble = solve_bubble(nl, 12.0)
        with pytest.raises(PathTooClose):
            lab.slide_bubble(reference, [(-3.0, 2.0), (3.0, 2.0)], bubble=bubble)


@pytest.mark.slow
class TestLimitProfiles:

    def test_empty_strip_propagates(self, empty_limit):
        v_bar, result = empty_limit
        assert result.verdict == 'Propagation'
        assert result.run.converged
        assert monotonicity_check(result.run) >= -1e-12
        assert v_bar.min() >= 0.95

    def test_result_dict(self, empty_limit):
        _, result = empty_limit
        data = result.to_dict()
        assert data['verdict'] == 'Propagation'
        assert {'probe_min', 'probe_max', 't_start', 'max_negative_increment', 'steps'} <= set(data)

    def test_slides_against_full_invasion(self, lab, empty_limit):
        _, result = empty_limit
        report = lab.slide_rho(result)
        assert report.within_nu
        assert report.is_nondecreasing()
        assert lab.slide_W(result)

    def test_front_speed(self, nl):
        lab = PropagationLab(nl, h=0.25)
        _, result = lab.limit_profile(Empty())
        speed = front_speed(result.front_history, x1_cap=result.grid.x1_max - 10.0)
        assert speed == pytest.approx(lab.wave.c, rel=0.05)

    def test_narrow_slit_blocks(self, slit_limit):
        _, result = slit_limit
        assert result.verdict == 'Blocking'
        assert monotonicity_check(result.run) >= -1e-12

    def test_universality_on_empty_strip(self, lab, empty_limit):
        _, result = empty_limit
        assert lab.universality_check(reference=result) <= 5e-2

    def test_universality_on_blocking_wall(self, lab, slit_limit):
        _, result = slit_limit
        assert result.verdict == 'Blocking'
        assert lab.universality_check(reference=result) <= 5e-2


@pytest.fixture(scope='module')
def short_lab(nl):
    return PropagationLab(nl, h=0.125, margins=(30.0, 15.0))


class TestShortStrip:

    def test_margins_set_the_extent(self, nl):
        grid = PropagationLab(nl, h=0.5, margins=(30.0, 15.0)).grid_for(PeriodicSlits(1.0, 0.5, 4.0))
        assert grid.x1_min == pytest.approx(-30.0)
        assert grid.x1_max == pytest.approx(16.0)
        assert grid.height == pytest.approx(4.0)

    def test_empty_uses_configured_height(self, nl):
        grid = PropagationLab(nl, h=0.5, margins=(30.0, 15.0)).grid_for(None)
        assert grid.height == pytest.approx(8.0)


@pytest.mark.slow
class TestExperimentFamilies:

    def test_blocking_sequence_stays_blocked(self, short_lab):
        frame = short_lab.blocking_sequence([0.25, 3.0, 1.0])
        assert list(frame['slit_width']) == [3.0, 1.0, 0.25]
        blocked = frame['verdict'] == 'Blocking'
        assert blocked.is_monotonic_increasing
        assert blocked.iloc[-1]

    def test_debris_sweep(self, short_lab):
        base = Debris(disk_centers=((0.5, 1.3), (0.5, 2.1), (0.5, 2.9), (0.5, 3.7), (0.5, 4.95), (0.5, 5.75),
                                    (0.5, 6.55)),
                      disk_radius=0.125, base=(0.0, 1.0, (1.0, 7.0)))
        frame = short_lab.debris_sweep(base, [0.125, 0.5])
        assert frame['clearance'].iloc[0] > frame['clearance'].iloc[1]
        assert list(frame['verdict']) == ['Propagation', 'Blocking']
