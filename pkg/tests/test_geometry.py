import numpy as np
import pytest

from exceptions import DisconnectedComplement, InvalidObstacle, ObstacleOutsideSlab
from geometry.grid import GridDomain, ScalarField, fluid_components, rasterize
from geometry.measures import (
    blade_flux, hole_measure, is_directionally_convex, reservoir_regions, tunnel_clearance,
)
from geometry.obstacles import (
    ConvexBlock, Debris, Empty, ParallelBlades, PeriodicSlits, Reservoir, SlabWithHoles, obstacle_from_dict,
    obstacle_to_dict,
)


class TestRasterize:

    def test_slit_cell_count(self):
        spec = PeriodicSlits(thickness=1.0, slit_width=0.05, period=1.0)
        grid = rasterize(spec, 0.025, extent=(-2.0, 3.0, 1.0))
        inside = grid.column(0.5)
        assert grid.fluid[inside, :].sum() == 2

    def test_default_extent(self):
        spec = PeriodicSlits(thickness=1.0, slit_width=0.25, period=4.0)
        grid = rasterize(spec, 0.25)
        assert grid.x1_min == pytest.approx(-60.0)
        assert grid.x1_max == pytest.approx(41.0)
        assert grid.height == pytest.approx(4.0)
        assert grid.M == 1.0

    def test_empty_grid_is_all_fluid(self, small_empty_grid):
        assert small_empty_grid.fluid.all()
        assert small_empty_grid.shape == (20, 4)
        assert small_empty_grid.x1[0] == pytest.approx(-4.75)
        assert small_empty_grid.y[0] == pytest.approx(0.25)

    def test_complete_wall_disconnects(self):
        spec = PeriodicSlits(thickness=1.0, slit_width=0.0, period=4.0)
        with pytest.raises(DisconnectedComplement):
            rasterize(spec, 0.25, extent=(-5.0, 5.0, 4.0))
        grid = rasterize(spec, 0.25, extent=(-5.0, 5.0, 4.0), require_connected=False)
        assert grid.solid.any()

    def test_solid_outside_slab(self):
        spec = Debris(disk_centers=((-1.0, 2.0),), disk_radius=0.5)
        with pytest.raises(ObstacleOutsideSlab):
            rasterize(spec, 0.25, extent=(-5.0, 5.0, 4.0))

    def test_misaligned_extent(self):
        with pytest.raises(ValueError):
            rasterize(Empty(), 0.3, extent=(-5.0, 5.0, 4.0))

    def test_nonpositive_spacing(self):
        with pytest.raises(ValueError):
            rasterize(Empty(), 0.0)

    def test_reflecting_walls_close_the_seam(self):
        grid = rasterize(Empty(), 0.5, extent=(-5.0, 5.0, 2.0), lateral_bc='reflecting')
        assert not grid.open_wrap.any()
        periodic = rasterize(Empty(), 0.5, extent=(-5.0, 5.0, 2.0))
        assert periodic.open_wrap.all()

    def test_window(self, slit_grid):
        sub, cols = slit_grid.window(-1.0, 21.0)
        assert sub.x1[0] == pytest.approx(-0.9375)
        assert sub.x1[-1] == pytest.approx(20.9375)
        assert np.array_equal(sub.fluid, slit_grid.fluid[cols])


class TestComponents:

    def test_periodic_seam_glues_components(self):
        fluid = np.ones((6, 6), dtype=bool)
        fluid[:, 2:4] = False
        _, n_reflecting = fluid_components(fluid, periodic=False)
        _, n_periodic = fluid_components(fluid, periodic=True)
        assert n_reflecting == 2
        assert n_periodic == 1


class TestScalarField:

    def test_solid_cells_are_zeroed(self, slit_grid):
        field = ScalarField.full(slit_grid, 0.7)
        assert np.all(field.values[slit_grid.solid] == 0.0)
        assert field.min() == pytest.approx(0.7)

    def test_from_x1_and_domination(self, small_empty_grid):
        low = ScalarField.from_x1(small_empty_grid, lambda x1: np.clip(-x1 / 10.0, 0.0, 1.0))
        high = ScalarField.full(small_empty_grid, 1.0)
        assert low.dominated_by(high)
        assert not high.dominated_by(low)
        assert high.max_abs_diff(low) == pytest.approx(1.0)


class TestMeasures:

    def test_hole_measure(self, slit_grid):
        assert hole_measure(PeriodicSlits(1.0, 0.25, 4.0), slit_grid) == pytest.approx(0.25)
        assert hole_measure(Empty(), slit_grid) == 0.0

    def test_hole_measure_converges_under_refinement(self):
        spec = Debris(((0.5, 3.0),), 0.3, (0.0, 1.0, (1.0, 7.0)))
        exact = 6.0 - np.pi * 0.09
        coarse = hole_measure(spec, rasterize(spec, 0.1, extent=(-2.0, 3.0, 8.0)))
        fine = hole_measure(spec, rasterize(spec, 0.05, extent=(-2.0, 3.0, 8.0)))
        assert coarse == pytest.approx(exact, abs=0.05)
        assert fine == pytest.approx(exact, abs=0.02)
        assert abs(fine - coarse) < 0.05

    @pytest.mark.parametrize('count,thickness,expected', [(1, 0.05, 0.1), (3, 0.02, 0.12), (0, 0.05, 0.0)])
    def test_blade_flux(self, count, thickness, expected):
        spec = ParallelBlades(blade_len=4.0, blade_thickness=thickness, gap=0.95, count=count)
        assert blade_flux(spec) == pytest.approx(expected)

    def test_clearance_of_empty_strip(self, small_empty_grid):
        assert tunnel_clearance(Empty(), small_empty_grid) == pytest.approx(1.0)

    def test_clearance_of_wide_tunnel(self):
        spec = SlabWithHoles(0.0, 1.0, ((2.0, 22.0),))
        grid = rasterize(spec, 0.5, extent=(-10.0, 11.0, 24.0))
        assert tunnel_clearance(spec, grid) == pytest.approx(10.0, abs=0.5)

    def test_clearance_shrinks_with_debris(self):
        base = (0.0, 1.0, (1.0, 7.0))
        centers = ((0.5, 3.0), (0.5, 5.0))
        grid_kw = dict(extent=(-5.0, 6.0, 8.0))
        small = Debris(centers, 0.25, base)
        large = Debris(centers, 0.75, base)
        c_small = tunnel_clearance(small, rasterize(small, 0.125, **grid_kw))
        c_large = tunnel_clearance(large, rasterize(large, 0.125, **grid_kw))
        assert c_large < c_small

    def test_convex_block(self):
        spec = ConvexBlock(((0.0, 3.0, 5.0), (0.5, 3.25, 4.75), (1.0, 3.5, 4.5)))
        grid = rasterize(spec, 0.25, extent=(-5.0, 6.0, 8.0))
        assert is_directionally_convex(grid)

    def test_staggered_disks_are_not_convex(self):
        spec = Debris(((0.5, 2.0), (2.5, 2.0)), 0.5)
        grid = rasterize(spec, 0.25, extent=(-5.0, 8.0, 8.0))
        assert not is_directionally_convex(grid)

    def test_reservoir_regions(self):
        spec = Reservoir(mouth_width=0.5, cavity_size=4.0, entrance_len=1.0, shell=0.5, band=4.0)
        grid = rasterize(spec, 0.25, extent=(-5.0, 10.0, 9.0))
        regions = reservoir_regions(spec, grid)
        assert regions['mouth'].sum() == 2
        assert regions['entrance'].sum() * grid.cell_area == pytest.approx(0.5)
        assert regions['cavity'].sum() * grid.cell_area == pytest.approx(16.0)
        assert not (regions['entrance'] & grid.solid).any()


class TestObstacleDicts:

    def test_round_trip_of_slits(self):
        spec = PeriodicSlits(1.0, 0.25, 4.0)
        assert obstacle_from_dict(obstacle_to_dict(spec)) == spec

    def test_debris_lists_become_tuples(self):
        data = {'variant': 'Debris', 'disk_centers': [[0.5, 1.3]], 'disk_radius': 0.125,
                'base': [0.0, 1.0, [1.0, 7.0]]}
        spec = obstacle_from_dict(data)
        assert spec.disk_centers == ((0.5, 1.3),)
        assert spec.base == (0.0, 1.0, (1.0, 7.0))

    @pytest.mark.parametrize('data', [
        {'thickness': 1.0},
        {'variant': 'Hexagons'},
        {'variant': 'PeriodicSlits', 'thickness': 1.0},
        {'variant': 'PeriodicSlits', 'thickness': 1.0, 'slit_width': 0.25, 'period': 4.0, 'depth': 2},
        {'variant': 'PeriodicSlits', 'thickness': 1.0, 'slit_width': 5.0, 'period': 4.0},
        {'variant': 'SlabWithHoles', 'a': 2.0, 'b': 1.0},
    ])
    def test_invalid(self, data):
        with pytest.raises(InvalidObstacle):
            obstacle_from_dict(data)

    def test_grid_domain_rejects_bad_bc(self):
        with pytest.raises(ValueError):
            GridDomain(h=0.5, x1_min=0.0, fluid=np.ones((4, 4), dtype=bool), lateral_bc='open')
