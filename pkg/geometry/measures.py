"""
Frontlab - Geometric Measures
Hole measure, blade flux, tunnel clearance and the directional convexity line scan.
"""

import numpy as np
from typing import Dict
import logging

from scipy import ndimage as ndi

from geometry.grid import GridDomain, fluid_components
from geometry.obstacles import ParallelBlades, Reservoir

logger = logging.getLogger(__name__)


def hole_measure(spec, grid: GridDomain) -> float:
    """
    Area of the fluid cells strictly inside the wall slab a < x1 < b.

    The strip height of a periodic grid is one periodicity cell, so the count is
    already restricted to a single cell.
    """
    slab = spec.slab()
    if slab is None:
        return 0.0
    a, b = slab
    inside = (grid.x1 > a) & (grid.x1 < b)
    return float(grid.fluid[inside, :].sum() * grid.cell_area)


def blade_flux(spec: ParallelBlades) -> float:
    """Boundary integral of |nu . e1| over the blades: the two end caps of each blade."""
    return 2.0 * spec.blade_thickness * spec.count


def _padded_distance(grid: GridDomain) -> np.ndarray:
    """Distance from each fluid cell center to the nearest solid face, in length units."""
    pad_y = grid.ny if grid.lateral_bc == 'periodic' else 0
    fluid = np.pad(grid.fluid, ((0, 0), (pad_y, pad_y)), mode='wrap') if pad_y else grid.fluid
    fluid = np.pad(fluid, ((1, 1), (0, 0)), mode='edge')
    if grid.lateral_bc != 'periodic':
        fluid = np.pad(fluid, ((0, 0), (1, 1)), mode='edge')
        pad_y = 1
    dist = ndi.distance_transform_edt(fluid)
    dist = dist[1:-1, pad_y:pad_y + grid.ny]
    return np.where(grid.fluid, np.maximum(dist - 0.5, 0.0) * grid.h, 0.0)


def tunnel_clearance(spec, grid: GridDomain) -> float:
    """
    Largest rho such that fluid cells at distance >= rho from the obstacle connect x1 < 0 to x1 > M.

    Returns the domain half height when there is no solid cell.
    """
    if not grid.solid.any():
        return grid.height / 2.0
    dist = _padded_distance(grid)
    left = grid.x1 < 0.0
    right = grid.x1 > grid.M
    periodic = grid.lateral_bc == 'periodic'

    def crosses(rho: float) -> bool:
        mask = grid.fluid & (dist >= rho)
        labels, n = fluid_components(mask, periodic)
        if n == 0:
            return False
        ids_left = np.unique(labels[left, :])
        ids_right = np.unique(labels[right, :])
        common = np.intersect1d(ids_left[ids_left > 0], ids_right[ids_right > 0])
        return common.size > 0

    levels = np.unique(dist[grid.fluid])
    lo, hi = 0, levels.size - 1
    if not crosses(levels[lo]):
        return 0.0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if crosses(levels[mid]):
            lo = mid
        else:
            hi = mid - 1
    clearance = float(levels[lo])
    logger.debug(f"Tunnel clearance of {spec.kind if spec is not None else 'grid'}: {clearance:.4f}")
    return clearance


def is_directionally_convex(grid: GridDomain) -> bool:
    """
    Line scan on the solid cells: every row parallel to x1 meets the obstacle in one run,
    and some column's cross-section equals the projection of the obstacle onto y.
    """
    solid = grid.solid
    for j in range(grid.ny):
        idx = np.flatnonzero(solid[:, j])
        if idx.size and idx[-1] - idx[0] + 1 != idx.size:
            return False
    projection = solid.any(axis=0)
    if not projection.any():
        return True
    return bool(np.any(np.all(solid == projection[None, :], axis=1)))


def reservoir_regions(spec: Reservoir, grid: GridDomain) -> Dict[str, np.ndarray]:
    """
    Masks of the entrance channel, the cavity and the mouth column just left of x1 = 0.
    """
    X, Y = grid.centers()
    regions = spec.region_masks(X, Y)
    y0, y1 = spec.channel()
    mouth_col = grid.column(-0.5 * grid.h)
    mouth = np.zeros(grid.shape, dtype=bool)
    mouth[mouth_col, :] = (grid.y >= y0 - 1e-9) & (grid.y < y1 - 1e-9)
    return {
        'entrance': regions['entrance'] & grid.fluid,
        'cavity': regions['cavity'] & grid.fluid,
        'mouth': mouth & grid.fluid,
    }
