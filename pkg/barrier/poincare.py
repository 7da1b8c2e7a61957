"""
Frontlab - Relative Poincare Ratio
Gradient energy of small-support fields against their L2 mass scaled by the support measure.
"""

import numpy as np
from typing import Dict, Optional, Tuple
import logging

from config import BARRIER_CONFIG
from exceptions import EmptySupport
from geometry.grid import GridDomain, ScalarField

logger = logging.getLogger(__name__)


def poincare_ratio(w: ScalarField, eta0: Optional[float] = None) -> float:
    """
    (integral |grad w|^2) / (|supp w|^(-1) integral w^2) in two dimensions.

    Raises:
        EmptySupport: w vanishes on every fluid cell
        ValueError: the support is larger than eta0
    """
    eta0 = BARRIER_CONFIG['poincare_eta0'] if eta0 is None else eta0
    grid = w.grid
    v = w.values
    support = grid.fluid & (v > 0.0)
    if not support.any():
        raise EmptySupport("Field has empty support")
    measure = support.sum() * grid.cell_area
    if measure > eta0:
        raise ValueError(f"Support measure {measure:.4f} exceeds eta0={eta0}")

    grad = np.sum(((v[1:, :] - v[:-1, :]) * grid.open_x) ** 2)
    grad += np.sum(((v[:, 1:] - v[:, :-1]) * grid.open_y) ** 2)
    if grid.lateral_bc == 'periodic':
        grad += np.sum(((v[:, 0] - v[:, -1]) * grid.open_wrap) ** 2)
    mass = np.sum(v[grid.fluid] ** 2) * grid.cell_area
    return float(grad * measure / mass)


def cone_field(grid: GridDomain, center: Tuple[float, float], radius: float) -> ScalarField:
    """max(0, 1 - |x - center| / radius) on the fluid cells."""
    X, Y = grid.centers()
    dy = Y - center[1]
    if grid.lateral_bc == 'periodic':
        dy = dy - grid.height * np.round(dy / grid.height)
    return ScalarField(grid, np.maximum(0.0, 1.0 - np.hypot(X - center[0], dy) / radius))


def empirical_poincare_constant(grid: GridDomain, rng: Optional[np.random.Generator] = None,
                                n: Optional[int] = None, x1_range: Optional[Tuple[float, float]] = None,
                                eta0: Optional[float] = None) -> Dict:
    """
    Minimum ratio over random cones with centers drawn in physical coordinates.

    Draws that land on a solid cell, or whose support exceeds eta0, are redrawn.

    Returns:
        Dictionary with the minimum, the ratios and the sampled (x1, y, radius) triples
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    n = n or BARRIER_CONFIG['rayleigh_samples']
    eta0 = BARRIER_CONFIG['poincare_eta0'] if eta0 is None else eta0
    r_lo, r_hi = BARRIER_CONFIG['cone_radii']
    x_lo, x_hi = x1_range if x1_range is not None else (max(grid.x1_min, -2.0), min(grid.x1_max, grid.M + 2.0))

    ratios, draws = [], []
    attempts = 0
    while len(ratios) < n:
        attempts += 1
        if attempts > 100 * n:
            raise ValueError("Could not place enough cones in the fluid region")
        x1 = rng.uniform(x_lo, x_hi)
        y = rng.uniform(0.0, grid.height)
        radius = rng.uniform(r_lo, r_hi)
        j = min(int(y / grid.h), grid.ny - 1)
        if not grid.fluid[grid.column(x1), j]:
            continue
        field = cone_field(grid, (x1, y), radius)
        try:
            ratios.append(poincare_ratio(field, eta0))
        except (ValueError, EmptySupport):
            continue
        draws.append((x1, y, radius))

    ratios = np.asarray(ratios)
    logger.info(f"Empirical Poincare constant over {n} cones: min {ratios.min():.3f}, median {np.median(ratios):.3f}")
    return {'min_ratio': float(ratios.min()), 'ratios': ratios, 'draws': draws}
