"""
Frontlab - Barrier Energy
Truncated domains, the ramp zeta, the energy functional J and its gradient, the unit-square
decomposition of the right region and its Poincare-Wirtinger check.
"""

import numpy as np
from typing import Dict, List, Optional, Tuple
import logging
from dataclasses import dataclass, field

from scipy import ndimage as ndi

from config import BARRIER_CONFIG
from geometry.grid import GridDomain, ScalarField
from geometry.measures import hole_measure, reservoir_regions
from geometry.obstacles import Reservoir
from simulation.solver import laplacian
from theory.nonlinearity import Nonlinearity, barrier_constants

logger = logging.getLogger(__name__)

VARIANTS = ('constrained', 'cylinder')


@dataclass(eq=False)
class BarrierConfig:
    """
    Discrete barrier problem on a truncated window of the simulation grid.

    pinned cells keep pinned_values; upper_zone marks cells whose energy density carries the
    +F(1) shift (the region left of b, or the reservoir entrance).
    """

    a: float
    b: float
    R_trunc: float
    delta: float
    mu: float
    sigma: float
    grid: GridDomain
    columns: slice
    subdomains: List[np.ndarray]
    D_min: float
    variant: str
    pinned: np.ndarray
    pinned_values: np.ndarray
    upper_zone: np.ndarray
    hole_measure: float
    ep_bound: float
    poincare_min_ratio: float = np.nan
    zeta: Optional[np.ndarray] = None

    @property
    def ep_ratio(self) -> float:
        return self.hole_measure / self.ep_bound

    @property
    def feasible(self) -> bool:
        return bool(self.ep_ratio < BARRIER_CONFIG['ep_slack_factor'])

    @property
    def poincare_ok(self) -> bool:
        return bool(self.poincare_min_ratio >= 2.0 * self.mu)

    @property
    def constrained(self) -> bool:
        return self.variant == 'constrained'

    @property
    def free(self) -> np.ndarray:
        return self.grid.fluid & ~self.pinned

    @classmethod
    def for_wall(cls, spec, sim_grid: GridDomain, nl: Nonlinearity, variant: str = 'constrained',
                 rng: Optional[np.random.Generator] = None) -> 'BarrierConfig':
        """
        Barrier problem for a wall occupying a <= x1 <= b, on the window [left_edge, b + truncation].

        The left column is pinned to 1; the cylinder variant also pins the right column to 0.
        """
        if variant not in VARIANTS:
            raise ValueError(f"Unknown barrier variant: {variant}")
        cfg = BARRIER_CONFIG
        slab = spec.slab()
        if slab is None:
            raise ValueError(f"{spec.kind} has no wall slab to build a barrier on")
        a, b = slab
        R_trunc = b + cfg['truncation']
        grid, columns = sim_grid.window(cfg['left_edge'], R_trunc)
        delta, mu, sigma = barrier_constants(nl)

        pinned = np.zeros(grid.shape, dtype=bool)
        pinned_values = np.zeros(grid.shape)
        pinned[0, :] = grid.fluid[0, :]
        pinned_values[0, :] = 1.0
        if variant == 'cylinder':
            pinned[-1, :] = grid.fluid[-1, :]

        right = grid.x1 > b
        subdomains = unit_square_decomposition(grid, right[:, None] & grid.fluid & ~pinned,
                                               origin=(b, 0.0))
        D_min = min(d.sum() for d in subdomains) * grid.cell_area
        measure = hole_measure(spec, sim_grid)
        bound = ep_bound(nl, sigma, D_min, b - a)

        config = cls(a=a, b=b, R_trunc=R_trunc, delta=delta, mu=mu, sigma=sigma, grid=grid, columns=columns,
                     subdomains=subdomains, D_min=D_min, variant=variant, pinned=pinned,
                     pinned_values=pinned_values, upper_zone=(grid.x1 < b)[:, None] & grid.fluid,
                     hole_measure=measure, ep_bound=bound)
        config.zeta = zeta_field(config, grid).values
        config.poincare_min_ratio = poincare_wirtinger_check(grid, subdomains, rng)
        logger.info(f"Barrier setup for {spec.kind}: {len(subdomains)} subdomains, D_min={D_min:.3f}, "
                    f"hole measure {measure:.4f} vs bound {bound:.5f} (ratio {config.ep_ratio:.1f})")
        return config

    @classmethod
    def for_reservoir(cls, spec: Reservoir, sim_grid: GridDomain, nl: Nonlinearity,
                      rng: Optional[np.random.Generator] = None) -> 'BarrierConfig':
        """Barrier problem on mouth + entrance + cavity, with V = 1 on the mouth column."""
        regions = reservoir_regions(spec, sim_grid)
        grid, columns = sim_grid.window(-sim_grid.h, spec.M)
        mouth = regions['mouth'][columns]
        entrance = regions['entrance'][columns]
        cavity = regions['cavity'][columns]
        grid = grid.with_fluid(mouth | entrance | cavity)
        delta, mu, sigma = barrier_constants(nl)

        subdomains = unit_square_decomposition(grid, cavity, origin=(spec.entrance_len, spec.shell))
        D_min = min(d.sum() for d in subdomains) * grid.cell_area
        entrance_area = float(entrance.sum() * grid.cell_area)
        bound = ep_bound(nl, sigma, D_min, spec.entrance_len)

        config = cls(a=0.0, b=spec.entrance_len, R_trunc=spec.M, delta=delta, mu=mu, sigma=sigma, grid=grid,
                     columns=columns, subdomains=subdomains, D_min=D_min, variant='constrained', pinned=mouth,
                     pinned_values=mouth.astype(float), upper_zone=entrance, hole_measure=entrance_area,
                     ep_bound=bound)
        X, _ = grid.centers()
        ramp = np.clip((spec.entrance_len - X) / spec.entrance_len, 0.0, 1.0)
        config.zeta = np.where(mouth, 1.0, np.where(entrance, ramp, 0.0))
        config.poincare_min_ratio = poincare_wirtinger_check(grid, subdomains, rng)
        logger.info(f"Reservoir barrier setup: |entrance|={entrance_area:.4f}, bound {bound:.5f}, "
                    f"{len(subdomains)} cavity subdomains")
        return config


def ep_bound(nl: Nonlinearity, sigma: float, D_min: float, thickness: float) -> float:
    """Largest hole measure for which the ramp energy stays below sigma * D_min."""
    return sigma * D_min / (1.0 / (2.0 * thickness ** 2) - nl.F_alpha + nl.F1)


def zeta_field(cfg: BarrierConfig, grid: Optional[GridDomain] = None) -> ScalarField:
    """1 left of a, linear ramp (b - x1) / (b - a) across the wall, 0 right of b."""
    grid = grid or cfg.grid
    ramp = np.clip((cfg.b - grid.x1) / (cfg.b - cfg.a), 0.0, 1.0)
    return ScalarField.from_x1(grid, lambda x1: ramp)


def _face_energy(values: np.ndarray, grid: GridDomain) -> float:
    """Sum over open faces of (w_p - w_q)^2 / 2, the discrete integral of |grad w|^2 / 2."""
    total = np.sum(((values[1:, :] - values[:-1, :]) * grid.open_x) ** 2)
    total += np.sum(((values[:, 1:] - values[:, :-1]) * grid.open_y) ** 2)
    if grid.lateral_bc == 'periodic':
        total += np.sum(((values[:, 0] - values[:, -1]) * grid.open_wrap) ** 2)
    return 0.5 * float(total)


def energy_values(values: np.ndarray, cfg: BarrierConfig, nl: Nonlinearity) -> float:
    grid = cfg.grid
    density = -nl.F(values) + nl.F1 * cfg.upper_zone
    potential = float(np.sum(density[grid.fluid])) * grid.cell_area
    return _face_energy(values, grid) + potential


def energy_J(w: ScalarField, cfg: BarrierConfig, nl: Nonlinearity) -> float:
    """
    J(w) = sum over the upper zone of |grad w|^2/2 - F(w) + F(1) plus the rest of |grad w|^2/2 - F(w).
    """
    return energy_values(w.values, cfg, nl)


def energy_gradient(values: np.ndarray, cfg: BarrierConfig, nl: Nonlinearity) -> np.ndarray:
    """Gradient of J per unit area, -(L w + f(w)), zero on pinned and solid cells."""
    grad = -(laplacian(values, cfg.grid) + nl.f(values))
    grad[~cfg.free] = 0.0
    return grad


def euler_lagrange_residual(values: np.ndarray, cfg: BarrierConfig, nl: Nonlinearity) -> float:
    residual = np.abs(laplacian(values, cfg.grid) + nl.f(values))
    return float(residual[cfg.free].max())


def unit_square_decomposition(grid: GridDomain, region: np.ndarray, origin: Tuple[float, float] = (0.0, 0.0),
                              side: Optional[float] = None) -> List[np.ndarray]:
    """
    Tile region by squares of the given side anchored at origin; pieces smaller than
    merge_fraction of a square are merged into the preceding piece.
    """
    side = side or BARRIER_CONFIG['square_side']
    X, Y = grid.centers()
    px = np.floor((X - origin[0]) / side + 1e-9).astype(int)
    py = np.floor((Y - origin[1]) / side + 1e-9).astype(int)
    keys = sorted({(p, q) for p, q in zip(px[region], py[region])})
    pieces = []
    threshold = BARRIER_CONFIG['merge_fraction'] * side * side
    for p, q in keys:
        piece = region & (px == p) & (py == q)
        if pieces and piece.sum() * grid.cell_area < threshold:
            pieces[-1] = pieces[-1] | piece
        else:
            pieces.append(piece)
    if pieces and pieces[0].sum() * grid.cell_area < threshold and len(pieces) > 1:
        pieces[1] = pieces[1] | pieces.pop(0)
    if not pieces:
        raise ValueError("Region to decompose is empty")
    return pieces


def rayleigh_quotient(values: np.ndarray, grid: GridDomain, mask: np.ndarray) -> float:
    """Discrete integral of |grad w|^2 over integral of (w - mean)^2, both restricted to mask."""
    w = np.where(mask, values - values[mask].mean(), 0.0)
    inner_x = grid.open_x & mask[:-1, :] & mask[1:, :]
    inner_y = grid.open_y & mask[:, :-1] & mask[:, 1:]
    grad = np.sum(((w[1:, :] - w[:-1, :]) * inner_x) ** 2) + np.sum(((w[:, 1:] - w[:, :-1]) * inner_y) ** 2)
    if grid.lateral_bc == 'periodic':
        inner_w = grid.open_wrap & mask[:, 0] & mask[:, -1]
        grad += np.sum(((w[:, 0] - w[:, -1]) * inner_w) ** 2)
    mass = np.sum(w[mask] ** 2) * grid.cell_area
    return float(grad / mass) if mass > 0 else np.inf


def poincare_wirtinger_check(grid: GridDomain, subdomains: List[np.ndarray],
                             rng: Optional[np.random.Generator] = None, n_samples: Optional[int] = None) -> float:
    """
    Smallest Rayleigh quotient over smoothed random zero-mean fields on every subdomain.

    A value >= 2 mu backs the Poincare-Wirtinger requirement on the decomposition.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    n_samples = n_samples or BARRIER_CONFIG['rayleigh_samples']
    mode = ('nearest', 'wrap' if grid.lateral_bc == 'periodic' else 'nearest')
    widths = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
    best = np.inf
    for piece in subdomains:
        if piece.sum() < 2:
            continue
        for k in range(n_samples):
            noise = rng.standard_normal(grid.shape)
            smooth = ndi.gaussian_filter(noise, sigma=widths[k % widths.size], mode=mode)
            best = min(best, rayleigh_quotient(smooth, grid, piece))
    logger.debug(f"Poincare-Wirtinger check: min Rayleigh quotient {best:.3f}")
    return best
