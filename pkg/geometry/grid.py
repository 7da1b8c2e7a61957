"""
Frontlab - Grid Domains
Cell-centered rasterization of obstacles onto a uniform strip grid, open-face bookkeeping
for the zero-flux stencil, and the ScalarField grid function.
"""

import numpy as np
from typing import Dict, Optional, Tuple
import logging
from dataclasses import dataclass, field

from scipy import ndimage as ndi

from config import GRID_CONFIG
from exceptions import DisconnectedComplement, InvalidObstacle, ObstacleOutsideSlab
from geometry.obstacles import ConvexBlock, Empty

logger = logging.getLogger(__name__)

LATERAL_BCS = ('periodic', 'reflecting')


@dataclass(eq=False)
class GridDomain:
    """
    Uniform grid on [x1_min, x1_min + nx h] x [0, ny h]; arrays are indexed [i (x1), j (y)].

    fluid marks cells whose center lies outside the obstacle. open_x[i, j] is the face
    between cells (i, j) and (i+1, j), open_y[i, j] the face between (i, j) and (i, j+1),
    open_wrap[i] the face between the top and bottom rows when the strip is periodic.
    """

    h: float
    x1_min: float
    fluid: np.ndarray
    lateral_bc: str = 'periodic'
    M: float = 0.0
    spec: object = None
    open_x: np.ndarray = field(init=False, repr=False)
    open_y: np.ndarray = field(init=False, repr=False)
    open_wrap: np.ndarray = field(init=False, repr=False)
    boundary: Dict[str, np.ndarray] = field(init=False, repr=False)

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"Grid spacing must be positive, got {self.h}")
        if self.lateral_bc not in LATERAL_BCS:
            raise ValueError(f"lateral_bc must be one of {LATERAL_BCS}, got {self.lateral_bc}")
        self.fluid = np.asarray(self.fluid, dtype=bool)
        f = self.fluid
        self.open_x = f[:-1, :] & f[1:, :]
        self.open_y = f[:, :-1] & f[:, 1:]
        if self.lateral_bc == 'periodic':
            self.open_wrap = f[:, -1] & f[:, 0]
        else:
            self.open_wrap = np.zeros(self.nx, dtype=bool)
        self.boundary = self._annotate_walls()

    # -- shape and coordinates ------------------------------------------------

    @property
    def nx(self) -> int:
        return self.fluid.shape[0]

    @property
    def ny(self) -> int:
        return self.fluid.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.fluid.shape

    @property
    def height(self) -> float:
        return self.ny * self.h

    @property
    def x1_max(self) -> float:
        return self.x1_min + self.nx * self.h

    @property
    def x1(self) -> np.ndarray:
        return self.x1_min + (np.arange(self.nx) + 0.5) * self.h

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.ny) + 0.5) * self.h

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def solid(self) -> np.ndarray:
        return ~self.fluid

    @property
    def centerline(self) -> int:
        return self.ny // 2

    def centers(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x1, self.y, indexing='ij')

    def column(self, x1: float) -> int:
        """Index of the column whose cell contains x1, clamped to the grid."""
        i = int(np.floor((x1 - self.x1_min) / self.h + 1e-9))
        return min(max(i, 0), self.nx - 1)

    def neighbor_count(self) -> np.ndarray:
        """Number of open faces per cell."""
        count = np.zeros(self.shape, dtype=int)
        count[:-1, :] += self.open_x
        count[1:, :] += self.open_x
        count[:, :-1] += self.open_y
        count[:, 1:] += self.open_y
        count[:, -1] += self.open_wrap
        count[:, 0] += self.open_wrap
        return count

    def window(self, x1_lo: float, x1_hi: float) -> Tuple['GridDomain', slice]:
        """Aligned sub-grid covering the columns whose centers lie in [x1_lo, x1_hi]."""
        cols = np.nonzero((self.x1 >= x1_lo - 1e-9) & (self.x1 <= x1_hi + 1e-9))[0]
        if cols.size == 0:
            raise ValueError(f"Window [{x1_lo}, {x1_hi}] misses the grid")
        sl = slice(int(cols[0]), int(cols[-1]) + 1)
        sub = GridDomain(h=self.h, x1_min=self.x1_min + sl.start * self.h, fluid=self.fluid[sl].copy(),
                         lateral_bc=self.lateral_bc, M=self.M, spec=self.spec)
        return sub, sl

    def with_fluid(self, fluid: np.ndarray) -> 'GridDomain':
        return GridDomain(h=self.h, x1_min=self.x1_min, fluid=fluid, lateral_bc=self.lateral_bc,
                          M=self.M, spec=self.spec)

    def _annotate_walls(self) -> Dict[str, np.ndarray]:
        """Fluid cells next to a solid cell, keyed by the inward normal of that wall face."""
        f = self.fluid
        s = ~f
        left = np.zeros_like(f)
        right = np.zeros_like(f)
        below = np.zeros_like(f)
        above = np.zeros_like(f)
        left[1:, :] = f[1:, :] & s[:-1, :]
        right[:-1, :] = f[:-1, :] & s[1:, :]
        below[:, 1:] = f[:, 1:] & s[:, :-1]
        above[:, :-1] = f[:, :-1] & s[:, 1:]
        if self.lateral_bc == 'periodic':
            below[:, 0] = f[:, 0] & s[:, -1]
            above[:, -1] = f[:, -1] & s[:, 0]
        return {'+x1': left, '-x1': right, '+y': below, '-y': above}


def fluid_components(fluid: np.ndarray, periodic: bool) -> Tuple[np.ndarray, int]:
    """4-connected components of the fluid mask, glued across the lateral seam when periodic."""
    labels, n = ndi.label(fluid)
    if periodic and n > 1:
        parent = np.arange(n + 1)

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        seam = fluid[:, 0] & fluid[:, -1]
        for p, q in zip(labels[seam, 0], labels[seam, -1]):
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[max(rp, rq)] = min(rp, rq)
        roots = np.array([find(k) for k in range(n + 1)])
        _, relabel = np.unique(roots, return_inverse=True)
        labels = relabel[labels]
        n = int(relabel.max())
    return labels, n


def rasterize(spec, h: Optional[float] = None, extent: Optional[Tuple[float, float, float]] = None,
              lateral_bc: Optional[str] = None, require_connected: bool = True) -> GridDomain:
    """
    Rasterize an obstacle by cell-center membership.

    Args:
        spec: Obstacle specification
        h: Grid spacing (GRID_CONFIG default)
        extent: (x1_min, x1_max, height); defaults to [-left_margin, M + right_margin] and the
            obstacle period (or the configured height)
        lateral_bc: 'periodic' or 'reflecting'
        require_connected: raise DisconnectedComplement when the fluid cells split

    Returns:
        GridDomain with masks and wall annotations
    """
    cfg = GRID_CONFIG
    h = float(h if h is not None else cfg['h'])
    if h <= 0:
        raise ValueError(f"Grid spacing must be positive, got {h}")
    spec = spec if spec is not None else Empty()
    if extent is None:
        height = spec.period or cfg['height']
        extent = (-cfg['left_margin'], spec.M + cfg['right_margin'], height)
    x1_min, x1_max, height = map(float, extent)

    nx = int(round((x1_max - x1_min) / h))
    ny = int(round(height / h))
    if nx < 2 or ny < 1:
        raise ValueError(f"Extent {extent} holds no cells at h={h}")
    if abs(ny * h - height) > 1e-6 * max(h, 1.0) or abs(round(x1_min / h) * h - x1_min) > 1e-6 * max(h, 1.0):
        raise ValueError(f"Extent {extent} is not aligned with h={h}")

    lateral_bc = lateral_bc or cfg['lateral_bc']
    X = x1_min + (np.arange(nx)[:, None] + 0.5) * h + np.zeros((1, ny))
    Y = (np.arange(ny)[None, :] + 0.5) * h + np.zeros((nx, 1))
    solid = spec.solid_mask(X, Y, height if lateral_bc == 'periodic' else None)

    if solid.any():
        xs = X[solid]
        if xs.min() < -1e-9 or xs.max() > spec.M + 1e-9:
            raise ObstacleOutsideSlab(f"{spec.kind} has solid cells outside 0 <= x1 <= {spec.M}")

    fluid = ~solid
    if require_connected:
        _, n = fluid_components(fluid, lateral_bc == 'periodic')
        if n != 1:
            raise DisconnectedComplement(f"{spec.kind} splits the fluid into {n} components at h={h}")

    grid = GridDomain(h=h, x1_min=x1_min, fluid=fluid, lateral_bc=lateral_bc, M=float(spec.M), spec=spec)

    if isinstance(spec, ConvexBlock):
        from geometry.measures import is_directionally_convex
        if not is_directionally_convex(grid):
            raise InvalidObstacle("ConvexBlock is not directionally convex on the grid")

    logger.info(f"Rasterized {spec.kind}: {nx}x{ny} cells at h={h}, {int(solid.sum())} solid")
    return grid


@dataclass(eq=False)
class ScalarField:
    """Grid function with values held at zero on solid cells."""

    grid: GridDomain
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            values = np.broadcast_to(values, self.grid.shape)
        self.values = np.where(self.grid.fluid, values, 0.0)

    @classmethod
    def zeros(cls, grid: GridDomain) -> 'ScalarField':
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid: GridDomain, value: float) -> 'ScalarField':
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_x1(cls, grid: GridDomain, profile) -> 'ScalarField':
        """Broadcast a function of x1 over the strip."""
        column = np.asarray(profile(grid.x1), dtype=float)
        return cls(grid, np.repeat(column[:, None], grid.ny, axis=1))

    def copy(self) -> 'ScalarField':
        return ScalarField(self.grid, self.values.copy())

    def fluid_values(self) -> np.ndarray:
        return self.values[self.grid.fluid]

    def min(self) -> float:
        return float(self.fluid_values().min())

    def max(self) -> float:
        return float(self.fluid_values().max())

    def maximum(self, other: 'ScalarField') -> 'ScalarField':
        return ScalarField(self.grid, np.maximum(self.values, other.values))

    def minimum(self, other: 'ScalarField') -> 'ScalarField':
        return ScalarField(self.grid, np.minimum(self.values, other.values))

    def clip(self, lo: float = 0.0, hi: float = 1.0) -> 'ScalarField':
        return ScalarField(self.grid, np.clip(self.values, lo, hi))

    def max_abs_diff(self, other: 'ScalarField') -> float:
        return float(np.abs(self.values - other.values)[self.grid.fluid].max())

    def dominated_by(self, other: 'ScalarField', tol: float = 0.0) -> bool:
        return bool(np.all((self.values <= other.values + tol)[self.grid.fluid]))

    def region(self, mask: np.ndarray) -> np.ndarray:
        return self.values[mask & self.grid.fluid]

    def centerline(self) -> np.ndarray:
        return self.values[:, self.grid.centerline]
