"""
Frontlab - Explicit Reaction-Diffusion Solver
Forward Euler stepping of u_t = Lu + f(u) with the 5-point flux stencil, zero flux across
solid faces and reflecting ends, steady-state detection and run histories.
"""

import pandas as pd
import numpy as np
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging
from dataclasses import dataclass, field

from config import DYNAMICS_CONFIG, SOLVER_CONFIG
from exceptions import CFLViolation, HorizonReached
from geometry.grid import GridDomain, ScalarField
from theory.nonlinearity import Nonlinearity

logger = logging.getLogger(__name__)

Observer = Callable[[float, ScalarField], None]


@dataclass(frozen=True)
class StepConfig:
    """Time stepping parameters; dt * 4 / h^2 must not exceed cfl_factor <= 0.8."""

    dt: float
    cfl_factor: float = SOLVER_CONFIG['cfl_factor']
    steady_tol: float = SOLVER_CONFIG['steady_tol']
    t_max: float = SOLVER_CONFIG['t_max']
    record_every: float = SOLVER_CONFIG['record_every']
    snapshot_every: int = SOLVER_CONFIG['snapshot_every']

    @classmethod
    def for_grid(cls, grid: GridDomain, dt: Optional[float] = None, **overrides) -> 'StepConfig':
        """Largest admissible dt for the grid unless dt is given explicitly."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        cfl = overrides.pop('cfl_factor', SOLVER_CONFIG['cfl_factor'])
        if dt is None:
            dt = cfl * grid.h ** 2 / 4.0
        return cls(dt=float(dt), cfl_factor=cfl, **overrides)

    def check(self, h: float):
        limit = SOLVER_CONFIG['max_cfl_factor'] * h ** 2 / 4.0
        if self.cfl_factor > SOLVER_CONFIG['max_cfl_factor'] or self.dt > limit * (1.0 + 1e-12) or self.dt <= 0:
            raise CFLViolation(f"dt={self.dt:.3e} exceeds the monotone bound {limit:.3e} at h={h}")


def laplacian(values: np.ndarray, grid: GridDomain) -> np.ndarray:
    """Flux-form 5-point Laplacian; closed faces carry no flux."""
    lap = np.zeros_like(values)
    flux = (values[1:, :] - values[:-1, :]) * grid.open_x
    lap[:-1, :] += flux
    lap[1:, :] -= flux
    flux = (values[:, 1:] - values[:, :-1]) * grid.open_y
    lap[:, :-1] += flux
    lap[:, 1:] -= flux
    if grid.lateral_bc == 'periodic':
        flux = (values[:, 0] - values[:, -1]) * grid.open_wrap
        lap[:, -1] += flux
        lap[:, 0] -= flux
    return lap / grid.h ** 2


def step(u: ScalarField, nl: Nonlinearity, cfg: StepConfig) -> ScalarField:
    """One forward Euler step; returns a new field."""
    cfg.check(u.grid.h)
    return ScalarField(u.grid, _advance(u.values, u.grid, nl, cfg.dt))


def _advance(values: np.ndarray, grid: GridDomain, nl: Nonlinearity, dt: float) -> np.ndarray:
    new = values + dt * (laplacian(values, grid) + nl.f(values))
    new[~grid.fluid] = 0.0
    return new


def front_position(u: ScalarField, row: Optional[int] = None) -> float:
    """
    Rightmost linear-interpolated 0.5 crossing along a row (the centerline by default).

    Pairs of cells with a solid cell between them are skipped. Returns the right edge of
    the row when it is above 0.5 everywhere and nan when it never reaches 0.5.
    """
    grid = u.grid
    j = grid.centerline if row is None else row
    v = u.values[:, j]
    fluid = grid.fluid[:, j]
    if not fluid.any():
        return np.nan
    pair = fluid[:-1] & fluid[1:] & (v[:-1] >= 0.5) & (v[1:] < 0.5)
    idx = np.flatnonzero(pair)
    if idx.size:
        i = idx[-1]
        return float(grid.x1[i] + (v[i] - 0.5) / (v[i] - v[i + 1]) * grid.h)
    if np.all(v[fluid] >= 0.5):
        return float(grid.x1[fluid][-1])
    above = np.flatnonzero(fluid & (v >= 0.5))
    if above.size:
        return float(grid.x1[above[-1]])
    return np.nan


def front_speed(history: pd.DataFrame, x1_cap: Optional[float] = None) -> float:
    """Least squares slope of front_x against t over the second half of the history."""
    data = history.dropna(subset=['front_x'])
    if x1_cap is not None:
        data = data[data['front_x'] < x1_cap]
    data = data.iloc[len(data) // 2:]
    if len(data) < 2:
        return np.nan
    slope, _ = np.polyfit(data['t'].to_numpy(), data['front_x'].to_numpy(), 1)
    return float(slope)


@dataclass(eq=False)
class RunResult:
    """Outcome of run_to_steady; HorizonReached is a flag here, raised only by require_steady."""

    field: ScalarField
    history: pd.DataFrame
    t: float
    steps: int
    converged: bool
    horizon_reached: bool
    max_negative_increment: float
    final_rate: float
    snapshots: List[Tuple[float, np.ndarray]] = field(default_factory=list)

    def require_steady(self) -> 'RunResult':
        if self.horizon_reached:
            raise HorizonReached(f"Run stopped at t={self.t:.2f} with rate {self.final_rate:.3e}")
        return self

    def summary(self) -> Dict:
        return {
            't': self.t,
            'steps': self.steps,
            'converged': self.converged,
            'horizon_reached': self.horizon_reached,
            'max_negative_increment': self.max_negative_increment,
            'final_rate': self.final_rate,
        }


def probe_mask(grid: GridDomain, offset: Optional[float] = None) -> np.ndarray:
    """Fluid cells with x1 >= M + offset."""
    offset = DYNAMICS_CONFIG['probe_offset'] if offset is None else offset
    cols = grid.x1 >= grid.M + offset
    return grid.fluid & cols[:, None]


def run_to_steady(u0: ScalarField, nl: Nonlinearity, cfg: StepConfig,
                  observers: Sequence[Observer] = (), probe: Optional[np.ndarray] = None) -> RunResult:
    """
    Step until the max-norm rate |u_new - u| / dt drops below steady_tol or t reaches t_max.

    Args:
        u0: Initial field with values in [0, 1]
        nl: Bistable nonlinearity
        cfg: Step configuration
        observers: Callables (t, field) invoked at every record time
        probe: Cells whose min/max are recorded (x1 >= M + probe_offset by default)

    Returns:
        RunResult with the terminal field and a history of (t, front_x, probe_min, probe_max, rate)
    """
    grid = u0.grid
    cfg.check(grid.h)
    probe = probe_mask(grid) if probe is None else probe
    record_stride = max(1, int(round(cfg.record_every / cfg.dt)))
    snapshot_stride = int(cfg.snapshot_every or 0)

    values = u0.values.copy()
    rows = []
    snapshots = []
    t, n = 0.0, 0
    min_increment = 0.0
    rate = np.inf
    converged = False

    def record(t_now: float, vals: np.ndarray, rate_now: float):
        current = ScalarField(grid, vals)
        probe_vals = vals[probe] if probe.any() else np.array([np.nan])
        rows.append({
            't': t_now,
            'front_x': front_position(current),
            'probe_min': float(np.min(probe_vals)),
            'probe_max': float(np.max(probe_vals)),
            'rate': rate_now,
        })
        for observer in observers:
            observer(t_now, current)

    try:
        record(t, values, np.nan)
        while t < cfg.t_max - 1e-12:
            new = _advance(values, grid, nl, cfg.dt)
            increment = new - values
            min_increment = min(min_increment, float(increment.min()))
            rate = float(np.abs(increment).max()) / cfg.dt
            values = new
            t = (n + 1) * cfg.dt
            n += 1
            if snapshot_stride and n % snapshot_stride == 0:
                snapshots.append((t, values.copy()))
            if rate < cfg.steady_tol:
                converged = True
                break
            if n % record_stride == 0:
                record(t, values, rate)
                logger.debug(f"t={t:.2f}: rate={rate:.3e}, front={rows[-1]['front_x']:.3f}")
        record(t, values, rate)

        history = pd.DataFrame(rows, columns=['t', 'front_x', 'probe_min', 'probe_max', 'rate'])
        history = history.drop_duplicates(subset='t', keep='last').reset_index(drop=True)
        result = RunResult(field=ScalarField(grid, values), history=history, t=t, steps=n,
                           converged=converged, horizon_reached=not converged,
                           max_negative_increment=min_increment, final_rate=rate, snapshots=snapshots)
        if converged:
            logger.info(f"Run converged at t={t:.2f} after {n} steps")
        else:
            logger.warning(f"Run reached the horizon t_max={cfg.t_max} with rate {rate:.3e}")
        return result

    except Exception as e:
        logger.error(f"Run failed at t={t:.2f}: {e}")
        raise


def compare_evolutions(u0: ScalarField, v0: ScalarField, nl: Nonlinearity, cfg: StepConfig,
                       tol: Optional[float] = None) -> bool:
    """Evolve both fields side by side up to t_max; True when u <= v + tol after every step."""
    tol = SOLVER_CONFIG['order_tol'] if tol is None else tol
    grid = u0.grid
    cfg.check(grid.h)
    u, v = u0.values.copy(), v0.values.copy()
    if np.any(u > v + tol):
        logger.warning("Initial pair is not ordered")
        return False
    n_steps = int(round(cfg.t_max / cfg.dt))
    for n in range(n_steps):
        u = _advance(u, grid, nl, cfg.dt)
        v = _advance(v, grid, nl, cfg.dt)
        if np.any(u > v + tol):
            logger.warning(f"Ordering lost at step {n + 1}")
            return False
    return True
