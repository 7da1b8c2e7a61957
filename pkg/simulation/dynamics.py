"""
Frontlab - Entire Solution Dynamics
Sup-over-shifts initializer for the monotone entire solution, the propagation/blocking
classifier on its limit profile, universality runs and the sliding experiments.
"""

import pandas as pd
import numpy as np
from typing import Dict, List, Optional, Sequence, Tuple
import logging
from dataclasses import dataclass, field
from functools import cached_property

from scipy.optimize import brentq

from config import DYNAMICS_CONFIG, GRID_CONFIG, RADIAL_CONFIG
from exceptions import FrontTooClose, PathTooClose
from geometry.grid import GridDomain, ScalarField, rasterize
from geometry.obstacles import Debris, Empty, PeriodicSlits
from geometry.measures import tunnel_clearance
from simulation.solver import RunResult, StepConfig, probe_mask, run_to_steady
from theory.nonlinearity import (
    Nonlinearity, SuperSubPair, WaveProfile, build_super_sub_pair, eval_super_sub,
    solve_H, solve_rho, solve_wave_profile,
)
from theory.radial import RadialBubble, distance_to_obstacle, embed_bubble, find_R0, solve_bubble

logger = logging.getLogger(__name__)

VERDICTS = ('Propagation', 'Blocking', 'Undecided')


def choose_t_start(pair: SuperSubPair, gap: Optional[float] = None) -> float:
    """Time at which the leading branch of w- sits gap units left of x1 = 0."""
    gap = DYNAMICS_CONFIG['front_gap'] if gap is None else gap
    g = lambda t: pair.front_position(t) + gap
    t_hi = pair.T_prime
    if g(t_hi) <= 0.0:
        raise FrontTooClose(f"The front of w- never reaches x1=-{gap} before T'={t_hi:.3f}")
    t_lo = t_hi - (gap + 50.0) / pair.c
    while g(t_lo) > 0.0:
        t_lo -= 50.0 / pair.c
    return brentq(g, t_lo, t_hi, xtol=1e-12)


def build_entire_initial(wp: WaveProfile, pair: SuperSubPair, grid: GridDomain,
                         t_start: Optional[float] = None) -> ScalarField:
    """
    Running maximum of w-(s, .) over a sampled s-grid ending at t_start.

    The maximum of shifted stationary subsolutions is again a subsolution of the discrete
    scheme, so the evolution started here is nondecreasing in time.

    Raises:
        FrontTooClose: t_start lies past T' or puts the front closer than min_front_gap to the wall
    """
    cfg = DYNAMICS_CONFIG
    t_start = choose_t_start(pair) if t_start is None else float(t_start)
    front = pair.front_position(t_start) if t_start <= pair.T else np.inf
    if t_start > pair.T_prime or front > -cfg['min_front_gap']:
        raise FrontTooClose(f"t_start={t_start:.3f} puts the front at x1={front:.3f}")

    s_grid = np.linspace(t_start - cfg['sup_span'] / pair.c, t_start, cfg['sup_points'])
    column = np.zeros(grid.nx)
    for s in s_grid:
        w_minus, _ = eval_super_sub(pair, wp, s, grid.x1)
        np.maximum(column, w_minus, out=column)
    return ScalarField.from_x1(grid, lambda x1: column)


def plain_initial(wp: WaveProfile, pair: SuperSubPair, grid: GridDomain, t_start: float) -> ScalarField:
    """w-(t_start, .) alone, without the sup over earlier shifts."""
    w_minus, _ = eval_super_sub(pair, wp, t_start, grid.x1)
    return ScalarField.from_x1(grid, lambda x1: w_minus)


def monotonicity_check(run: RunResult) -> float:
    """Most negative per-step pointwise increment of the run (0 when it never decreased)."""
    return float(min(0.0, run.max_negative_increment))


@dataclass(eq=False)
class ClassificationResult:
    """Verdict on the limit profile from the probe window x1 >= M + probe_offset."""

    verdict: str
    probe_min: float
    probe_max: float
    front_history: pd.DataFrame
    residual: float
    run: RunResult
    t_start: float
    eps: float

    @property
    def v_bar(self) -> ScalarField:
        return self.run.field

    @property
    def grid(self) -> GridDomain:
        return self.run.field.grid

    def to_dict(self) -> Dict:
        return {
            'verdict': self.verdict,
            'probe_min': self.probe_min,
            'probe_max': self.probe_max,
            'residual': self.residual,
            't_start': self.t_start,
            'eps': self.eps,
            'max_negative_increment': monotonicity_check(self.run),
            **self.run.summary(),
        }


def classify(run: RunResult, eps: Optional[float] = None, probe: Optional[np.ndarray] = None) -> Tuple[str, float, float]:
    eps = DYNAMICS_CONFIG['eps_cls'] if eps is None else eps
    v_bar = run.field
    probe = probe_mask(v_bar.grid) if probe is None else probe
    if not probe.any():
        raise ValueError("Probe window holds no fluid cells; enlarge the right margin")
    vals = v_bar.values[probe]
    lo, hi = float(vals.min()), float(vals.max())
    if run.horizon_reached:
        verdict = 'Undecided'
    elif lo >= 1.0 - eps:
        verdict = 'Propagation'
    elif hi <= eps:
        verdict = 'Blocking'
    else:
        verdict = 'Undecided'
    return verdict, lo, hi


@dataclass(eq=False)
class SlideReport:
    """Measure of {rho^lambda > v_bar} in one periodicity cell for each sampled lambda."""

    lambdas: np.ndarray
    D_measure: np.ndarray
    max_violation: float
    nu: float
    h: float

    @property
    def within_nu(self) -> bool:
        return bool(self.max_violation <= self.nu)

    def is_nondecreasing(self, tol: Optional[float] = None) -> bool:
        tol = self.h ** 2 if tol is None else tol
        return bool(np.all(np.diff(self.D_measure) >= -tol - 1e-12))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'lambda': self.lambdas, 'D_measure': self.D_measure})


class PropagationLab:
    """
    Entire-solution experiments for one nonlinearity.

    The wave profile, sub/supersolution pair, H, critical radius and bubbles are computed on
    first use and reused across experiments.
    """

    def __init__(self, nl: Optional[Nonlinearity] = None, h: Optional[float] = None,
                 step_overrides: Optional[Dict] = None,
                 margins: Optional[Tuple[float, float]] = None):
        self.config = DYNAMICS_CONFIG
        self.nl = nl or Nonlinearity.from_config()
        self.h = float(h if h is not None else GRID_CONFIG['h'])
        self.step_overrides = {k: v for k, v in (step_overrides or {}).items() if v is not None}
        self.margins = margins

    # -- cached theory objects ------------------------------------------------

    @cached_property
    def wave(self) -> WaveProfile:
        return solve_wave_profile(self.nl)

    @cached_property
    def pair(self) -> SuperSubPair:
        return build_super_sub_pair(self.nl, self.wave)

    @cached_property
    def H(self):
        return solve_H(self.nl)

    @cached_property
    def R0(self) -> float:
        return find_R0(self.nl, 2)

    @cached_property
    def critical_bubble(self) -> RadialBubble:
        return solve_bubble(self.nl, self.R0, 2)

    @cached_property
    def growing_bubble(self) -> RadialBubble:
        return solve_bubble(self.nl, RADIAL_CONFIG['bubble_scale'] * self.R0, 2)

    # -- runs -----------------------------------------------------------------

    def grid_for(self, spec) -> GridDomain:
        """Rasterize at the lab spacing; margins = (left, right) shortens the strip around the wall."""
        spec = spec if spec is not None else Empty()
        if self.margins is None:
            return rasterize(spec, self.h)
        left, right = self.margins
        height = spec.period or GRID_CONFIG['height']
        return rasterize(spec, self.h, extent=(-left, spec.M + right, height))

    def step_config(self, grid: GridDomain) -> StepConfig:
        return StepConfig.for_grid(grid, **self.step_overrides)

    def limit_profile(self, spec=None, grid: Optional[GridDomain] = None, observers: Sequence = (),
                      t_start: Optional[float] = None) -> Tuple[ScalarField, ClassificationResult]:
        """
        Evolve from the sup-initializer to steady state and classify the limit profile.

        Args:
            spec: Obstacle specification (ignored when grid is given)
            grid: Pre-rasterized domain
            observers: Extra run observers, e.g. barrier dominance checks
            t_start: Start time of the initializer (front 20 units left of the wall by default)

        Returns:
            (v_bar, ClassificationResult); a run that hits t_max is classified Undecided
        """
        try:
            grid = grid if grid is not None else self.grid_for(spec)
            t_start = choose_t_start(self.pair) if t_start is None else t_start
            u0 = build_entire_initial(self.wave, self.pair, grid, t_start)
            run = run_to_steady(u0, self.nl, self.step_config(grid), observers=observers)
            verdict, lo, hi = classify(run)
            result = ClassificationResult(verdict=verdict, probe_min=lo, probe_max=hi,
                                          front_history=run.history, residual=run.final_rate, run=run,
                                          t_start=t_start, eps=self.config['eps_cls'])
            name = getattr(grid.spec, 'kind', 'grid')
            logger.info(f"Limit profile of {name}: {verdict} (probe in [{lo:.4f}, {hi:.4f}], t={run.t:.1f})")
            return run.field, result

        except Exception as e:
            logger.error(f"Limit profile failed: {e}")
            raise

    def run_from(self, u0: ScalarField) -> RunResult:
        return run_to_steady(u0, self.nl, self.step_config(u0.grid))

    # -- universality ---------------------------------------------------------

    def default_bubble_center(self, grid: GridDomain, bubble: Optional[RadialBubble] = None) -> Tuple[float, float]:
        bubble = bubble or self.growing_bubble
        return -(bubble.R + 10.0), grid.height / 2.0

    def universality_check(self, spec=None, P: Optional[Tuple[float, float]] = None,
                           reference: Optional[ClassificationResult] = None,
                           grid: Optional[GridDomain] = None) -> float:
        """
        Evolve Psi^P and H(x1) to steady state and compare both with v_bar.

        Returns:
            max-norm distance of the two terminal fields from v_bar

        Raises:
            TooCloseToObstacle: the bubble around P reaches the obstacle
        """
        try:
            if reference is None:
                _, reference = self.limit_profile(spec, grid=grid)
            grid = reference.grid
            bubble = self.growing_bubble
            P = P if P is not None else self.default_bubble_center(grid, bubble)
            psi_p = embed_bubble(bubble, P, grid)
            h_field = ScalarField.from_x1(grid, self.H)
            if not psi_p.dominated_by(h_field, 1e-12):
                logger.warning("Psi^P is not below H(x1) at t=0; move P further left")

            v_bar = reference.v_bar
            from_bubble = self.run_from(psi_p)
            from_H = self.run_from(h_field)
            gap = max(from_bubble.field.max_abs_diff(v_bar), from_H.field.max_abs_diff(v_bar))
            logger.info(f"Universality gap: {gap:.3e} (bubble center {P}, R={bubble.R:.3f})")
            return gap

        except Exception as e:
            logger.error(f"Universality check failed: {e}")
            raise

    # -- sliding experiments --------------------------------------------------

    def slide_bubble(self, reference: ClassificationResult, path: Sequence[Tuple[float, float]],
                     bubble: Optional[RadialBubble] = None, tol: Optional[float] = None) -> bool:
        """
        Check Psi^{P(s)} <= v_bar + tol at points spaced h along the polyline path.

        Raises:
            PathTooClose: a sampled point is closer than the bubble radius to the obstacle
        """
        tol = self.config['slide_tol'] if tol is None else tol
        bubble = bubble or self.critical_bubble
        grid = reference.grid
        v_bar = reference.v_bar
        points = _sample_path(path, grid.h)
        for P in points:
            if distance_to_obstacle(grid, P) < bubble.R:
                raise PathTooClose(f"Path point {tuple(np.round(P, 4))} is within {bubble.R:.3f} of the obstacle")
        worst = -np.inf
        for P in points:
            psi_p = embed_bubble(bubble, P, grid)
            worst = max(worst, float(np.max((psi_p.values - v_bar.values)[grid.fluid])))
        ok = worst <= tol
        logger.info(f"Bubble slide over {len(points)} points: {'passes' if ok else 'fails'} (max excess {worst:.3e})")
        return ok

    def slide_W(self, reference: ClassificationResult, lambdas: Optional[Sequence[float]] = None,
                delta_f: Optional[float] = None, tol: Optional[float] = None) -> bool:
        """W^lambda = max(rho(x1 - lambda), rho(M - x1 - lambda)) stays below v_bar for all lambda."""
        tol = self.config['slide_tol'] if tol is None else tol
        delta_f = self.config['rho_delta'] if delta_f is None else delta_f
        grid = reference.grid
        rho = solve_rho(self.nl, delta_f)
        lambdas = self._default_lambdas(grid, rho) if lambdas is None else np.asarray(lambdas, dtype=float)
        floor = _column_floor(reference.v_bar)
        M = grid.M
        for lam in lambdas:
            W = np.maximum(rho(grid.x1 - lam), rho(M - grid.x1 - lam))
            if np.any(W > floor + tol):
                logger.info(f"W^lambda exceeds v_bar at lambda={lam:.3f}")
                return False
        logger.info(f"W^lambda slides below v_bar for {len(lambdas)} values of lambda")
        return True

    def slide_rho(self, reference: ClassificationResult, lambdas: Optional[Sequence[float]] = None,
                  delta_f: Optional[float] = None) -> SlideReport:
        """Measure |{rho(x1 - lambda) > v_bar}| over the periodicity cell for each lambda."""
        delta_f = self.config['rho_delta'] if delta_f is None else delta_f
        grid = reference.grid
        rho = solve_rho(self.nl, delta_f)
        lambdas = self._default_lambdas(grid, rho) if lambdas is None else np.asarray(lambdas, dtype=float)
        v = reference.v_bar.values
        measures = np.empty(len(lambdas))
        for k, lam in enumerate(lambdas):
            above = (rho(grid.x1 - lam)[:, None] > v) & grid.fluid
            measures[k] = above.sum() * grid.cell_area
        report = SlideReport(lambdas=lambdas, D_measure=measures, max_violation=float(measures.max(initial=0.0)),
                             nu=self.config['nu_fraction'] * grid.height, h=grid.h)
        logger.info(f"rho slide: sup |D^lambda| = {report.max_violation:.4f} (nu = {report.nu:.4f})")
        return report

    def _default_lambdas(self, grid: GridDomain, rho) -> np.ndarray:
        span = abs(float(rho.z[0]))
        return np.arange(grid.x1_min, grid.x1_max + span + 1.0, 1.0)

    # -- experiment families --------------------------------------------------

    def blocking_sequence(self, widths: Sequence[float], thickness: float = 1.0,
                          period: float = 4.0) -> pd.DataFrame:
        """Classify periodic slit walls with decreasing slit widths."""
        rows = []
        for width in sorted(widths, reverse=True):
            spec = PeriodicSlits(thickness=thickness, slit_width=width, period=period)
            _, result = self.limit_profile(spec)
            rows.append({'slit_width': width, 'verdict': result.verdict,
                         'probe_min': result.probe_min, 'probe_max': result.probe_max})
        return pd.DataFrame(rows)

    def debris_sweep(self, base: Debris, radii: Sequence[float]) -> pd.DataFrame:
        """Classify the same debris layout for several disk radii."""
        rows = []
        for r in radii:
            spec = Debris(disk_centers=base.disk_centers, disk_radius=float(r), base=base.base)
            v_bar, result = self.limit_profile(spec)
            rows.append({'disk_radius': float(r), 'clearance': tunnel_clearance(spec, result.grid),
                         'verdict': result.verdict, 'probe_min': result.probe_min,
                         'probe_max': result.probe_max})
        return pd.DataFrame(rows)


def _column_floor(field: ScalarField) -> np.ndarray:
    """Minimum of a field over the fluid cells of each column (inf on fully solid columns)."""
    masked = np.where(field.grid.fluid, field.values, np.inf)
    return masked.min(axis=1)


def _sample_path(path: Sequence[Tuple[float, float]], spacing: float) -> List[Tuple[float, float]]:
    vertices = np.asarray(path, dtype=float)
    if vertices.ndim != 2 or vertices.shape[1] != 2 or len(vertices) < 1:
        raise ValueError("Path must be a list of (x1, y) vertices")
    points = [tuple(vertices[0])]
    for p, q in zip(vertices[:-1], vertices[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(q - p) / spacing)))
        for s in np.linspace(0.0, 1.0, n + 1)[1:]:
            points.append(tuple(p + s * (q - p)))
    return points
