"""
Frontlab - Scenario Runner
Loads JSON scenario files, runs the limit-profile classification with the requested companion
checks (slides, certificates, universality) and aggregates suites in a worker pool.
"""

import json
import os
import time
import pandas as pd
import numpy as np
from typing import Any, Callable, Dict, List, Optional, Tuple
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace

from tqdm import tqdm

from config import BARRIER_CONFIG, DYNAMICS_CONFIG, GRID_CONFIG, SCENARIO_CONFIG
from exceptions import FrontlabError, InvalidObstacle, ScenarioError
from geometry.grid import GridDomain, rasterize
from geometry.measures import blade_flux, is_directionally_convex, tunnel_clearance
from geometry.obstacles import (
    ConvexBlock, Debris, ParallelBlades, PeriodicSlits, Reservoir, SlabWithHoles, obstacle_from_dict,
    obstacle_to_dict,
)
from simulation.dynamics import ClassificationResult, PropagationLab, monotonicity_check
from simulation.solver import front_speed
from theory.nonlinearity import Nonlinearity
from theory.radial import find_R0
from barrier.certificate import DominanceMonitor, cavity_mean, minimize_barrier, reservoir_barrier
from barrier.energy import BarrierConfig
from barrier.poincare import empirical_poincare_constant
from visualization.outputs import write_csv, write_json, write_pgm

logger = logging.getLogger(__name__)

SCENARIO_KEYS = {'name', 'description', 'obstacle', 'grid', 'run', 'checks', 'alpha', 'seed', 'tunnel'}
GRID_KEYS = {'h', 'extent', 'lateral_bc'}
TUNNEL_KEYS = {'center', 'margin_cells'}
RUN_KEYS = {'dt', 't_max', 'cfl_factor', 'steady_tol', 'record_every', 'snapshot_every'}


@dataclass
class Scenario:
    """One experiment: an obstacle, its resolution, run overrides and the checks to evaluate."""

    name: str
    obstacle: Any
    h: float
    run: Dict = field(default_factory=dict)
    checks: List[Dict] = field(default_factory=list)
    extent: Optional[Tuple[float, float, float]] = None
    lateral_bc: Optional[str] = None
    alpha: Optional[float] = None
    seed: int = SCENARIO_CONFIG['seed']
    description: str = ''
    path: Optional[str] = None
    tunnel: Optional[Dict] = None

    def with_overrides(self, h: Optional[float] = None, dt: Optional[float] = None,
                       t_max: Optional[float] = None, seed: Optional[int] = None) -> 'Scenario':
        """Copy with command line overrides applied; None keeps the file's value."""
        run = dict(self.run)
        if dt is not None:
            run['dt'] = dt
        if t_max is not None:
            run['t_max'] = t_max
        return Scenario(name=self.name, obstacle=self.obstacle, h=h if h is not None else self.h, run=run,
                        checks=list(self.checks), extent=self.extent, lateral_bc=self.lateral_bc,
                        alpha=self.alpha, seed=self.seed if seed is None else seed,
                        description=self.description, path=self.path, tunnel=self.tunnel)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'description': self.description,
            'obstacle': obstacle_to_dict(self.obstacle),
            'grid': {'h': self.h, 'extent': self.extent, 'lateral_bc': self.lateral_bc},
            'run': self.run,
            'checks': self.checks,
            'alpha': self.alpha,
            'seed': self.seed,
            'tunnel': self.tunnel,
        }


# -- loading -------------------------------------------------------------------

def _line_of(text: str, key: str) -> Optional[int]:
    """First line of the file mentioning "key"."""
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def feature_sizes(spec) -> Dict[str, float]:
    """Smallest lengths of a wall that the grid has to resolve."""
    if isinstance(spec, PeriodicSlits):
        sizes = {'thickness': spec.thickness}
        if spec.slit_width > 0:
            sizes['slit_width'] = spec.slit_width
        return sizes
    if isinstance(spec, SlabWithHoles):
        sizes = {'thickness': spec.b - spec.a}
        if spec.hole_rects:
            sizes['hole_width'] = min(y1 - y0 for y0, y1 in spec.hole_rects)
        return sizes
    if isinstance(spec, ParallelBlades):
        return {'gap': spec.gap}
    if isinstance(spec, Debris):
        sizes = {'disk_diameter': 2.0 * spec.disk_radius} if spec.disk_centers else {}
        if spec.base is not None:
            sizes['tunnel_width'] = spec.base[2][1] - spec.base[2][0]
        return sizes
    if isinstance(spec, Reservoir):
        return {'mouth_width': spec.mouth_width, 'entrance_len': spec.entrance_len, 'shell': spec.shell}
    if isinstance(spec, ConvexBlock):
        return {'length': spec.M - spec.profile[0][0]}
    return {}


def check_resolution(spec, h: float, min_cells: Optional[int] = None) -> List[str]:
    """Names of features narrower than min_cells grid cells (blades only need one cell)."""
    min_cells = min_cells or SCENARIO_CONFIG['min_cells_per_feature']
    coarse = [name for name, size in feature_sizes(spec).items() if size < min_cells * h - 1e-9]
    if isinstance(spec, ParallelBlades) and spec.count and spec.blade_thickness < h - 1e-9:
        coarse.append('blade_thickness')
    return coarse


def load_scenario(path: str) -> Scenario:
    """
    Parse and validate a scenario file.

    Raises:
        ScenarioError: unreadable file, malformed JSON, schema violations or a resolution
            too coarse for the obstacle; the error carries the file path and line
    """
    if not os.path.isfile(path):
        raise ScenarioError("Scenario file does not exist", path=path)
    with open(path, 'r', encoding='utf-8') as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Malformed JSON: {e.msg}", path=path, line=e.lineno)
    if not isinstance(data, dict):
        raise ScenarioError("Scenario must be a JSON object", path=path, line=1)

    unknown = set(data) - SCENARIO_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ScenarioError(f"Unknown scenario field '{key}'", path=path, line=_line_of(text, key))
    for key in ('name', 'obstacle'):
        if key not in data:
            raise ScenarioError(f"Missing required field '{key}'", path=path)

    obstacle_data = data['obstacle']
    if isinstance(obstacle_data, str):
        ref = os.path.join(os.path.dirname(os.path.abspath(path)), obstacle_data)
        if not os.path.isfile(ref):
            raise ScenarioError(f"Referenced obstacle file '{obstacle_data}' does not exist",
                                path=path, line=_line_of(text, 'obstacle'))
        with open(ref, 'r', encoding='utf-8') as fh:
            try:
                obstacle_data = json.load(fh)
            except json.JSONDecodeError as e:
                raise ScenarioError(f"Malformed JSON: {e.msg}", path=ref, line=e.lineno)
    try:
        obstacle = obstacle_from_dict(obstacle_data)
    except InvalidObstacle as e:
        raise ScenarioError(str(e), path=path, line=_line_of(text, 'obstacle'))

    grid = data.get('grid', {})
    run = data.get('run', {})
    for section, allowed, name in ((grid, GRID_KEYS, 'grid'), (run, RUN_KEYS, 'run')):
        if not isinstance(section, dict):
            raise ScenarioError(f"'{name}' must be an object", path=path, line=_line_of(text, name))
        bad = set(section) - allowed
        if bad:
            key = sorted(bad)[0]
            raise ScenarioError(f"Unknown {name} field '{key}'", path=path, line=_line_of(text, key))

    h = float(grid.get('h', GRID_CONFIG['h']))
    if h <= 0:
        raise ScenarioError(f"Grid spacing must be positive, got {h}", path=path, line=_line_of(text, 'h'))
    coarse = check_resolution(obstacle, h)
    if coarse:
        raise ScenarioError(f"h={h} resolves {', '.join(coarse)} by fewer than "
                            f"{SCENARIO_CONFIG['min_cells_per_feature']} cells", path=path, line=_line_of(text, 'h'))

    checks = data.get('checks', [])
    if not isinstance(checks, list):
        raise ScenarioError("'checks' must be a list", path=path, line=_line_of(text, 'checks'))
    for check in checks:
        if not isinstance(check, dict) or check.get('type') not in CHECKS:
            kind = check.get('type') if isinstance(check, dict) else check
            raise ScenarioError(f"Unknown check '{kind}'; expected one of {sorted(CHECKS)}",
                                path=path, line=_line_of(text, str(kind)) or _line_of(text, 'checks'))

    tunnel = data.get('tunnel')
    if tunnel is not None:
        if not isinstance(tunnel, dict) or 'center' not in tunnel or set(tunnel) - TUNNEL_KEYS:
            raise ScenarioError("'tunnel' must be an object with 'center' and optional 'margin_cells'",
                                path=path, line=_line_of(text, 'tunnel'))
        if not isinstance(obstacle, SlabWithHoles):
            raise ScenarioError(f"'tunnel' needs a SlabWithHoles obstacle, got {obstacle.kind}",
                                path=path, line=_line_of(text, 'tunnel'))

    extent = grid.get('extent')
    scenario = Scenario(
        name=str(data['name']),
        obstacle=obstacle,
        h=h,
        run={k: float(v) if k != 'snapshot_every' else int(v) for k, v in run.items()},
        checks=checks,
        extent=tuple(map(float, extent)) if extent is not None else None,
        lateral_bc=grid.get('lateral_bc'),
        alpha=data.get('alpha'),
        seed=int(data.get('seed', SCENARIO_CONFIG['seed'])),
        description=str(data.get('description', '')),
        path=path,
        tunnel=tunnel,
    )
    logger.debug(f"Loaded scenario {scenario.name} from {path}")
    return scenario


def sized_obstacle(scenario: Scenario, R0: Optional[float] = None):
    """
    The scenario's obstacle with its tunnel opened.

    A tunnel entry adds one hole of width 2 R0 + margin_cells * h centered at 'center' to a
    SlabWithHoles; R0 is the critical radius of the scenario's nonlinearity when not given.
    """
    if scenario.tunnel is None:
        return scenario.obstacle
    if R0 is None:
        R0 = find_R0(Nonlinearity.from_config(alpha=scenario.alpha), 2)
    margin = float(scenario.tunnel.get('margin_cells', SCENARIO_CONFIG['tunnel_margin_cells']))
    half = R0 + 0.5 * margin * scenario.h
    center = float(scenario.tunnel['center'])
    holes = tuple(scenario.obstacle.hole_rects) + ((center - half, center + half),)
    logger.info(f"Tunnel of width {2.0 * half:.4f} at y={center} (R0={R0:.4f})")
    return replace(scenario.obstacle, hole_rects=holes)


# -- checks --------------------------------------------------------------------

class ScenarioContext:
    """State shared by the checks of one scenario run."""

    def __init__(self, scenario: Scenario, lab: PropagationLab, grid: GridDomain):
        self.scenario = scenario
        self.lab = lab
        self.grid = grid
        self.rng = np.random.default_rng(scenario.seed)
        self.result: Optional[ClassificationResult] = None
        self.certificates: Dict[str, Any] = {}
        self.monitors: Dict[str, DominanceMonitor] = {}

    @property
    def v_bar(self):
        return self.result.v_bar

    def certificate(self, variant: str):
        if variant not in self.certificates:
            if isinstance(self.scenario.obstacle, Reservoir):
                self.certificates[variant] = reservoir_barrier(self.scenario.obstacle, self.lab.nl, self.grid,
                                                               rng=self.rng)
            else:
                cfg = BarrierConfig.for_wall(self.scenario.obstacle, self.grid, self.lab.nl, variant, rng=self.rng)
                self.certificates[variant] = minimize_barrier(cfg, self.lab.nl)
        return self.certificates[variant]


def _outcome(passed: bool, value: Any = None, **detail) -> Dict:
    return {'passed': bool(passed), 'value': value, **detail}


def _check_verdict(ctx: ScenarioContext, check: Dict) -> Dict:
    expect = check['expect']
    return _outcome(ctx.result.verdict == expect, ctx.result.verdict, expect=expect)


def _check_dichotomy(ctx: ScenarioContext, check: Dict) -> Dict:
    eps = check.get('eps', DYNAMICS_CONFIG['eps_cls'])
    lo, hi = ctx.result.probe_min, ctx.result.probe_max
    settled = ctx.result.run.converged and (hi <= eps or lo >= 1.0 - eps)
    return _outcome(settled, [lo, hi], eps=eps)


def _check_monotone(ctx: ScenarioContext, check: Dict) -> Dict:
    tol = check.get('tol', DYNAMICS_CONFIG['monotone_tol'])
    worst = monotonicity_check(ctx.result.run)
    return _outcome(worst >= -tol, worst, tol=tol)


def _check_front_speed(ctx: ScenarioContext, check: Dict) -> Dict:
    tol = check.get('tol', 0.05)
    cap = ctx.grid.x1_max - check.get('cap_offset', 10.0)
    speed = front_speed(ctx.result.front_history, x1_cap=cap)
    c = ctx.lab.wave.c
    rel = abs(speed - c) / c
    return _outcome(rel <= tol, speed, wave_speed=c, relative_error=rel, tol=tol)


def _check_universality(ctx: ScenarioContext, check: Dict) -> Dict:
    tol = check.get('tol', DYNAMICS_CONFIG['universality_tol'])
    P = tuple(check['P']) if 'P' in check else None
    gap = ctx.lab.universality_check(P=P, reference=ctx.result)
    return _outcome(gap <= tol, gap, tol=tol)


def _check_clearance(ctx: ScenarioContext, check: Dict) -> Dict:
    clearance = tunnel_clearance(ctx.scenario.obstacle, ctx.grid)
    R0 = ctx.lab.R0
    return _outcome(clearance >= R0, clearance, R0=R0)


def _default_path(ctx: ScenarioContext) -> List[Tuple[float, float]]:
    R = ctx.lab.critical_bubble.R
    y = ctx.grid.height / 2.0
    return [(-(R + 10.0), y), (ctx.grid.M + R + 1.0, y)]


def _check_slide_bubble(ctx: ScenarioContext, check: Dict) -> Dict:
    path = [tuple(p) for p in check['path']] if 'path' in check else _default_path(ctx)
    ok = ctx.lab.slide_bubble(ctx.result, path, tol=check.get('tol'))
    return _outcome(ok, ok, path=path)


def _check_slide_W(ctx: ScenarioContext, check: Dict) -> Dict:
    ok = ctx.lab.slide_W(ctx.result, tol=check.get('tol'))
    return _outcome(ok, ok)


def _check_slide_rho(ctx: ScenarioContext, check: Dict) -> Dict:
    report = ctx.lab.slide_rho(ctx.result)
    nu = check.get('nu', report.nu)
    ok = report.max_violation <= nu and report.is_nondecreasing()
    return _outcome(ok, report.max_violation, nu=nu, nondecreasing=report.is_nondecreasing())


def _check_complete_invasion(ctx: ScenarioContext, check: Dict) -> Dict:
    floor = check.get('min', 1.0 - DYNAMICS_CONFIG['eps_cls'])
    low = ctx.v_bar.min()
    convex = is_directionally_convex(ctx.grid)
    return _outcome(low >= floor and convex, low, min=floor, directionally_convex=convex)


def _check_blade_flux(ctx: ScenarioContext, check: Dict) -> Dict:
    flux = blade_flux(ctx.scenario.obstacle)
    bound = check.get('max', 0.1)
    return _outcome(flux <= bound, flux, max=bound)


def _check_certificate(ctx: ScenarioContext, check: Dict) -> Dict:
    variant = check.get('variant', 'constrained')
    cert = ctx.certificates[variant]
    monitor = ctx.monitors[variant]
    tol = check.get('tol', BARRIER_CONFIG['dominance_tol'])
    ok = cert.valid and ctx.result.verdict == 'Blocking' and monitor.holds(tol)
    return _outcome(ok, cert.constraint_slack, max_excess=monitor.max_excess, **cert.to_dict())


def _check_variant_agreement(ctx: ScenarioContext, check: Dict) -> Dict:
    tol = check.get('tol', BARRIER_CONFIG['variant_agreement_tol'])
    first = ctx.certificate('constrained')
    second = ctx.certificate('cylinder')
    common = first.config.free & second.config.free
    gap = float(np.abs(first.w0.values - second.w0.values)[common].max())
    return _outcome(first.valid and second.converged and gap <= tol, gap, tol=tol)


def _check_reservoir(ctx: ScenarioContext, check: Dict) -> Dict:
    cert = ctx.certificates['constrained']
    monitor = ctx.monitors['constrained']
    mean = cavity_mean(ctx.v_bar, cert.config)
    floor = check.get('probe_min', 1.0 - DYNAMICS_CONFIG['eps_cls'])
    ok = (cert.valid and mean <= cert.config.delta and ctx.result.probe_min >= floor
          and monitor.holds(check.get('tol')))
    return _outcome(ok, mean, max_excess=monitor.max_excess, **cert.to_dict())


def _check_poincare(ctx: ScenarioContext, check: Dict) -> Dict:
    n = check.get('n', BARRIER_CONFIG['rayleigh_samples'])
    coarse = empirical_poincare_constant(ctx.grid, np.random.default_rng(ctx.scenario.seed), n=n)
    detail = {'n': n}
    ok = coarse['min_ratio'] > 0.0
    if check.get('refine', False):
        fine_grid = rasterize(ctx.scenario.obstacle, ctx.grid.h / 2.0, extent=ctx.scenario.extent,
                              lateral_bc=ctx.scenario.lateral_bc)
        fine = empirical_poincare_constant(fine_grid, np.random.default_rng(ctx.scenario.seed), n=n)
        drift = abs(fine['min_ratio'] - coarse['min_ratio']) / coarse['min_ratio']
        tol = check.get('tol', 0.2)
        ok = ok and drift <= tol
        detail.update(refined_min_ratio=fine['min_ratio'], drift=drift, tol=tol)
    return _outcome(ok, coarse['min_ratio'], **detail)


CHECKS: Dict[str, Callable[[ScenarioContext, Dict], Dict]] = {
    'verdict': _check_verdict,
    'dichotomy': _check_dichotomy,
    'monotone': _check_monotone,
    'front_speed': _check_front_speed,
    'universality': _check_universality,
    'clearance': _check_clearance,
    'slide_bubble': _check_slide_bubble,
    'slide_W': _check_slide_W,
    'slide_rho': _check_slide_rho,
    'complete_invasion': _check_complete_invasion,
    'blade_flux': _check_blade_flux,
    'certificate': _check_certificate,
    'variant_agreement': _check_variant_agreement,
    'reservoir': _check_reservoir,
    'poincare': _check_poincare,
}

# checks whose certificate has to observe the main run
_MONITORED = {'certificate', 'reservoir'}


# -- running -------------------------------------------------------------------

def run_scenario(scenario: Scenario, out_dir: Optional[str] = None) -> Dict:
    """
    Classify the scenario's limit profile and evaluate its checks.

    A check that raises is recorded as failed with the error message. The report holds the
    verdict, the numbers behind every check, pass/fail and the wall-clock time; the files
    written to out_dir (report JSON, history CSV, terminal PGM) leave the timing out.

    Raises:
        FrontlabError: the scenario cannot be set up or its run fails
    """
    started = time.perf_counter()
    try:
        nl = Nonlinearity.from_config(alpha=scenario.alpha)
        lab = PropagationLab(nl, h=scenario.h, step_overrides=scenario.run)
        if scenario.tunnel is not None:
            scenario = replace(scenario, obstacle=sized_obstacle(scenario, lab.R0))
        grid = rasterize(scenario.obstacle, scenario.h, extent=scenario.extent, lateral_bc=scenario.lateral_bc)
        ctx = ScenarioContext(scenario, lab, grid)

        observers = []
        for check in scenario.checks:
            if check['type'] in _MONITORED:
                variant = check.get('variant', 'constrained')
                cert = ctx.certificate(variant)
                if variant not in ctx.monitors:
                    ctx.monitors[variant] = DominanceMonitor(cert)
                    observers.append(ctx.monitors[variant])

        _, ctx.result = lab.limit_profile(grid=grid, observers=observers)

        outcomes = []
        for check in scenario.checks:
            label = check.get('label', check['type'])
            try:
                outcome = CHECKS[check['type']](ctx, check)
            except FrontlabError as e:
                logger.warning(f"Check {label} of {scenario.name} raised {type(e).__name__}: {e}")
                outcome = _outcome(False, None, error=f"{type(e).__name__}: {e}")
            outcome['check'] = label
            outcomes.append(outcome)

        report = {
            'name': scenario.name,
            'obstacle': obstacle_to_dict(scenario.obstacle),
            'h': scenario.h,
            'seed': scenario.seed,
            'wave_speed': lab.wave.c,
            'classification': ctx.result.to_dict(),
            'checks': outcomes,
            'passed': all(o['passed'] for o in outcomes),
        }
        if out_dir:
            _write_outputs(report, ctx, out_dir)
        report['wall_clock'] = time.perf_counter() - started
        status = 'PASS' if report['passed'] else 'FAIL'
        logger.info(f"Scenario {scenario.name}: {ctx.result.verdict}, {status} in {report['wall_clock']:.1f}s")
        return report

    except Exception as e:
        logger.error(f"Scenario {scenario.name} failed: {e}")
        raise


def _write_outputs(report: Dict, ctx: ScenarioContext, out_dir: str):
    base = os.path.join(out_dir, ctx.scenario.name)
    write_json(report, f"{base}.json")
    write_csv(ctx.result.front_history, f"{base}_history.csv")
    write_pgm(ctx.v_bar, f"{base}_vbar.pgm")
    for variant, cert in ctx.certificates.items():
        write_pgm(cert.w0, f"{base}_barrier_{variant}.pgm")


def _run_file(path: str, out_dir: Optional[str], overrides: Dict) -> Dict:
    """Worker entry point: load, run and never raise."""
    name = os.path.splitext(os.path.basename(path))[0]
    started = time.perf_counter()
    try:
        scenario = load_scenario(path).with_overrides(**overrides)
        name = scenario.name
        report = run_scenario(scenario, out_dir)
        return {'name': name, 'path': path, 'passed': report['passed'], 'error': '',
                'verdict': report['classification']['verdict'], 'wall_clock': report['wall_clock'],
                'checks_passed': sum(o['passed'] for o in report['checks']),
                'checks_total': len(report['checks'])}
    except Exception as e:
        return {'name': name, 'path': path, 'passed': False, 'error': f"{type(e).__name__}: {e}",
                'verdict': '', 'wall_clock': time.perf_counter() - started, 'checks_passed': 0,
                'checks_total': 0}


def run_suite(directory: str, out_dir: Optional[str] = None, workers: Optional[int] = None,
              h: Optional[float] = None, dt: Optional[float] = None, t_max: Optional[float] = None,
              seed: Optional[int] = None) -> Dict:
    """
    Run every *.json scenario in directory in a process pool.

    Each worker owns one scenario; a scenario that fails to load or run is recorded as failed
    and the others continue. Rows are aggregated in file order.

    Returns:
        Summary with the scenario count, pass/fail counts and the per-scenario table
    """
    try:
        workers = workers or SCENARIO_CONFIG['workers']
        paths = sorted(os.path.join(directory, f) for f in os.listdir(directory) if f.endswith('.json'))
        overrides = {'h': h, 'dt': dt, 't_max': t_max, 'seed': seed}
        rows: Dict[str, Dict] = {}

        if paths:
            if workers <= 1:
                for path in tqdm(paths, desc='Scenarios', unit='scenario'):
                    rows[path] = _run_file(path, out_dir, overrides)
            else:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    futures = {pool.submit(_run_file, path, out_dir, overrides): path for path in paths}
                    for future in tqdm(as_completed(futures), total=len(futures), desc='Scenarios', unit='scenario'):
                        rows[futures[future]] = future.result()

        table = pd.DataFrame([rows[p] for p in paths],
                             columns=['name', 'path', 'passed', 'verdict', 'checks_passed', 'checks_total',
                                      'error', 'wall_clock'])
        summary = {
            'directory': directory,
            'scenarios': len(paths),
            'passed': int(table['passed'].sum()) if len(table) else 0,
            'failed': int((~table['passed'].astype(bool)).sum()) if len(table) else 0,
            'table': table,
        }
        summary['all_passed'] = summary['failed'] == 0
        if out_dir:
            timeless = table.drop(columns=['wall_clock'])
            write_csv(timeless, os.path.join(out_dir, 'summary.csv'))
            written = {k: v for k, v in summary.items() if k != 'table'}
            written['table'] = timeless
            write_json(written, os.path.join(out_dir, 'summary.json'))
        logger.info(f"Suite {directory}: {summary['passed']}/{summary['scenarios']} scenarios passed")
        return summary

    except Exception as e:
        logger.error(f"Suite {directory} failed: {e}")
        raise


def bundled_scenarios() -> List[str]:
    directory = SCENARIO_CONFIG['bundled_directory']
    return sorted(os.path.join(directory, f) for f in os.listdir(directory) if f.endswith('.json'))
