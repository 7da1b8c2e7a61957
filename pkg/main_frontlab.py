#!/usr/bin/env python3
"""
Frontlab - Command Line
Profiles, constants, bubbles, geometry reports, classification, sliding experiments, barrier
certificates and the scenario suite.
"""

import json
import os
import sys
import logging
from typing import Dict, Optional

import click
import numpy as np
import pandas as pd

# Add project root to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import LAB_CONFIG, LOGGING_CONFIG, SCENARIO_CONFIG
from exceptions import FrontlabError, ScenarioError
from geometry.grid import ScalarField, fluid_components, rasterize
from geometry.measures import blade_flux, hole_measure, is_directionally_convex, tunnel_clearance
from geometry.obstacles import Debris, Empty, ParallelBlades, obstacle_from_dict
from simulation.dynamics import PropagationLab
from simulation.solver import front_speed
from theory.nonlinearity import (
    Nonlinearity, barrier_constants, lambda_exponent, solve_H, solve_wave_profile,
)
from theory.radial import find_R0, min_half_length_1d, radial_summary, solve_bubble
from barrier.certificate import minimize_barrier, reservoir_barrier, verify_supersolution
from barrier.energy import BarrierConfig
from barrier.poincare import empirical_poincare_constant
from scenarios.runner import load_scenario, run_scenario, run_suite, sized_obstacle
from visualization.outputs import write_csv, write_json, write_pgm

logger = logging.getLogger(__name__)


def banner(title: str):
    logger.info("=" * 60)
    logger.info(title)
    logger.info("=" * 60)


def log_items(items: Dict):
    for key, value in items.items():
        if isinstance(value, float):
            logger.info(f"  {key}: {value:.8g}")
        else:
            logger.info(f"  {key}: {value}")


def load_obstacle(path: Optional[str]):
    """Obstacle from an obstacle file or from the 'obstacle' entry of a scenario file."""
    if path is None:
        return Empty()
    with open(path, 'r', encoding='utf-8') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"Malformed JSON: {e.msg}", path=path, line=e.lineno)
    if isinstance(data, dict) and 'obstacle' in data:
        return sized_obstacle(load_scenario(path))
    return obstacle_from_dict(data)


def make_lab(ctx: click.Context, alpha: Optional[float] = None) -> PropagationLab:
    opts = ctx.obj
    return PropagationLab(make_nonlinearity(ctx, alpha), h=opts['h'],
                          step_overrides={'dt': opts['dt'], 't_max': opts['t_max']})


def make_nonlinearity(ctx: click.Context, alpha: Optional[float]) -> Nonlinearity:
    """The subcommand --alpha wins over the group option."""
    return Nonlinearity.from_config(alpha=alpha if alpha is not None else ctx.obj['alpha'])


def alpha_option(command):
    return click.option('--alpha', type=float, default=None,
                        help='Unstable zero of the cubic nonlinearity.')(command)


@click.group()
@click.option('--seed', type=int, default=SCENARIO_CONFIG['seed'], show_default=True,
              help='Seed for every randomized check.')
@click.option('--h', 'h', type=float, default=None, help='Grid spacing override.')
@click.option('--dt', type=float, default=None, help='Time step override (must respect the CFL bound).')
@click.option('--t-max', 't_max', type=float, default=None, help='Run horizon override.')
@click.option('--alpha', type=float, default=None, help='Unstable zero of the cubic nonlinearity.')
@click.option('--log-level', default=LOGGING_CONFIG['level'], show_default=True)
@click.version_option(LAB_CONFIG['version'], prog_name=LAB_CONFIG['name'])
@click.pass_context
def cli(ctx, seed, h, dt, t_max, alpha, log_level):
    """Bistable front propagation through perforated walls."""
    logging.basicConfig(level=getattr(logging, log_level.upper(), logging.INFO),
                        format=LOGGING_CONFIG['format'])
    ctx.ensure_object(dict)
    ctx.obj.update(seed=seed, h=h, dt=dt, t_max=t_max, alpha=alpha)


@cli.command()
@alpha_option
@click.option('--out', type=click.Path(), default=None, help='CSV file for the sampled profiles.')
@click.pass_context
def profile(ctx, alpha, out):
    """Traveling wave, its speed and the half-line profile H."""
    try:
        nl = make_nonlinearity(ctx, alpha)
        wp = solve_wave_profile(nl)
        H = solve_H(nl)
        banner("TRAVELING WAVE")
        closed_form = (1.0 - 2.0 * nl.alpha) / np.sqrt(2.0) if nl.shape == 'cubic' else float('nan')
        log_items({
            'alpha': nl.alpha,
            'closed-form speed': closed_form,
            'lambda': lambda_exponent(nl, wp.c),
            'max ODE residual': wp.residual,
            "H'(0)": H.slope0,
            'H first-integral residual': H.first_integral_residual,
        })
        click.echo(f"c = {wp.c:.10f}")
        if out:
            z = np.linspace(-wp.window, wp.window, 801)
            write_csv(pd.DataFrame({'z': z, 'phi': wp(z), 'dphi': wp.derivative(z), 'H': H(z)}), out)
    except FrontlabError as e:
        logger.error(f"Profile failed: {e}")
        sys.exit(1)


@cli.command()
@alpha_option
@click.option('--dim', type=int, default=2, show_default=True)
@click.pass_context
def constants(ctx, alpha, dim):
    """Barrier constants and the wave exponent as JSON; critical sizes in the log."""
    try:
        nl = make_nonlinearity(ctx, alpha)
        delta, mu, sigma = barrier_constants(nl)
        wp = solve_wave_profile(nl)
        psi0, half_length = min_half_length_1d(nl)
        banner("CRITICAL SIZES")
        log_items(radial_summary(nl, dim))
        log_items({'R0': find_R0(nl, dim), '1D center value': psi0, '1D minimal half length': half_length})
        click.echo(json.dumps({
            'delta0': nl.delta0,
            'F1': nl.F1,
            'delta': delta,
            'mu': mu,
            'sigma': sigma,
            'lambda_exp': lambda_exponent(nl, wp.c),
        }, sort_keys=True))
    except FrontlabError as e:
        logger.error(f"Constants failed: {e}")
        sys.exit(1)


@cli.command()
@alpha_option
@click.option('--radius', 'radius', type=float, default=None, help='Ball radius; without it the critical radius is printed.')
@click.option('--dim', type=int, default=2, show_default=True)
@click.option('--branch', type=click.Choice(['upper', 'lower']), default='upper', show_default=True)
@click.option('--out', type=click.Path(), default=None, help='CSV file for the radial profile instead of stdout.')
@click.pass_context
def bubble(ctx, alpha, radius, dim, branch, out):
    """Critical radius, or the positive radial Dirichlet solution on a ball as CSV."""
    try:
        nl = make_nonlinearity(ctx, alpha)
        if radius is None:
            R0 = find_R0(nl, dim)
            banner(f"CRITICAL RADIUS N={dim}")
            click.echo(f"R0 = {R0:.10f}")
            return
        result = solve_bubble(nl, radius, dim, branch)
        banner(f"BUBBLE R={radius:.6g}, N={dim}")
        if result is None:
            logger.info("  No positive solution: the radius is below the critical radius")
            return
        log_items({'center value': result.center_value, 'energy': result.energy, 'residual': result.residual})
        frame = pd.DataFrame({'r': result.r, 'psi': result.psi, 'dpsi': result.dpsi})
        if out:
            write_csv(frame, out)
        else:
            click.echo(frame.to_csv(index=False), nl=False)
    except (FrontlabError, ValueError) as e:
        logger.error(f"Bubble failed: {e}")
        sys.exit(1)


@cli.command()
@click.option('--config', 'config_path', type=click.Path(exists=True), required=True)
@click.option('--out', type=click.Path(), default=None, help='PGM file for the fluid mask.')
@click.pass_context
def geom(ctx, config_path, out):
    """Rasterize a wall and report its geometric measures."""
    try:
        spec = load_obstacle(config_path)
        grid = rasterize(spec, ctx.obj['h'])
        _, components = fluid_components(grid.fluid, grid.lateral_bc == 'periodic')
        banner(f"GEOMETRY {spec.kind}")
        report = {
            'grid': f"{grid.nx} x {grid.ny} at h={grid.h}",
            'M': grid.M,
            'height': grid.height,
            'fluid components': components,
            'hole measure': hole_measure(spec, grid),
            'tunnel clearance': tunnel_clearance(spec, grid),
            'directionally convex': is_directionally_convex(grid),
        }
        if isinstance(spec, ParallelBlades):
            report['blade flux'] = blade_flux(spec)
        log_items(report)
        if out:
            write_pgm(ScalarField(grid, grid.fluid.astype(float)), out)
    except FrontlabError as e:
        logger.error(f"Geometry failed: {e}")
        sys.exit(1)


@cli.command()
@alpha_option
@click.option('--config', 'config_path', type=click.Path(exists=True), default=None)
@click.option('--out', type=click.Path(), default=None,
              help='JSON report; history CSV and snapshot PGM go next to it.')
@click.option('--plot', is_flag=True, help='Also save a PNG overview next to the report.')
@click.pass_context
def classify(ctx, alpha, config_path, out, plot):
    """Limit profile of the monotone entire solution and its verdict."""
    try:
        lab = make_lab(ctx, alpha)
        spec = load_obstacle(config_path)
        v_bar, result = lab.limit_profile(spec)
        speed = front_speed(result.front_history, x1_cap=result.grid.x1_max - 10.0)
        banner(f"CLASSIFICATION {spec.kind}")
        log_items({'verdict': result.verdict, 'probe min': result.probe_min, 'probe max': result.probe_max,
                   'front speed': speed, 'wave speed': lab.wave.c, 'final rate': result.residual,
                   'steps': result.run.steps})
        if out:
            stem = os.path.splitext(out)[0]
            write_json(result.to_dict(), out)
            write_csv(result.front_history, stem + '.csv')
            write_pgm(v_bar, stem + '.pgm')
            if plot:
                from visualization.charts import RunCharts
                RunCharts().create_run_overview(result.front_history, v_bar, title=spec.kind, speed=speed,
                                                save_path=stem + '.png')
    except FrontlabError as e:
        logger.error(f"Classification failed: {e}")
        sys.exit(1)


@cli.command()
@alpha_option
@click.option('--config', 'config_path', type=click.Path(exists=True), default=None)
@click.option('--mode', type=click.Choice(['bubble', 'W', 'rho']), required=True)
@click.option('--path', 'path_json', default=None, help='Bubble path as a JSON list of [x1, y] vertices.')
@click.option('--out', type=click.Path(), default=None, help='CSV for the rho sliding measures.')
@click.option('--plot', is_flag=True, help='Also save a PNG of the rho measures next to the CSV.')
@click.pass_context
def slide(ctx, alpha, config_path, mode, path_json, out, plot):
    """Sliding comparison experiments against the limit profile."""
    try:
        lab = make_lab(ctx, alpha)
        spec = load_obstacle(config_path)
        _, result = lab.limit_profile(spec)
        banner(f"SLIDE {mode} on {spec.kind} ({result.verdict})")
        if mode == 'bubble':
            grid = result.grid
            R = lab.critical_bubble.R
            path = json.loads(path_json) if path_json else [(-(R + 10.0), grid.height / 2.0),
                                                            (grid.M + R + 1.0, grid.height / 2.0)]
            log_items({'slides below v_bar': lab.slide_bubble(result, path), 'bubble radius': R})
        elif mode == 'W':
            log_items({'slides below v_bar': lab.slide_W(result)})
        else:
            report = lab.slide_rho(result)
            log_items({'sup |D|': report.max_violation, 'nu': report.nu, 'within nu': report.within_nu,
                       'nondecreasing': report.is_nondecreasing()})
            if out:
                write_csv(report.to_frame(), out)
                if plot:
                    from visualization.charts import ExperimentCharts
                    ExperimentCharts().create_slide_chart(report.to_frame(), report.nu,
                                                          save_path=os.path.splitext(out)[0] + '.png')
    except FrontlabError as e:
        logger.error(f"Slide failed: {e}")
        sys.exit(1)


@cli.command()
@alpha_option
@click.option('--config', 'config_path', type=click.Path(exists=True), required=True)
@click.option('--variant', type=click.Choice(['constrained', 'cylinder']), default='constrained', show_default=True)
@click.option('--out', type=click.Path(), default=None, help='JSON certificate; the field goes next to it as PGM.')
@click.option('--poincare', is_flag=True, help='Also report the empirical Poincare constant of the wall.')
@click.option('--plot', is_flag=True, help='Also save a PNG of the certificate and its energy history.')
@click.pass_context
def barrier(ctx, alpha, config_path, variant, out, poincare, plot):
    """Blocking barrier by energy minimization."""
    try:
        nl = make_nonlinearity(ctx, alpha)
        spec = load_obstacle(config_path)
        grid = rasterize(spec, ctx.obj['h'])
        rng = np.random.default_rng(ctx.obj['seed'])
        if spec.kind == 'Reservoir':
            result = reservoir_barrier(spec, nl, grid, rng=rng)
        else:
            result = minimize_barrier(BarrierConfig.for_wall(spec, grid, nl, variant, rng=rng), nl)
        report = result.to_dict()
        report['supersolution_defect'] = verify_supersolution(result.w0, nl, result.config.pinned)
        if poincare:
            report['poincare_min_ratio'] = empirical_poincare_constant(grid, rng)['min_ratio']
        banner(f"BARRIER {result.config.variant} on {spec.kind}")
        log_items(report)
        if out:
            write_json(report, out)
            write_pgm(result.w0, os.path.splitext(out)[0] + '.pgm')
            if plot:
                from visualization.charts import BarrierCharts
                BarrierCharts().create_certificate_chart(result, save_path=os.path.splitext(out)[0] + '.png')
    except FrontlabError as e:
        logger.error(f"Barrier failed: {e}")
        sys.exit(1)


@cli.command()
@alpha_option
@click.option('--widths', default=None, help='Comma-separated slit widths for the blocking sequence.')
@click.option('--debris', 'debris_path', type=click.Path(exists=True), default=None,
              help='Debris obstacle whose disk radius is swept.')
@click.option('--radii', default=None, help='Comma-separated disk radii for the debris sweep.')
@click.option('--out', type=click.Path(), default=None, help='CSV of the verdicts.')
@click.option('--plot', is_flag=True, help='Also save a PNG of the verdicts next to the CSV.')
@click.pass_context
def sweep(ctx, alpha, widths, debris_path, radii, out, plot):
    """Verdicts along a decreasing slit-width sequence or a debris radius sweep."""
    try:
        lab = make_lab(ctx, alpha)
        if widths:
            frame = lab.blocking_sequence([float(w) for w in widths.split(',')])
            x = 'slit_width'
        elif debris_path and radii:
            spec = load_obstacle(debris_path)
            if not isinstance(spec, Debris):
                raise click.BadParameter(f"{debris_path} holds a {spec.kind}, not a Debris obstacle")
            frame = lab.debris_sweep(spec, [float(r) for r in radii.split(',')])
            x = 'disk_radius'
        else:
            raise click.UsageError("Give --widths, or --debris together with --radii")
        banner(f"SWEEP over {x}")
        for row in frame.itertuples():
            logger.info(f"  {x}={getattr(row, x):.4g}: {row.verdict} "
                        f"(probe {row.probe_min:.4f} .. {row.probe_max:.4f})")
        if out:
            write_csv(frame, out)
            if plot:
                from visualization.charts import ExperimentCharts
                ExperimentCharts().create_sweep_chart(frame, x, save_path=os.path.splitext(out)[0] + '.png')
    except FrontlabError as e:
        logger.error(f"Sweep failed: {e}")
        sys.exit(1)


@cli.group()
def scenario():
    """Scenario files and the bundled suite."""


@scenario.command('run')
@click.argument('path', type=click.Path())
@click.option('--out', 'out_dir', type=click.Path(), default=None)
@click.pass_context
def scenario_run(ctx, path, out_dir):
    opts = ctx.obj
    try:
        loaded = load_scenario(path).with_overrides(h=opts['h'], dt=opts['dt'], t_max=opts['t_max'],
                                                    seed=opts['seed'])
        report = run_scenario(loaded, out_dir)
    except ScenarioError as e:
        logger.error(f"Scenario error: {e}")
        sys.exit(2)
    except FrontlabError as e:
        logger.error(f"Scenario failed: {e}")
        sys.exit(1)
    banner(f"SCENARIO {report['name']}: {report['classification']['verdict']}")
    for outcome in report['checks']:
        logger.info(f"  [{'PASS' if outcome['passed'] else 'FAIL'}] {outcome['check']}: {outcome['value']}")
    logger.info(f"  wall clock: {report['wall_clock']:.1f}s")
    sys.exit(0 if report['passed'] else 1)


@scenario.command('suite')
@click.argument('directory', type=click.Path(exists=True, file_okay=False),
                default=SCENARIO_CONFIG['bundled_directory'])
@click.option('--out', 'out_dir', type=click.Path(), default=None)
@click.option('--workers', type=int, default=SCENARIO_CONFIG['workers'], show_default=True)
@click.pass_context
def scenario_suite(ctx, directory, out_dir, workers):
    opts = ctx.obj
    summary = run_suite(directory, out_dir=out_dir, workers=workers, h=opts['h'], dt=opts['dt'],
                        t_max=opts['t_max'], seed=opts['seed'])
    banner(f"SUITE {directory}: {summary['passed']}/{summary['scenarios']} passed")
    for row in summary['table'].itertuples():
        status = 'PASS' if row.passed else 'FAIL'
        detail = row.error or f"{row.verdict}, {row.checks_passed}/{row.checks_total} checks"
        logger.info(f"  [{status}] {row.name}: {detail} ({row.wall_clock:.1f}s)")
    sys.exit(0 if summary['all_passed'] else 1)


if __name__ == "__main__":
    cli(obj={})
