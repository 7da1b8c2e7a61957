"""
Frontlab - Configuration
Centralized defaults for profiles, grids, the explicit solver, classification and barrier construction.
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Bistable nonlinearity
NONLINEARITY_CONFIG = {
    'alpha': float(os.getenv('FRONTLAB_ALPHA', '0.25')),
    'shape': os.getenv('FRONTLAB_SHAPE', 'cubic'),
}

# Traveling wave, H and rho profiles
PROFILE_CONFIG = {
    'window': 40.0,
    'step': 1e-3,
    'tail_tol': 1e-8,
    'residual_tol': 1e-6,
    'bvp_tol': 1e-9,
    'bvp_max_nodes': 200000,
    'bvp_initial_nodes': 801,
    'speed_tol': 1e-7,
    'speed_cap': 1.0,
    'shot_horizon': 200.0,
    'shot_rtol': 1e-9,
    'saddle_offset': 1e-7,
    'ode_rtol': 1e-11,
    'ode_atol': 1e-13,
}

# Barrier constant search (delta, mu, sigma)
BARRIER_CONSTANTS_CONFIG = {
    'delta_steps': 10,             # delta in {alpha * k / 10}
    'mu_base': 0.05,               # mu in {0.05 * 2**j}
    'mu_doublings': 6,
    'scan_min': -3.0,
    'scan_max': 4.0,
    'scan_step': 1e-4,
}

# Sub/supersolution pair around the half space x1 < 0
SUPERSUB_CONFIG = {
    'm1_candidates': [2.0 ** k for k in range(0, 11)],
    't_offsets': [0.0, 5.0, 10.0, 20.0, 40.0],
    'x1_half_width': 30.0,
    'x1_points': 121,
    't_span': 60.0,
    't_points': 31,
    'residual_tol': 1e-9,
}

# Radial bubble and critical radius
RADIAL_CONFIG = {
    'series_radius': 1e-3,
    'r_max': 100.0,
    'scan_points': 150,
    'tail_exponents': list(range(3, 16)),
    'rtol': 1e-10,
    'atol': 1e-12,
    'center_tol': 1e-15,
    'bisection_iter': 200,
    'samples': 401,
    'r0_tol': 1e-3,
    'bubble_scale': 1.25,
}

# Grid and domain extent
GRID_CONFIG = {
    'h': float(os.getenv('FRONTLAB_H', '0.05')),
    'left_margin': 60.0,
    'right_margin': 40.0,
    'height': 8.0,
    'lateral_bc': 'periodic',
}

# Explicit finite-difference solver
SOLVER_CONFIG = {
    'cfl_factor': 0.8,
    'max_cfl_factor': 0.8,
    'steady_tol': 1e-7,
    't_max': float(os.getenv('FRONTLAB_T_MAX', '400')),
    'record_every': 1.0,
    'snapshot_every': 0,
    'order_tol': 1e-12,
}

# Entire solution, classifier and sliding experiments
DYNAMICS_CONFIG = {
    'eps_cls': 0.05,
    'probe_offset': 10.0,
    'front_gap': 20.0,
    'min_front_gap': 10.0,
    'sup_points': 400,
    'sup_span': 40.0,
    'monotone_tol': 1e-12,
    'universality_tol': 5e-2,
    'slide_tol': 1e-3,
    'rho_delta': 0.01,
    'nu_fraction': 0.05,
}

# Variational barriers
BARRIER_CONFIG = {
    'left_edge': -1.0,
    'truncation': 20.0,
    'tail_offset': 5.0,
    'square_side': 1.0,
    'merge_fraction': 0.5,
    'rayleigh_samples': 50,
    'grad_tol': 1e-7,
    'max_iter': 200000,
    'el_tol': 1e-5,
    'ep_slack_factor': 75.0,
    'dominance_tol': 1e-3,
    'supersolution_tol': 1e-5,
    'variant_agreement_tol': 5e-2,
    'poincare_eta0': 1.0,
    'bb_max_factor': 100.0,
    'cylinder_step_factor': 4.0,
    'cone_radii': (0.3, 0.55),
}

# Reports and snapshots
REPORTING_CONFIG = {
    'output_directory': os.getenv('FRONTLAB_OUTPUT_DIR', 'reports/'),
    'pgm_maxval': 255,
    'float_format': '%.10g',
    'chart_style': 'seaborn-v0_8',
    'default_figsize': (12, 6),
    'dpi': 150,
}

# Scenario suite
SCENARIO_CONFIG = {
    'bundled_directory': os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios', 'bundled'),
    'fine_directory': os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios', 'fine'),
    'workers': int(os.getenv('FRONTLAB_WORKERS', '2')),
    'seed': int(os.getenv('FRONTLAB_SEED', '0')),
    'min_cells_per_feature': 2,
    'tunnel_margin_cells': 4,
}

LOGGING_CONFIG = {
    'level': os.getenv('FRONTLAB_LOG_LEVEL', 'INFO'),
    'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
}

LAB_CONFIG = {
    'name': 'frontlab',
    'version': '1.0.0',
    'description': 'Bistable front propagation through perforated walls',
}
