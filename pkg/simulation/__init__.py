"""
Frontlab - Simulation Package
Explicit monotone solver and entire-solution dynamics.
"""

from geometry.grid import ScalarField
from .solver import (
    StepConfig,
    RunResult,
    step,
    run_to_steady,
    compare_evolutions,
    front_position,
    front_speed,
    laplacian,
    probe_mask,
)
from .dynamics import (
    PropagationLab,
    ClassificationResult,
    SlideReport,
    build_entire_initial,
    plain_initial,
    choose_t_start,
    monotonicity_check,
    classify,
)

__all__ = [
    'ScalarField',
    'StepConfig',
    'RunResult',
    'step',
    'run_to_steady',
    'compare_evolutions',
    'front_position',
    'front_speed',
    'laplacian',
    'probe_mask',
    'PropagationLab',
    'ClassificationResult',
    'SlideReport',
    'build_entire_initial',
    'plain_initial',
    'choose_t_start',
    'monotonicity_check',
    'classify',
]
