"""
Frontlab - Theory Package
Bistable nonlinearity, one-dimensional profiles, sub/supersolutions and radial bubbles.
"""

from .nonlinearity import (
    Nonlinearity,
    WaveProfile,
    HalfLineProfile,
    SuperSubPair,
    eval_f,
    barrier_constants,
    check_barrier_constants,
    solve_wave_profile,
    solve_H,
    solve_rho,
    build_super_sub_pair,
    eval_super_sub,
    supersub_residuals,
    lambda_exponent,
)
from .radial import (
    RadialBubble,
    solve_bubble,
    find_R0,
    embed_bubble,
    bubble_energy,
    first_integral_half_length,
    min_half_length_1d,
    minimal_zero_radius,
    distance_to_obstacle,
)

__all__ = [
    'Nonlinearity',
    'WaveProfile',
    'HalfLineProfile',
    'SuperSubPair',
    'eval_f',
    'barrier_constants',
    'check_barrier_constants',
    'solve_wave_profile',
    'solve_H',
    'solve_rho',
    'build_super_sub_pair',
    'eval_super_sub',
    'supersub_residuals',
    'lambda_exponent',
    'RadialBubble',
    'solve_bubble',
    'find_R0',
    'embed_bubble',
    'bubble_energy',
    'first_integral_half_length',
    'min_half_length_1d',
    'minimal_zero_radius',
    'distance_to_obstacle',
]
