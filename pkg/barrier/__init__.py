"""
Frontlab - Barrier Package
Variational blocking barriers, their verification and the relative Poincare ratio.
"""

from .energy import (
    BarrierConfig,
    zeta_field,
    energy_J,
    energy_gradient,
    ep_bound,
    unit_square_decomposition,
    rayleigh_quotient,
    poincare_wirtinger_check,
)
from .certificate import (
    BarrierResult,
    DominanceMonitor,
    minimize_barrier,
    verify_supersolution,
    reservoir_barrier,
    cavity_mean,
)
from .poincare import poincare_ratio, cone_field, empirical_poincare_constant

__all__ = [
    'BarrierConfig',
    'zeta_field',
    'energy_J',
    'energy_gradient',
    'ep_bound',
    'unit_square_decomposition',
    'rayleigh_quotient',
    'poincare_wirtinger_check',
    'BarrierResult',
    'DominanceMonitor',
    'minimize_barrier',
    'verify_supersolution',
    'reservoir_barrier',
    'cavity_mean',
    'poincare_ratio',
    'cone_field',
    'empirical_poincare_constant',
]
