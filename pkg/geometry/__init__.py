"""
Frontlab - Geometry Package
Wall specifications, rasterized grid domains and geometric measures.
"""

from .obstacles import (
    Empty,
    SlabWithHoles,
    PeriodicSlits,
    ParallelBlades,
    Debris,
    ConvexBlock,
    Reservoir,
    obstacle_from_dict,
    obstacle_to_dict,
)
from .grid import GridDomain, ScalarField, rasterize, fluid_components
from .measures import (
    hole_measure,
    blade_flux,
    tunnel_clearance,
    is_directionally_convex,
    reservoir_regions,
)

__all__ = [
    'Empty',
    'SlabWithHoles',
    'PeriodicSlits',
    'ParallelBlades',
    'Debris',
    'ConvexBlock',
    'Reservoir',
    'obstacle_from_dict',
    'obstacle_to_dict',
    'GridDomain',
    'ScalarField',
    'rasterize',
    'fluid_components',
    'hole_measure',
    'blade_flux',
    'tunnel_clearance',
    'is_directionally_convex',
    'reservoir_regions',
]
