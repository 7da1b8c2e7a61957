"""
Frontlab - Scenarios Package
Scenario files, the scenario runner and the bundled experiment suite.
"""

from .runner import (
    Scenario,
    load_scenario,
    run_scenario,
    run_suite,
    bundled_scenarios,
    check_resolution,
    feature_sizes,
    CHECKS,
)

__all__ = [
    'Scenario',
    'load_scenario',
    'run_scenario',
    'run_suite',
    'bundled_scenarios',
    'check_resolution',
    'feature_sizes',
    'CHECKS',
]
