"""
Frontlab - Charts
Optional figures of runs, limit profiles, sliding experiments and barrier certificates.
"""

import matplotlib.pyplot as plt
import seaborn as sns
import pandas as pd
import numpy as np
from typing import Optional
import logging

from config import REPORTING_CONFIG
from geometry.grid import ScalarField

plt.style.use(REPORTING_CONFIG['chart_style'])
sns.set_palette("husl")

logger = logging.getLogger(__name__)


def _save(fig: plt.Figure, save_path: Optional[str], label: str):
    if save_path:
        fig.savefig(save_path, dpi=REPORTING_CONFIG['dpi'], bbox_inches='tight')
        logger.info(f"{label} saved to {save_path}")


def _field_axes(ax, field: ScalarField, title: str, cmap: str = 'viridis'):
    grid = field.grid
    shown = np.ma.masked_where(~grid.fluid, field.values)
    extent = (grid.x1_min, grid.x1_max, 0.0, grid.height)
    image = ax.imshow(shown.T, origin='lower', extent=extent, cmap=cmap, vmin=0.0, vmax=1.0, aspect='auto')
    ax.set_title(title)
    ax.set_xlabel('x1')
    ax.set_ylabel('y')
    return image


class RunCharts:
    """Front trajectories and limit profiles of single runs."""

    def __init__(self):
        self.config = REPORTING_CONFIG

    def create_run_overview(self, history: pd.DataFrame, field: ScalarField, title: str = 'Run',
                            speed: Optional[float] = None, save_path: str = None) -> plt.Figure:
        """Front position, probe window range and terminal field."""
        fig, axes = plt.subplots(1, 3, figsize=(18, 5))
        fig.suptitle(title, fontsize=16, fontweight='bold')

        axes[0].plot(history['t'], history['front_x'], color='navy')
        if speed is not None and np.isfinite(speed):
            axes[0].set_title(f'Front Position (speed {speed:.4f})')
        else:
            axes[0].set_title('Front Position')
        axes[0].set_xlabel('t')
        axes[0].set_ylabel('x1 of the 0.5 level')

        axes[1].fill_between(history['t'], history['probe_min'], history['probe_max'], alpha=0.4)
        axes[1].set_ylim(-0.05, 1.05)
        axes[1].set_title('Probe Window Range')
        axes[1].set_xlabel('t')

        image = _field_axes(axes[2], field, 'Terminal Field')
        fig.colorbar(image, ax=axes[2])

        plt.tight_layout()
        _save(fig, save_path, 'Run overview')
        return fig


class ExperimentCharts:
    """Sliding and sweep experiments."""

    def __init__(self):
        self.config = REPORTING_CONFIG

    def create_slide_chart(self, frame: pd.DataFrame, nu: float, save_path: str = None) -> plt.Figure:
        """Measure of the violation set against the slide parameter."""
        fig, ax = plt.subplots(figsize=self.config['default_figsize'])
        sns.lineplot(data=frame, x='lambda', y='D_measure', ax=ax, marker='o')
        ax.axhline(nu, color='red', linestyle='--', label=f'nu = {nu:.3f}')
        ax.set_title('Sliding Violation Measure')
        ax.legend()
        _save(fig, save_path, 'Slide chart')
        return fig

    def create_sweep_chart(self, frame: pd.DataFrame, x: str, save_path: str = None) -> plt.Figure:
        """Probe range per sweep value, colored by verdict."""
        fig, ax = plt.subplots(figsize=self.config['default_figsize'])
        sns.scatterplot(data=frame, x=x, y='probe_min', hue='verdict', s=120, ax=ax)
        ax.set_ylim(-0.05, 1.05)
        ax.set_title(f'Verdicts by {x}')
        _save(fig, save_path, 'Sweep chart')
        return fig


class BarrierCharts:
    """Barrier certificates and their minimization history."""

    def __init__(self):
        self.config = REPORTING_CONFIG

    def create_certificate_chart(self, result, save_path: str = None) -> plt.Figure:
        fig, axes = plt.subplots(1, 2, figsize=(16, 5))
        fig.suptitle(f'Barrier Certificate ({result.config.variant})', fontsize=16, fontweight='bold')

        image = _field_axes(axes[0], result.w0, 'w0', cmap='magma')
        fig.colorbar(image, ax=axes[0])

        history = np.asarray(result.energy_history)
        axes[1].plot(np.arange(history.size), history, color='darkgreen')
        axes[1].set_xlabel('Iteration')
        axes[1].set_ylabel('J')
        axes[1].set_title(f'Energy (slack {result.constraint_slack:.3e})')

        plt.tight_layout()
        _save(fig, save_path, 'Certificate chart')
        return fig
