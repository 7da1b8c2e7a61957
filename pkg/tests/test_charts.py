import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import pytest

from geometry.grid import ScalarField, rasterize
from geometry.obstacles import PeriodicSlits
from barrier.certificate import minimize_barrier
from barrier.energy import BarrierConfig
from visualization.charts import BarrierCharts, ExperimentCharts, RunCharts


@pytest.fixture
def history():
    t = np.arange(0.0, 5.0)
    return pd.DataFrame({'t': t, 'front_x': -20.0 + 0.35 * t, 'probe_min': 0.0 * t, 'probe_max': 0.01 * t,
                         'rate': np.exp(-t)})


def test_run_overview(history, small_empty_grid, tmp_path):
    field = ScalarField.from_x1(small_empty_grid, lambda x1: np.clip(-x1 / 5.0, 0.0, 1.0))
    path = tmp_path / 'overview.png'
    fig = RunCharts().create_run_overview(history, field, title='strip', speed=0.35, save_path=str(path))
    assert path.exists()
    assert len(fig.axes) == 4
    plt.close(fig)


def test_experiment_charts(tmp_path):
    charts = ExperimentCharts()
    slide = pd.DataFrame({'lambda': [0.0, 1.0, 2.0], 'D_measure': [0.0, 0.0, 0.1]})
    fig = charts.create_slide_chart(slide, nu=0.4, save_path=str(tmp_path / 'slide.png'))
    plt.close(fig)
    sweep = pd.DataFrame({'slit_width': [0.5, 0.25], 'verdict': ['Propagation', 'Blocking'],
                          'probe_min': [1.0, 0.0], 'probe_max': [1.0, 0.0]})
    fig = charts.create_sweep_chart(sweep, 'slit_width', save_path=str(tmp_path / 'sweep.png'))
    plt.close(fig)
    assert (tmp_path / 'slide.png').exists()
    assert (tmp_path / 'sweep.png').exists()


def test_certificate_chart(nl, tmp_path):
    spec = PeriodicSlits(thickness=1.0, slit_width=1.0, period=4.0)
    grid = rasterize(spec, 0.25, extent=(-4.0, 24.0, 4.0))
    result = minimize_barrier(BarrierConfig.for_wall(spec, grid, nl, rng=np.random.default_rng(0)), nl)
    fig = BarrierCharts().create_certificate_chart(result, save_path=str(tmp_path / 'barrier.png'))
    assert (tmp_path / 'barrier.png').exists()
    plt.close(fig)
