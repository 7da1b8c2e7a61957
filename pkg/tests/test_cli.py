import json
import os

import pytest
from click.testing import CliRunner

from config import SCENARIO_CONFIG
from main_frontlab import cli
from theory.nonlinearity import Nonlinearity
from theory.radial import find_R0
from visualization.outputs import read_pgm

SLIT_SCENARIO = os.path.join(SCENARIO_CONFIG['bundled_directory'], 'slit-blocking.json')
CONSTANT_KEYS = {'delta0', 'F1', 'delta', 'mu', 'sigma', 'lambda_exp'}


@pytest.fixture
def runner():
    return CliRunner()


def json_line(output):
    return json.loads(next(line for line in output.splitlines() if line.startswith('{')))


def test_geom_writes_the_fluid_mask(runner, tmp_path):
    out = str(tmp_path / 'mask.pgm')
    result = runner.invoke(cli, ['--h', '0.125', 'geom', '--config', SLIT_SCENARIO, '--out', out], obj={})
    assert result.exit_code == 0, result.output
    image = read_pgm(out)
    assert set(image.ravel().tolist()) == {0, 255}
    assert image.shape == (32, 808)


class TestProfileCommand:

    def test_alpha_on_the_subcommand(self, runner, tmp_path):
        out = tmp_path / 'profile.csv'
        result = runner.invoke(cli, ['profile', '--alpha', '0.25', '--out', str(out)], obj={})
        assert result.exit_code == 0, result.output
        line = next(line for line in result.output.splitlines() if line.startswith('c = '))
        assert float(line.split('=')[1]) == pytest.approx(0.5 / 2.0 ** 0.5, rel=0.02)
        header = out.read_text(encoding='utf-8').splitlines()[0]
        assert header == 'z,phi,dphi,H'


class TestConstantsCommand:

    def test_prints_json(self, runner):
        result = runner.invoke(cli, ['constants'], obj={})
        assert result.exit_code == 0, result.output
        values = json_line(result.output)
        assert set(values) == CONSTANT_KEYS
        nl = Nonlinearity.from_config()
        assert values['F1'] == pytest.approx(nl.F1)
        assert values['delta0'] == pytest.approx(nl.delta0)
        assert values['lambda_exp'] > 0.0

    def test_subcommand_alpha_wins(self, runner):
        result = runner.invoke(cli, ['--alpha', '0.1', 'constants', '--alpha', '0.4'], obj={})
        assert result.exit_code == 0, result.output
        assert json_line(result.output)['F1'] == pytest.approx(1.0 / 12.0 - 0.4 / 6.0)


class TestBubbleCommand:

    def test_critical_radius_without_radius(self, runner):
        result = runner.invoke(cli, ['bubble', '--alpha', '0.25'], obj={})
        assert result.exit_code == 0, result.output
        line = next(line for line in result.output.splitlines() if line.startswith('R0 = '))
        assert float(line.split('=')[1]) == pytest.approx(find_R0(Nonlinearity(alpha=0.25)), rel=1e-6)

    def test_profile_as_csv(self, runner):
        R0 = find_R0(Nonlinearity(alpha=0.25))
        result = runner.invoke(cli, ['bubble', '--alpha', '0.25', '--radius', f"{2.0 * R0:.6f}"], obj={})
        assert result.exit_code == 0, result.output
        assert 'r,psi,dpsi' in result.output.splitlines()

    def test_below_critical_radius(self, runner):
        result = runner.invoke(cli, ['bubble', '--radius', '0.5'], obj={})
        assert result.exit_code == 0
        assert 'r,psi,dpsi' not in result.output

    def test_old_radius_flag_is_gone(self, runner):
        result = runner.invoke(cli, ['bubble', '--R', '0.5'], obj={})
        assert result.exit_code == 2


@pytest.mark.slow
def test_classify_writes_a_report_file(runner, tmp_path):
    out = tmp_path / 'empty.json'
    result = runner.invoke(cli, ['--h', '0.5', 'classify', '--out', str(out)], obj={})
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text(encoding='utf-8'))
    assert report['verdict'] == 'Propagation'
    assert (tmp_path / 'empty.csv').exists()
    assert read_pgm(str(tmp_path / 'empty.pgm')).ndim == 2


def test_bad_scenario_exits_with_config_error(runner, tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"name": "broken",\n "obstacle": }\n', encoding='utf-8')
    result = runner.invoke(cli, ['scenario', 'run', str(path)], obj={})
    assert result.exit_code == 2


def test_sweep_needs_a_sequence(runner):
    result = runner.invoke(cli, ['sweep'], obj={})
    assert result.exit_code == 2


def test_version(runner):
    result = runner.invoke(cli, ['--version'], obj={})
    assert result.exit_code == 0
    assert 'frontlab' in result.output
