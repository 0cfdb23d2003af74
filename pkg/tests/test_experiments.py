import math
import os

import numpy as np
import pandas as pd
import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from mains.experiments_cli import main
from src.constants import Constants
from src.exceptions import ConfigError, DomainError, HypothesisViolationError, NumericError
from src.experiments import (
    ExperimentConfig,
    SweepConfig,
    VerifyConfig,
    kokarev_check,
    load_experiment,
    normalize_volume,
    parse_experiment,
    quasi_iso_check,
    rows_to_frame,
    run_sweep,
    run_verify,
    with_overrides,
)
from src.experiments.checks import volume_residual
from src.experiments.runners import run_spectrum
from src.experiments.verify import AcceptanceSuite
from src.utilities.config_parser import PROJECT_ROOT
from src.utilities.utils import Utils
from src.warp_profile import constant_profile

TWO_PI = 2.0 * math.pi
CIRCLE = {'kind': 'circle', 'length': TWO_PI, 'count': 64}
SWEEP = {
    'n': 2,
    'k': 1,
    'collar_length': 1.0,
    'cross_section': CIRCLE,
    'fiber': CIRCLE,
    'epsilon_list': [0.1, 0.05],
}


def _sweep_params(**overrides) -> SweepConfig:
    fields = {**SWEEP, 'epsilon_list': tuple(SWEEP['epsilon_list']), 'timing': False}
    fields.update(overrides)
    return SweepConfig(**fields)


def _write(tmp_path, record, name='experiment.yaml') -> str:
    path = os.path.join(str(tmp_path), name)
    with open(path, 'w') as stream:
        yaml.safe_dump(record, stream)
    return path


# configuration

def test_missing_delta_names_field():
    with pytest.raises(ConfigError) as excinfo:
        parse_experiment({'kind': 'sweep', 'sweep': SWEEP}, defaults={})
    assert excinfo.value.field_path == 'sweep.delta'
    assert 'sweep.delta' in str(excinfo.value)


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError) as excinfo:
        parse_experiment({'kind': 'sweep', 'sweep': {**SWEEP, 'delta': 0.75, 'epsilon': 0.1}}, defaults={})
    assert excinfo.value.field_path == 'sweep.epsilon'
    with pytest.raises(ConfigError) as excinfo:
        parse_experiment({'kind': 'sweep', 'sweep': {**SWEEP, 'delta': 0.75}, 'verbose': True}, defaults={})
    assert excinfo.value.field_path == 'verbose'


@pytest.mark.parametrize('update, path', [
    ({'delta': 0.4}, 'sweep.delta'),
    ({'delta': 0.75, 'epsilon_list': [0.05, 0.1]}, 'sweep.epsilon_list'),
    ({'delta': 0.75, 'mode': 'hyperbolic'}, 'sweep.mode'),
    ({'delta': 0.75, 'bc': 'dirichlet'}, 'sweep.bc'),
    ({'delta': 0.75, 'n': 'two'}, 'sweep.n'),
    ({'delta': 0.75, 'fiber': {'kind': 'sphere'}}, 'sweep.fiber'),
])
def test_invalid_sweep_fields(update, path):
    with pytest.raises(ConfigError) as excinfo:
        parse_experiment({'kind': 'sweep', 'sweep': {**SWEEP, **update}}, defaults={})
    assert excinfo.value.field_path == path


def test_unknown_kind():
    with pytest.raises(ConfigError) as excinfo:
        parse_experiment({'kind': 'plot'})
    assert excinfo.value.field_path == 'kind'


def test_defaults_fill_missing_fields():
    defaults = {'sweep': {**SWEEP, 'mode': Constants.VOLUME_PRESERVING}}
    cfg = parse_experiment({'kind': 'sweep', 'sweep': {'delta': 0.75}, 'mesh': 200}, defaults=defaults)
    assert cfg.params.delta == 0.75
    assert cfg.params.epsilon_list == (0.1, 0.05)
    assert cfg.params.is_symmetric
    assert cfg.mesh == 200


def test_mixed_sweep_profile_is_one_sided():
    cfg = parse_experiment({'kind': 'sweep', 'sweep': {**SWEEP, 'delta': 0.75, 'bc': 'mixed'}}, defaults={})
    assert not cfg.params.is_symmetric


def test_numeric_strings_are_numbers():
    cfg = parse_experiment({'kind': 'sweep', 'sweep': {**SWEEP, 'delta': '7.5e-1'}}, defaults={})
    assert cfg.params.delta == 0.75


def test_overrides():
    cfg = parse_experiment({'kind': 'spectrum', 'spectrum': {
        'n': 1, 'k': 1, 'collar_length': 2.0, 'cross_section': {'kind': 'point'}, 'fiber': CIRCLE,
    }}, defaults={})
    updated = with_overrides(cfg, top=1.5, mesh=100, out='x.csv', seed=None)
    assert updated.params.top == 1.5
    assert updated.mesh == 100
    assert updated.output == 'x.csv'
    sweep = parse_experiment({'kind': 'sweep', 'sweep': {**SWEEP, 'delta': 0.75}}, defaults={})
    with pytest.raises(ConfigError) as excinfo:
        with_overrides(sweep, count=3)
    assert excinfo.value.field_path == 'sweep.count'
    with pytest.raises(ConfigError):
        with_overrides(sweep, mesh=4)


def test_kokarev_needs_a_surface():
    with pytest.raises(ConfigError) as excinfo:
        parse_experiment({'kind': 'kokarev', 'kokarev': {**SWEEP, 'delta': 0.75}}, defaults={})
    assert excinfo.value.field_path == 'kokarev.n'


def test_shipped_configs_parse():
    directory = os.path.join(PROJECT_ROOT, 'configs', 'experiments')
    for name in sorted(os.listdir(directory)):
        cfg = load_experiment(os.path.join(directory, name))
        assert cfg.kind in name.replace('-', '_')


# bound checks

def test_kokarev_check():
    at_bound = kokarev_check(1.0, 8.0 * math.pi)
    assert at_bound.passed
    assert at_bound.ratio == pytest.approx(1.0)
    assert not kokarev_check(1.0, 8.0 * math.pi * 1.01).passed
    assert kokarev_check(1.0, 16.0 * math.pi, genus=1).passed
    assert kokarev_check(0.5, 4.0 * math.pi).margin == pytest.approx(6.0 * math.pi)


def test_quasi_iso_identical_metrics(make_cylinder):
    spec = make_cylinder(1.0)
    report = quasi_iso_check(spec, spec, dim=2, k_max=5)
    assert report.passed
    assert report.ratio_c == 1.0
    assert report.ratios == [1.0] * 5


def test_quasi_iso_detects_understated_constant(make_cylinder):
    first = make_cylinder(1.0)
    second = make_cylinder(1.0, profile=constant_profile(1.0, 2.0))
    honest = quasi_iso_check(first, second, dim=2, k_max=4)
    assert honest.ratio_c == pytest.approx(4.0)
    # C^(2m + 1) with m = dim = 2
    assert honest.bound == pytest.approx(4.0 ** 5)
    assert len(honest.ratios) == 4
    assert honest.passed
    assert not quasi_iso_check(first, second, dim=2, k_max=4, ratio_c=1.0).passed


def test_quasi_iso_needs_same_product(make_cylinder):
    with pytest.raises(DomainError):
        quasi_iso_check(make_cylinder(1.0), make_cylinder(2.0), dim=2, k_max=3)


def test_normalize_volume_closed_form():
    one = np.ones(1)
    assert normalize_volume(one, one, one, 2, math.e ** 2) == pytest.approx(2.0, abs=1e-10)
    assert normalize_volume(one, one, one, 2, 1.0) == 0.0


@settings(max_examples=40, deadline=None)
@given(target=st.floats(min_value=0.2, max_value=100.0), dim=st.integers(min_value=1, max_value=6))
def test_normalize_volume_residual(target, dim):
    t = np.linspace(0.0, 1.0, 11)
    base, weights, phi = 1.0 + t, np.full(11, 0.1), t ** 2
    c = normalize_volume(base, weights, phi, dim, target)
    assert volume_residual(base, weights, phi, dim, target, c) <= 1e-10


def test_normalize_volume_infeasible():
    ones = np.ones(3)
    with pytest.raises(DomainError):
        normalize_volume(ones, ones, np.array([0.0, 0.0, 1.0]), 2, 1.5)
    with pytest.raises(DomainError):
        normalize_volume(ones, ones, np.zeros(3), 2, 5.0)
    with pytest.raises(DomainError):
        normalize_volume(ones, ones, ones, 2, -1.0)


# sweeps

def test_unwarped_sweep_matches_closed_form():
    experiment = ExperimentConfig(kind='sweep', params=_sweep_params(epsilon_list=(0.1,), unwarped=True))
    rows = run_sweep(experiment)
    assert len(rows) == 1
    assert rows[0].sigma1 == pytest.approx(math.tanh(0.5), rel=1e-4)
    assert rows[0].active_branch in (Constants.BRANCH_BASE, Constants.BRANCH_FIBER)
    assert math.isnan(rows[0].lower_bound_C)
    assert rows[0].runtime_ms == 0.0
    frame = rows_to_frame(rows)
    assert frame.columns.tolist() == Constants.SWEEP_COLUMNS


def test_sweep_rejects_large_epsilon_before_solving():
    experiment = ExperimentConfig(kind='sweep', params=_sweep_params(delta=0.75, epsilon_list=(0.2, 0.1)))
    with pytest.raises(HypothesisViolationError) as excinfo:
        run_sweep(experiment)
    assert 'epsilon = 0.2' in str(excinfo.value)


@pytest.mark.slow
def test_sweep_grows_and_is_deterministic():
    params = _sweep_params(delta=0.75)
    rows = run_sweep(ExperimentConfig(kind='sweep', params=params))
    threaded = run_sweep(ExperimentConfig(kind='sweep', params=params, workers=2))
    assert [row.epsilon for row in rows] == [0.1, 0.05]
    assert rows[1].sigma1 > rows[0].sigma1
    assert rows == threaded
    for row in rows:
        assert row.lower_bound_C == pytest.approx(row.epsilon ** -0.25 / 8.0)
        assert row.sigma1 >= 0.1 * row.lower_bound_C


def test_spectrum_runner():
    cfg = parse_experiment({'kind': 'spectrum', 'spectrum': {
        'n': 1, 'k': 1, 'mode': 'plain_warp', 'collar_length': 1.0, 'bc': 'mixed',
        'cross_section': {'kind': 'point'}, 'fiber': CIRCLE, 'count': 6,
    }}, defaults={})
    frame = run_spectrum(cfg)
    assert frame.columns.tolist() == Constants.SPECTRUM_COLUMNS
    # the sixth eigenvalue 3 tanh 3 is double
    assert frame['multiplicity'].sum() == 7
    assert frame['value'].max() == pytest.approx(3.0 * math.tanh(3.0), rel=1e-4)


# acceptance suite

def _verify(*checks, **fields):
    return ExperimentConfig(kind='verify', params=VerifyConfig(checks=checks, **fields), seed=7)


def test_verify_closed_forms():
    report = run_verify(_verify('cylinder', 'mixed', 'volume_element', 'normalize_volume'))
    assert report['passed'], report
    assert [check['name'] for check in report['checks']] == ['cylinder', 'mixed', 'volume_element', 'normalize_volume']


def test_growth_gate_threshold():
    shipped = load_experiment(os.path.join(PROJECT_ROOT, 'configs', 'experiments', 'verify.yaml'))
    assert shipped.params.growth_ratio_min == 1.5
    assert VerifyConfig().growth_ratio_min == 1.5


@pytest.mark.slow
def test_verify_growth():
    report = run_verify(_verify('growth'))
    assert report['passed'], report
    detail = report['checks'][0]['detail']
    sigma = detail['sigma1']
    assert detail['ratio'] == pytest.approx(sigma[-1] / sigma[0])
    assert detail['ratio'] >= 1.5


@pytest.mark.slow
def test_verify_bounds_and_monotonicity():
    report = run_verify(_verify('monotone_lambda', 'kokarev', 'quasi_iso', 'convergence', quasi_pairs=3))
    assert report['passed'], report


# command line

def test_cli_normalize_volume(tmp_path):
    out = os.path.join(str(tmp_path), 'normalize.csv')
    assert main(['normalize-volume', '--out', out]) == Constants.EXIT_OK
    frame = pd.read_csv(out)
    assert frame.columns.tolist() == Constants.NORMALIZE_COLUMNS
    assert frame['residual'].iloc[0] <= 1e-10


def test_cli_spectrum(tmp_path):
    out = os.path.join(str(tmp_path), 'spectrum.csv')
    assert main(['spectrum', '--top', '1.5', '--out', out]) == Constants.EXIT_OK
    frame = pd.read_csv(out)
    assert frame['value'].iloc[0] == pytest.approx(0.0, abs=1e-9)
    assert frame['value'].iloc[1] == pytest.approx(math.tanh(1.0), rel=1e-4)


def test_cli_config_errors(tmp_path):
    missing_delta = _write(tmp_path, {'kind': 'sweep', 'sweep': {'epsilon_list': [0.1]}})
    assert main(['sweep', '--config', missing_delta]) == Constants.EXIT_CONFIG
    spectrum = os.path.join(PROJECT_ROOT, 'configs', 'experiments', 'spectrum.yaml')
    assert main(['sweep', '--config', spectrum]) == Constants.EXIT_CONFIG
    assert main(['sweep', '--count', '3']) == Constants.EXIT_CONFIG
    assert main(['sweep', '--config', os.path.join(str(tmp_path), 'absent.yaml')]) == Constants.EXIT_CONFIG


def test_cli_failed_comparison(tmp_path):
    config = _write(tmp_path, {'kind': 'oracle', 'oracle': {
        'profile': 'bump', 'n_t': 33, 'n_theta': 16, 'top': 3.0, 'tol': 1.0e-9,
    }})
    out = os.path.join(str(tmp_path), 'oracle.csv')
    assert main(['oracle', '--config', config, '--out', out]) == Constants.EXIT_FAILURE
    assert pd.read_csv(out).columns.tolist() == Constants.ORACLE_COLUMNS


def test_cli_verify_writes_report(tmp_path):
    config = _write(tmp_path, {'kind': 'verify', 'verify': {'checks': ['cylinder', 'volume_element']}})
    out = os.path.join(str(tmp_path), 'reports', 'verify.json')
    assert main(['verify', '--config', config, '--out', out]) == Constants.EXIT_OK
    report = Utils.load_json(out)
    assert report['passed'] is True
    assert [check['name'] for check in report['checks']] == ['cylinder', 'volume_element']


def test_verify_reports_raised_check_as_failure(monkeypatch, caplog):
    def broken(self):
        raise NumericError('bracket lost')
    monkeypatch.setattr(AcceptanceSuite, 'check_cylinder', broken)
    with caplog.at_level('WARNING'):
        report = run_verify(_verify('cylinder', 'volume_element'))
    assert not report['passed']
    assert report['checks'][0]['detail'] == {'error': 'NumericError: bracket lost'}
    assert report['checks'][1]['passed']
    assert any('verify cylinder: FAIL' in record.getMessage() for record in caplog.records)
