"""
Per-kind experiment drivers. Each returns a pandas table in the column
order of its CSV schema plus a pass flag where the run is a check.
"""
import logging
from typing import Tuple

import numpy as np
import pandas as pd

from src.constants import Constants
from src.direct_oracle import ComparisonReport, RevolutionGrid, compare_with_assembler, revolution_steklov
from src.exceptions import NumericError
from src.experiments.checks import kokarev_check, normalize_volume, quasi_iso_check, volume_residual
from src.experiments.config import ExperimentConfig, NormalizeConfig, OracleConfig, QuasiIsoConfig
from src.experiments.sweep import boundary_lengths, metric_spec, rows_to_frame, run_sweep
from src.experiments.verify import cylinder_spec, random_profile, scaled_profile
from src.sturm_dtn.provenance import SpectrumWithProvenance
from src.warp_profile import RawProfile, build_profile, constant_profile
from src.warped_assembler import mesh_for, spectrum_to_frame, steklov_spectrum_warped

logger = logging.getLogger(__name__)


def spectrum_up_to_count(spec, count: int, mesh, workers: int = 1) -> SpectrumWithProvenance:
    """
    Smallest truncation holding the first `count` eigenvalues.
    """
    top = Constants.INITIAL_TOP
    for _ in range(Constants.MAX_TOP_DOUBLINGS):
        spectrum = steklov_spectrum_warped(spec, top, mesh, workers)
        flat = spectrum.flat_values()
        if flat.size > count:
            return spectrum.truncated(flat[count - 1])
        top *= 2.0
    raise NumericError(f"no {count} eigenvalues found below top = {top:.6g}")


def run_spectrum(cfg: ExperimentConfig) -> pd.DataFrame:
    params = cfg.params
    if params.epsilon is None:
        profile = constant_profile(params.collar_length)
    else:
        profile = build_profile(params.epsilon, params.delta, params.collar_length, params.is_symmetric)
    spec = metric_spec(params, profile)
    mesh = mesh_for(spec, cfg.mesh)
    if params.count is not None:
        spectrum = spectrum_up_to_count(spec, params.count, mesh, cfg.workers)
    else:
        spectrum = steklov_spectrum_warped(spec, params.top, mesh, cfg.workers)
    return spectrum_to_frame(spectrum)


def oracle_grid(params: OracleConfig) -> RevolutionGrid:
    length = params.length
    if params.profile == 'constant':
        value = params.value
        h = RawProfile(func=lambda t: np.full(np.shape(t), value), collar_length=length, name='constant')
    elif params.profile == 'bump':
        h = RawProfile(func=lambda t: 1.0 + t * (length - t), collar_length=length, name='bump')
    else:
        h = build_profile(params.epsilon, params.delta, length, params.bc == 'both')
    right = Constants.STEKLOV if params.bc == 'both' else Constants.NEUMANN
    return RevolutionGrid(params.n_t, params.n_theta, length, params.fiber_length, h, Constants.STEKLOV, right)


def run_oracle(cfg: ExperimentConfig) -> Tuple[pd.DataFrame, ComparisonReport]:
    params: OracleConfig = cfg.params
    grid = oracle_grid(params)
    available = grid.n_theta * len(grid.steklov_rings)
    values = revolution_steklov(grid, available)
    values = values[:params.count] if params.count is not None else values[values <= params.top]
    frame = pd.DataFrame({'index': np.arange(values.size), 'value': values}, columns=Constants.ORACLE_COLUMNS)
    report = None
    if params.compare:
        report = compare_with_assembler(grid, params.top, params.tol, mesh_elements=cfg.mesh)
    return frame, report


def run_sweep_frame(cfg: ExperimentConfig) -> pd.DataFrame:
    return rows_to_frame(run_sweep(cfg))


def run_kokarev(cfg: ExperimentConfig) -> Tuple[pd.DataFrame, bool]:
    params = cfg.params
    rows = run_sweep(cfg)
    records = []
    for row, length in zip(rows, boundary_lengths(params)):
        result = kokarev_check(row.sigma1, length, params.genus)
        records.append({
            'epsilon': row.epsilon,
            'sigma1': row.sigma1,
            'boundary_length': length,
            'ratio': result.ratio,
            'passed': result.passed,
        })
    frame = pd.DataFrame(records, columns=Constants.KOKAREV_COLUMNS)
    return frame, bool(frame['passed'].all())


def run_quasi_iso(cfg: ExperimentConfig) -> Tuple[pd.DataFrame, bool]:
    params: QuasiIsoConfig = cfg.params
    rng = np.random.default_rng(cfg.seed)
    records = []
    for index in range(params.pairs):
        first = random_profile(rng, params.collar_length, f'pair{index}')
        second = scaled_profile(rng, first, params.max_scale)
        report = quasi_iso_check(
            cylinder_spec(params.collar_length, fiber_length=params.fiber_length, profile=first),
            cylinder_spec(params.collar_length, fiber_length=params.fiber_length, profile=second),
            dim=2,
            k_max=params.k_max,
            mesh_elements=cfg.mesh,
        )
        records.append({
            'pair': index,
            'C': report.ratio_c,
            'bound': report.bound,
            'min_ratio': report.min_ratio,
            'max_ratio': report.max_ratio,
            'passed': report.passed,
        })
    frame = pd.DataFrame(records, columns=Constants.QUASI_ISO_COLUMNS)
    return frame, bool(frame['passed'].all())


def normalize_inputs(params: NormalizeConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Trapezoid weights on [0, 1], unit base volume, and phi = 0 on
    [0, flat_length] ('collar') or phi = 1 ('one').
    """
    t = np.linspace(0.0, 1.0, params.points)
    weights = np.full(t.size, t[1])
    weights[[0, -1]] *= 0.5
    if params.phi == 'one':
        phi = np.ones_like(t)
    else:
        ramp = (t - params.flat_length) / (1.0 - params.flat_length)
        phi = np.clip(ramp, 0.0, 1.0) ** 2
    return np.ones_like(t), weights, phi


def run_normalize_volume(cfg: ExperimentConfig) -> pd.DataFrame:
    params: NormalizeConfig = cfg.params
    base, weights, phi = normalize_inputs(params)
    c = normalize_volume(base, weights, phi, params.dim, params.target)
    residual = volume_residual(base, weights, phi, params.dim, params.target, c)
    logger.info("Volume normalisation: c = %.12g (residual %.3g)", c, residual)
    return pd.DataFrame(
        [{'c': c, 'dim': params.dim, 'target': params.target, 'residual': residual}],
        columns=Constants.NORMALIZE_COLUMNS,
    )
