"""
Epsilon sweeps of the first non-zero Steklov eigenvalue along the plateau
family of warping profiles.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Optional

import pandas as pd

from src.constants import Constants
from src.exceptions import DomainError, SteklovWarpError
from src.spectra_closed import spectrum_from_record
from src.sturm_dtn import collar_geometry
from src.warp_profile import WarpedMetricSpec, build_profile, constant_profile
from src.warped_assembler import boundary_volume, lower_bound_C, mesh_for, sigma1_construction

from src.experiments.config import ExperimentConfig, MetricConfig, SweepConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    sigma1: float
    active_branch: str
    lower_bound_C: float
    mesh_size: int
    runtime_ms: float


def metric_spec(cfg: MetricConfig, profile) -> WarpedMetricSpec:
    base = collar_geometry(spectrum_from_record(cfg.cross_section), cfg.collar_length, cfg.bc)
    return WarpedMetricSpec(
        n=cfg.n,
        k=cfg.k,
        profile=profile,
        base=base,
        fiber=spectrum_from_record(cfg.fiber),
        mode=cfg.mode,
        profile_role=cfg.profile_role,
    )


def sweep_profile(cfg: SweepConfig, epsilon: float):
    if cfg.unwarped:
        return constant_profile(cfg.collar_length)
    return build_profile(epsilon, cfg.delta, cfg.collar_length, cfg.is_symmetric)


def sweep_specs(cfg: SweepConfig) -> List[WarpedMetricSpec]:
    """
    One metric per epsilon, all built before any solve so that every
    precondition failure surfaces first.
    """
    specs = []
    for epsilon in cfg.epsilon_list:
        try:
            spec = metric_spec(cfg, sweep_profile(cfg, epsilon))
            if cfg.growth_hypotheses and not cfg.unwarped:
                spec.validate_for_growth()
        except SteklovWarpError as exc:
            raise _with_epsilon(exc, epsilon) from exc
        specs.append(spec)
    return specs


def _with_epsilon(exc: SteklovWarpError, epsilon: float) -> SteklovWarpError:
    try:
        return type(exc)(f"epsilon = {epsilon:g}: {exc}")
    except TypeError:
        return DomainError(f"epsilon = {epsilon:g}: {exc}")


def _bound(cfg: SweepConfig, spec: WarpedMetricSpec, epsilon: float) -> float:
    if cfg.unwarped or not cfg.growth_hypotheses:
        return math.nan
    return lower_bound_C(epsilon, cfg.delta, cfg.n, cfg.k, spec.fiber.first_nonzero)


def sweep_row(cfg: SweepConfig, spec: WarpedMetricSpec, epsilon: float, mesh_elements: int) -> SweepRow:
    start = time.perf_counter()
    mesh = mesh_for(spec, mesh_elements)
    try:
        sigma1, branch = sigma1_construction(spec, mesh)
    except SteklovWarpError as exc:
        raise _with_epsilon(exc, epsilon) from exc
    elapsed = 1000.0 * (time.perf_counter() - start) if cfg.timing else 0.0
    row = SweepRow(
        epsilon=float(epsilon),
        sigma1=float(sigma1),
        active_branch=branch,
        lower_bound_C=_bound(cfg, spec, epsilon),
        mesh_size=mesh.elements,
        runtime_ms=round(elapsed, 3),
    )
    logger.info("epsilon=%g: sigma_1=%.9g (%s branch)", epsilon, row.sigma1, branch)
    return row


def run_sweep(cfg: ExperimentConfig, params: Optional[SweepConfig] = None) -> List[SweepRow]:
    """
    One row per epsilon, in input order. Rows are independent and are
    solved on `cfg.workers` threads.
    """
    params = params or cfg.params
    if not isinstance(params, SweepConfig):
        raise DomainError(f"run_sweep needs a sweep configuration, got {type(params).__name__}")
    specs = sweep_specs(params)
    with ThreadPoolExecutor(max_workers=max(cfg.workers, 1)) as pool:
        rows = list(pool.map(
            lambda pair: sweep_row(params, pair[1], pair[0], cfg.mesh),
            zip(params.epsilon_list, specs),
        ))
    return rows


def rows_to_frame(rows: List[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in rows], columns=Constants.SWEEP_COLUMNS)


def boundary_lengths(cfg: SweepConfig) -> List[float]:
    """
    Length of the Steklov boundary of every surface in a two-dimensional sweep.
    """
    return [boundary_volume(spec) for spec in sweep_specs(cfg)]
