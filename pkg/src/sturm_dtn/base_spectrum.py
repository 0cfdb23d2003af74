"""
Mixed Steklov-Neumann spectrum of one auxiliary operator on a collar base,
by separation over the cross-section modes mu_j.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Tuple

import numpy as np

from src.constants import Constants
from src.exceptions import CompletenessError, DomainError
from src.sturm_dtn.geometry import BaseGeometry
from src.sturm_dtn.mesh import MeshSpec
from src.sturm_dtn.problem import EndCondition, SturmProblem, dtn_eigenvalues, neumann, steklov
from src.sturm_dtn.provenance import Source, SpectrumWithProvenance, merge_eigenvalues

logger = logging.getLogger(__name__)

Coefficient = Callable[[np.ndarray], np.ndarray]


def _end_conditions(geom: BaseGeometry, boundary_weights: Tuple[float, float]) -> Tuple[EndCondition, EndCondition]:
    ends = []
    for bc, weight in zip((geom.left_bc, geom.right_bc), boundary_weights):
        ends.append(steklov(weight) if bc == Constants.STEKLOV else neumann())
    return ends[0], ends[1]


def mode_problem(
    geom: BaseGeometry,
    w_spec: Coefficient,
    mu: float,
    lambda_fiber: float,
    inv_sq_weight: Coefficient,
    mesh: MeshSpec,
    boundary_weights: Tuple[float, float] = (1.0, 1.0),
) -> SturmProblem:
    """
    Problem of the cross-section mode mu: q(t) = mu w(t) + lambda inv_sq_weight(t).
    """
    if lambda_fiber == 0.0:
        q = lambda t: mu * np.asarray(w_spec(t), dtype=float)
    else:
        q = lambda t: mu * np.asarray(w_spec(t), dtype=float) + lambda_fiber * np.asarray(inv_sq_weight(t), dtype=float)
    left, right = _end_conditions(geom, boundary_weights)
    return SturmProblem(geom.collar_length, w_spec, q, left, right, mesh)


def base_dtn_spectrum(
    geom: BaseGeometry,
    w_spec: Coefficient,
    lambda_fiber: float,
    inv_sq_weight: Coefficient,
    top: float,
    mesh: MeshSpec = None,
    boundary_weights: Tuple[float, float] = (1.0, 1.0),
    fiber_multiplicity: int = 1,
    workers: int = 1,
) -> SpectrumWithProvenance:
    """
    All eigenvalues <= top of the auxiliary operator with fiber eigenvalue
    `lambda_fiber`, tagged by cross-section mode.

    Modes are taken in ascending mu; the mode-mu eigenvalues do not decrease
    with mu, so the scan stops at the first mode whose smallest eigenvalue
    exceeds top.
    """
    if not top > 0.0:
        raise DomainError(f"top must be positive, got {top}")
    if lambda_fiber < 0.0:
        raise DomainError(f"fiber eigenvalue must be non-negative, got {lambda_fiber}")
    mesh = mesh or MeshSpec()
    modes = list(geom.cross_section.entries)

    def solve(mode: Tuple[float, int]) -> np.ndarray:
        mu, _ = mode
        problem = mode_problem(geom, w_spec, mu, lambda_fiber, inv_sq_weight, mesh, boundary_weights)
        return dtn_eigenvalues(problem)

    pairs: List[Tuple[float, Source]] = []
    stopped = False
    chunk = max(int(workers), 1)
    with ThreadPoolExecutor(max_workers=chunk) as pool:
        for start in range(0, len(modes), chunk):
            batch = modes[start:start + chunk]
            results = list(pool.map(solve, batch))
            for (mu, mu_mult), values in zip(batch, results):
                logger.debug(
                    "lambda=%.6g mu=%.6g: smallest DtN eigenvalue %.6g", lambda_fiber, mu, values[0]
                )
                if values[0] > top:
                    stopped = True
                    break
                pairs.extend(
                    (value, Source(float(lambda_fiber), int(fiber_multiplicity), float(mu), int(mu_mult), branch))
                    for branch, value in enumerate(values)
                    if value <= top
                )
            if stopped:
                break

    if not stopped and math.isfinite(geom.cross_section.complete_up_to):
        raise CompletenessError(
            f"cross-section spectrum exhausted at mu = {modes[-1][0]:.6g} before the smallest "
            f"DtN eigenvalue exceeded top = {top:.6g} (lambda = {lambda_fiber:.6g})"
        )
    return merge_eigenvalues(pairs)

