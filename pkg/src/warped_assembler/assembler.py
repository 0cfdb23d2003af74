"""
Steklov and mixed Steklov-Neumann spectra of warped products M = B x_h F,
assembled as the union over fiber eigenvalues lambda of the spectra of the
auxiliary base problems, with multiplicity and provenance.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np
import pandas as pd

from src.constants import Constants
from src.exceptions import CompletenessError, DomainError, HypothesisViolationError, NumericError
from src.sturm_dtn import MeshSpec, base_dtn_spectrum
from src.sturm_dtn.provenance import SpectrumWithProvenance, combine
from src.warp_profile import WarpedMetricSpec

logger = logging.getLogger(__name__)


def mesh_for(spec: WarpedMetricSpec, elements: int = Constants.DEFAULT_MESH_ELEMENTS) -> MeshSpec:
    """
    Mesh graded on the profile breakpoints, with resolution checks on its
    transition intervals.
    """
    return MeshSpec(
        elements=int(elements),
        breakpoints=tuple(spec.profile.breakpoints()),
        transitions=tuple(spec.profile.transition_intervals()),
    )


def _boundary_weights(spec: WarpedMetricSpec) -> Tuple[float, float]:
    return spec.boundary_weight(0.0), spec.boundary_weight(spec.base.collar_length)


def branch_spectrum(
    spec: WarpedMetricSpec,
    lambda_fiber: float,
    top: float,
    mesh: MeshSpec = None,
    fiber_multiplicity: int = 1,
    workers: int = 1,
) -> SpectrumWithProvenance:
    """
    Eigenvalues <= top of the auxiliary problem of one fiber eigenvalue.
    """
    return base_dtn_spectrum(
        spec.base,
        spec.gradient_weight,
        lambda_fiber,
        spec.fiber_coefficient,
        top,
        mesh=mesh or mesh_for(spec),
        boundary_weights=_boundary_weights(spec),
        fiber_multiplicity=fiber_multiplicity,
        workers=workers,
    )


def steklov_spectrum_warped(
    spec: WarpedMetricSpec,
    top: float,
    mesh: MeshSpec = None,
    workers: int = 1,
) -> SpectrumWithProvenance:
    """
    All Steklov eigenvalues <= top of the warped product.

    Fiber eigenvalues are consumed in ascending order. Every auxiliary
    eigenvalue is non-decreasing in lambda, so the scan stops at the first
    lambda whose auxiliary spectrum has nothing <= top.
    """
    if not top > 0.0:
        raise DomainError(f"top must be positive, got {top}")
    mesh = mesh or mesh_for(spec)
    fiber = list(spec.fiber.entries)
    chunk = max(int(workers), 1)

    def solve(entry: Tuple[float, int]) -> SpectrumWithProvenance:
        lambda_fiber, multiplicity = entry
        return branch_spectrum(spec, lambda_fiber, top, mesh, multiplicity)

    branches: List[SpectrumWithProvenance] = []
    stopped = False
    with ThreadPoolExecutor(max_workers=chunk) as pool:
        for start in range(0, len(fiber), chunk):
            batch = fiber[start:start + chunk]
            for (lambda_fiber, _), branch in zip(batch, pool.map(solve, batch)):
                if not len(branch):
                    logger.debug("lambda=%.6g: nothing below top=%.6g, stopping", lambda_fiber, top)
                    stopped = True
                    break
                logger.debug(
                    "lambda=%.6g: %d eigenvalues below top", lambda_fiber, branch.count_up_to(top)
                )
                branches.append(branch)
            if stopped:
                break

    if not stopped and math.isfinite(spec.fiber.complete_up_to):
        raise CompletenessError(
            f"fiber spectrum exhausted at lambda = {fiber[-1][0]:.6g} before the auxiliary "
            f"spectra passed top = {top:.6g}"
        )
    spectrum = combine(branches)
    logger.info(
        "Assembled %d eigenvalues <= %.6g from %d fiber branches",
        spectrum.count_up_to(top), top, len(branches),
    )
    return spectrum


def _total_count(spec: WarpedMetricSpec) -> float:
    """
    Number of Steklov eigenvalues when both closed spectra are finite and
    complete, infinity otherwise.
    """
    spectra = (spec.fiber, spec.base.cross_section)
    if any(math.isfinite(s.complete_up_to) for s in spectra):
        return math.inf
    sizes = [int(np.sum(s.multiplicities)) for s in spectra]
    return sizes[0] * sizes[1] * len(spec.base.steklov_ends)


def first_eigenvalues(spec: WarpedMetricSpec, count: int, mesh: MeshSpec = None, workers: int = 1) -> np.ndarray:
    """
    First `count` eigenvalues with multiplicity, found by doubling top until
    more than `count` values are certified.
    """
    if int(count) < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    total = _total_count(spec)
    if count > total:
        raise DomainError(f"the discrete problem has only {total} eigenvalues, {count} requested")
    top = Constants.INITIAL_TOP
    for _ in range(Constants.MAX_TOP_DOUBLINGS):
        values = steklov_spectrum_warped(spec, top, mesh, workers).flat_values()
        if values.size > count or values.size == total:
            return values[:count]
        top *= 2.0
    raise NumericError(f"no {count} eigenvalues found below top = {top:.6g}")


def first_above(
    spec: WarpedMetricSpec,
    lambda_fiber: float,
    floor: float = -math.inf,
    mesh: MeshSpec = None,
    skip: int = 0,
) -> float:
    """
    Smallest eigenvalue > floor of one auxiliary problem, after dropping the
    `skip` lowest eigenvalues (counted with multiplicity); infinity when the
    problem is finite and has none.
    """
    top = Constants.INITIAL_TOP
    cross = spec.base.cross_section
    complete = not math.isfinite(cross.complete_up_to)
    available = int(np.sum(cross.multiplicities)) * len(spec.base.steklov_ends)
    for _ in range(Constants.MAX_TOP_DOUBLINGS):
        spectrum = branch_spectrum(spec, lambda_fiber, max(top, 2.0 * floor), mesh)
        values = spectrum.flat_values()[int(skip):]
        above = values[values > floor]
        if above.size:
            return float(above[0])
        if complete and spectrum.count_up_to(math.inf) == available:
            return math.inf
        top *= 2.0
    raise NumericError(f"no eigenvalue above {floor:.3g} found for lambda = {lambda_fiber:.6g}")


def sigma1_construction(spec: WarpedMetricSpec, mesh: MeshSpec = None) -> Tuple[float, str]:
    """
    First non-zero eigenvalue of the warped product as the
    minimum of two candidates:

        base   first non-zero eigenvalue of the lambda = 0 problem
        fiber  smallest eigenvalue of the lambda = lambda_1(F) problem

    Returns the value and the tag of the branch attaining it.
    """
    mesh = mesh or mesh_for(spec)
    # sigma_0 = 0 is simple on the connected product
    base_value = first_above(spec, 0.0, mesh=mesh, skip=1)
    fiber_value = first_above(spec, spec.fiber.first_nonzero, -math.inf, mesh)
    if base_value <= fiber_value:
        sigma1, branch = base_value, Constants.BRANCH_BASE
    else:
        sigma1, branch = fiber_value, Constants.BRANCH_FIBER
    logger.debug("sigma_1 candidates: base %.9g, fiber %.9g", base_value, fiber_value)
    return sigma1, branch


def lower_bound_C(epsilon: float, delta: float, n: int, k: int, lambda1F: float) -> float:
    """
    min(eps^(delta - 1) / 8, lambda_1(F) eps^(1 - delta n / k) / 4), the
    growth rate of sigma_1 along the plateau family; diverges as eps -> 0
    when k / n < delta < 1.
    """
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not lambda1F > 0.0:
        raise DomainError(f"lambda_1(F) must be positive, got {lambda1F}")
    if not n > k >= 1:
        raise HypothesisViolationError(f"need n > k >= 1, got n={n}, k={k}")
    if not k / n < delta < 1.0:
        raise HypothesisViolationError(f"need k/n = {k / n:.6g} < delta < 1, got delta = {delta}")
    return min(epsilon ** (delta - 1.0) / 8.0, lambda1F * epsilon ** (1.0 - delta * n / k) / 4.0)


def boundary_volume(spec: WarpedMetricSpec) -> float:
    """
    Measure of the Steklov boundary Sigma_St x F under the warped metric.
    """
    unit = spec.base.cross_section.volume * spec.fiber.volume
    ends = (0.0, spec.base.collar_length)
    return float(sum(spec.boundary_weight(ends[index]) for index in spec.base.steklov_ends) * unit)


def spectrum_to_frame(spectrum: SpectrumWithProvenance) -> pd.DataFrame:
    return spectrum.to_frame()
