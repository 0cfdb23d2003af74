"""
Bound checks run on computed spectra: the surface bound of Kokarev, the
quasi-isometry eigenvalue comparison, and the volume normalisation of
conformally rescaled metrics.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from src.constants import Constants
from src.exceptions import DomainError, NumericError
from src.warp_profile import WarpedMetricSpec, max_coefficient_ratio
from src.warped_assembler import first_eigenvalues, mesh_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KokarevResult:
    passed: bool
    product: float
    bound: float
    ratio: float
    margin: float

    def to_dict(self) -> Dict[str, object]:
        return {
            'passed': self.passed,
            'product': self.product,
            'bound': self.bound,
            'ratio': self.ratio,
            'margin': self.margin,
        }


def kokarev_check(sigma1: float, boundary_length: float, genus: int = 0) -> KokarevResult:
    """
    sigma_1 L(boundary) <= 8 pi (genus + 1) for orientable compact surfaces.
    """
    bound = 8.0 * math.pi * (int(genus) + 1)
    product = float(sigma1) * float(boundary_length)
    return KokarevResult(
        passed=product <= bound * (1.0 + Constants.KOKAREV_SLACK),
        product=product,
        bound=bound,
        ratio=product / bound,
        margin=bound - product,
    )


@dataclass
class QuasiIsoReport:
    passed: bool
    ratio_c: float
    bound: float
    ratios: List[float] = field(default_factory=list)

    @property
    def min_ratio(self) -> float:
        return min(self.ratios, default=1.0)

    @property
    def max_ratio(self) -> float:
        return max(self.ratios, default=1.0)


def _same_product(first: WarpedMetricSpec, second: WarpedMetricSpec) -> None:
    if (first.n, first.k) != (second.n, second.k):
        raise DomainError(f"dimensions differ: ({first.n}, {first.k}) vs ({second.n}, {second.k})")
    if first.base != second.base or first.fiber != second.fiber:
        raise DomainError("metrics live on different products")


def quasi_isometry_ratio(first: WarpedMetricSpec, second: WarpedMetricSpec, samples: int = 2001) -> float:
    """
    Largest pointwise ratio between corresponding metric coefficients,
    sampled on the collar.
    """
    t = np.linspace(0.0, first.base.collar_length, int(samples))
    axial_1, fiber_1 = first.metric_coefficients(t)
    axial_2, fiber_2 = second.metric_coefficients(t)
    return max_coefficient_ratio(np.concatenate([axial_1, fiber_1]), np.concatenate([axial_2, fiber_2]))


def quasi_iso_check(
    first: WarpedMetricSpec,
    second: WarpedMetricSpec,
    dim: int,
    k_max: int,
    ratio_c: Optional[float] = None,
    mesh_elements: int = Constants.DEFAULT_MESH_ELEMENTS,
) -> QuasiIsoReport:
    """
    Check C^-(2m+1) <= sigma_k(g1) / sigma_k(g2) <= C^(2m+1) for k = 1..k_max.
    `ratio_c` replaces the computed C when given.
    """
    _same_product(first, second)
    if int(k_max) < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    c = quasi_isometry_ratio(first, second) if ratio_c is None else float(ratio_c)
    bound = c ** (2 * int(dim) + 1)
    values_1 = first_eigenvalues(first, k_max + 1, mesh_for(first, mesh_elements))
    values_2 = first_eigenvalues(second, k_max + 1, mesh_for(second, mesh_elements))
    # index 0 is the simple eigenvalue sigma_0 = 0 of both metrics
    ratios = [float(a / b) for a, b in zip(values_1[1:], values_2[1:])][:k_max]
    slack = 1.0 + Constants.KOKAREV_SLACK
    passed = all(1.0 / (bound * slack) <= ratio <= bound * slack for ratio in ratios)
    logger.debug("Quasi-isometry C=%.6g bound=%.6g ratios=%s", c, bound, ratios)
    return QuasiIsoReport(passed=passed, ratio_c=c, bound=bound, ratios=ratios)


def _log_volume(c: float, log_weights: np.ndarray, exponent: np.ndarray) -> float:
    return float(logsumexp(log_weights + c * exponent))


def normalize_volume(
    base_volume: np.ndarray,
    weights: np.ndarray,
    phi: np.ndarray,
    dim: int,
    target: float,
) -> float:
    """
    Find c with sum(weights * base_volume * exp(c dim phi / 2)) = target.

    The volume grows with c from the volume of {phi = 0} (c -> -inf), so a
    bracket is found by doubling |c| and the root refined by bracketing
    iteration to a relative residual of NORMALIZE_RTOL.
    """
    base_volume = np.asarray(base_volume, dtype=float)
    weights = np.asarray(weights, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if not (base_volume.shape == weights.shape == phi.shape):
        raise DomainError("base_volume, weights and phi must have one shape")
    if np.any(base_volume <= 0.0) or np.any(weights < 0.0):
        raise DomainError("volume integrand must be positive and weights non-negative")
    if np.any(phi < 0.0):
        raise DomainError("phi must be non-negative")
    if not target > 0.0 or int(dim) < 1:
        raise DomainError(f"need target > 0 and dim >= 1, got target={target}, dim={dim}")

    mass = weights * base_volume
    total = float(np.sum(mass))
    flat = float(np.sum(mass[phi == 0.0]))
    if not np.any((phi > 0.0) & (mass > 0.0)):
        if abs(total - target) <= Constants.NORMALIZE_RTOL * target:
            return 0.0
        raise DomainError(f"phi vanishes on the support; the volume is {total:.12g} for every c")
    if target <= flat:
        raise DomainError(
            f"target volume {target:.12g} is infeasible: it must exceed the volume "
            f"{flat:.12g} of the region where phi = 0"
        )

    keep = mass > 0.0
    log_weights = np.log(mass[keep])
    exponent = 0.5 * int(dim) * phi[keep]
    log_target = math.log(target)

    def gap(c: float) -> float:
        return _log_volume(c, log_weights, exponent) - log_target

    if gap(0.0) == 0.0:
        return 0.0
    step = 1.0 if gap(0.0) < 0.0 else -1.0
    near, far = 0.0, step
    while gap(far) * gap(near) > 0.0:
        near, far = far, 2.0 * far
        if abs(far) > Constants.NORMALIZE_C_BOUND:
            raise NumericError(f"no bracket for the volume equation within |c| <= {Constants.NORMALIZE_C_BOUND:g}")
    low, high = sorted((near, far))
    c = brentq(gap, low, high, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=500)
    residual = abs(math.expm1(gap(c)))
    if residual > Constants.NORMALIZE_RTOL:
        raise NumericError(f"volume residual {residual:.3g} above {Constants.NORMALIZE_RTOL:g}", residual=residual)
    logger.debug("Volume normalisation: c=%.15g, residual %.3g", c, residual)
    return float(c)


def volume_residual(base_volume, weights, phi, dim: int, target: float, c: float) -> float:
    mass = np.asarray(weights, dtype=float) * np.asarray(base_volume, dtype=float)
    volume = float(np.sum(mass * np.exp(0.5 * c * int(dim) * np.asarray(phi, dtype=float))))
    return abs(volume - target) / target
