"""
Warped metrics on M = B x F over a collar base B = Sigma x [0, L].

Three families share the same reduction to one-dimensional problems on
[0, L]; they differ only in the coefficient functions handed to the base
solver:

    mode               gradient weight w   fiber term      boundary weight
    plain_warp         h^k                 h^(k-2)         h^k
    volume_preserving  h^(2k/n)            h^(-2)          h^(k/n)
    conformal          w^(m-2)             w^(m-2)         w^(m-1)

The cross-section term is mu * w in every mode. In conformal mode the
profile is the conformal factor of w^2 (g_B + g_F) and m = n + k.
"""
from dataclasses import dataclass

import numpy as np

from src.constants import Constants
from src.exceptions import DomainError, HypothesisViolationError, UnsupportedModeError
from src.spectra_closed import ClosedSpectrum
from src.sturm_dtn.geometry import BaseGeometry

METRIC_MODES = (Constants.PLAIN_WARP, Constants.VOLUME_PRESERVING, Constants.CONFORMAL)
PROFILE_ROLES = (Constants.ROLE_WARP, Constants.ROLE_GRADIENT_WEIGHT)


@dataclass(frozen=True)
class WarpedMetricSpec:
    n: int
    k: int
    profile: object
    base: BaseGeometry
    fiber: ClosedSpectrum
    mode: str = Constants.VOLUME_PRESERVING
    profile_role: str = Constants.ROLE_WARP

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise DomainError(f"dimensions must satisfy n, k >= 1, got n={self.n}, k={self.k}")
        if self.mode not in METRIC_MODES:
            raise DomainError(f"mode must be one of {METRIC_MODES}, got {self.mode!r}")
        if self.profile_role not in PROFILE_ROLES:
            raise DomainError(f"profile_role must be one of {PROFILE_ROLES}, got {self.profile_role!r}")
        if abs(self.profile.collar_length - self.base.collar_length) > 1e-12 * self.base.collar_length:
            raise DomainError(
                f"profile collar length {self.profile.collar_length} differs from base "
                f"collar length {self.base.collar_length}"
            )

    @property
    def total_dimension(self) -> int:
        return self.n + self.k

    def log_warp(self, t):
        """
        ln h(t). With the gradient_weight role the profile stores h^(2k/n).
        """
        log_profile = self.profile.log_value(t)
        if self.profile_role == Constants.ROLE_GRADIENT_WEIGHT:
            return log_profile * self.n / (2.0 * self.k)
        return log_profile

    def warp_power(self, t, p: float):
        return np.exp(p * self.log_warp(t))

    def _exponents(self):
        n, k, m = self.n, self.k, self.total_dimension
        if self.mode == Constants.PLAIN_WARP:
            return float(k), float(k - 2), float(k)
        if self.mode == Constants.VOLUME_PRESERVING:
            return 2.0 * k / n, -2.0, k / n
        return float(m - 2), float(m - 2), float(m - 1)

    def gradient_weight(self, t):
        return self.warp_power(t, self._exponents()[0])

    def fiber_coefficient(self, t):
        return self.warp_power(t, self._exponents()[1])

    def boundary_weight(self, t: float) -> float:
        return float(self.warp_power(t, self._exponents()[2]))

    def metric_coefficients(self, t):
        """
        Factors multiplying g_B and g_F in the metric at t.
        """
        if self.mode == Constants.PLAIN_WARP:
            return np.ones_like(np.asarray(t, dtype=float)), self.warp_power(t, 2.0)
        if self.mode == Constants.VOLUME_PRESERVING:
            return self.warp_power(t, -2.0 * self.k / self.n), self.warp_power(t, 2.0)
        square = self.warp_power(t, 2.0)
        return square, square

    def validate_for_growth(self) -> None:
        if self.mode != Constants.VOLUME_PRESERVING:
            raise UnsupportedModeError(f"growth experiments need volume_preserving mode, got {self.mode}")
        if not self.n > self.k >= 1:
            raise HypothesisViolationError(
                f"growth experiments need n > k >= 1, got n={self.n}, k={self.k}"
            )


def volume_element_ratio(spec: WarpedMetricSpec, t) -> float:
    """
    Volume density of h^(-2k/n) g_B + h^2 g_F over that of g_B + g_F:
    (h^(-2k/n))^(n/2) * (h^2)^(k/2), evaluated factor by factor.
    """
    if spec.mode != Constants.VOLUME_PRESERVING:
        raise UnsupportedModeError(
            f"volume element ratio is only identically 1 in volume_preserving mode, not {spec.mode}"
        )
    n, k = spec.n, spec.k
    base_factor = spec.warp_power(t, -2.0 * k / n) ** (n / 2.0)
    fiber_factor = spec.warp_power(t, 2.0) ** (k / 2.0)
    return base_factor * fiber_factor
