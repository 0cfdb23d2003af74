"""
Radial warping functions h(t) on a collar [0, collar_length].

The plateau family takes the values 1 on [0, eps/2], eps**delta on
[eps, 2 eps] and eps**-2 from 3 eps on; ln h is joined across the two
transitions by the quintic smoothstep, so h is C^2 and ln h is monotone on
each transition. A symmetric profile is a function of min(t, L - t).
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from src.exceptions import DomainError, HypothesisViolationError

Interval = Tuple[float, float]


def smoothstep5(x):
    """
    Quintic with S(0) = 0, S(1) = 1 and vanishing first and second
    derivatives at both ends.
    """
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)


def _restore(values: np.ndarray, shape):
    if shape == ():
        return float(values[0])
    return values.reshape(shape)


class _ProfileBase:
    collar_length: float

    def _check_domain(self, t: np.ndarray) -> np.ndarray:
        slack = 1e-12 * self.collar_length
        if np.any(t < -slack) or np.any(t > self.collar_length + slack):
            raise DomainError(
                f"t must lie in [0, {self.collar_length}], got range "
                f"[{float(np.min(t))}, {float(np.max(t))}]"
            )
        return np.clip(t, 0.0, self.collar_length)

    def log_value(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)

    def value(self, t):
        return np.exp(self.log_value(t))

    def power(self, t, p: float):
        """
        h(t)**p, evaluated as exp(p ln h).
        """
        return np.exp(p * self.log_value(t))

    def transition_intervals(self) -> List[Interval]:
        return []

    def breakpoints(self) -> List[float]:
        """
        Sorted points of [0, L] where the formula of h changes.
        """
        points = {0.0, float(self.collar_length)}
        for a, b in self.transition_intervals():
            points.update((a, b))
        return sorted(points)


@dataclass(frozen=True)
class WarpProfile(_ProfileBase):
    epsilon: float
    delta: float
    collar_length: float
    symmetric: bool = False

    @property
    def near_value(self) -> float:
        return 1.0

    @property
    def mid_value(self) -> float:
        return self.epsilon ** self.delta

    @property
    def far_value(self) -> float:
        return self.epsilon ** -2

    def distance(self, t: np.ndarray) -> np.ndarray:
        if self.symmetric:
            return np.minimum(t, self.collar_length - t)
        return t

    def log_value(self, t):
        shape = np.shape(t)
        t = self._check_domain(np.atleast_1d(np.asarray(t, dtype=float)))
        s = self.distance(t)
        eps = self.epsilon
        log_mid = self.delta * math.log(eps)
        log_far = -2.0 * math.log(eps)

        out = np.full(s.shape, log_far)
        out[s <= 0.5 * eps] = 0.0
        first = (s > 0.5 * eps) & (s < eps)
        out[first] = log_mid * smoothstep5((s[first] - 0.5 * eps) / (0.5 * eps))
        out[(s >= eps) & (s <= 2.0 * eps)] = log_mid
        second = (s > 2.0 * eps) & (s < 3.0 * eps)
        out[second] = log_mid + (log_far - log_mid) * smoothstep5((s[second] - 2.0 * eps) / eps)
        return _restore(out, shape)

    def value(self, t):
        # plateaus return the stored constants exactly
        shape = np.shape(t)
        t = self._check_domain(np.atleast_1d(np.asarray(t, dtype=float)))
        out = np.exp(self.log_value(t))
        s = self.distance(t)
        eps = self.epsilon
        out[s <= 0.5 * eps] = self.near_value
        out[(s >= eps) & (s <= 2.0 * eps)] = self.mid_value
        out[s >= 3.0 * eps] = self.far_value
        return _restore(out, shape)

    def transition_intervals(self) -> List[Interval]:
        eps, length = self.epsilon, self.collar_length
        intervals = [(0.5 * eps, eps), (2.0 * eps, 3.0 * eps)]
        if self.symmetric:
            intervals += [(length - 3.0 * eps, length - 2.0 * eps), (length - eps, length - 0.5 * eps)]
        return intervals

    def breakpoints(self) -> List[float]:
        eps, length = self.epsilon, self.collar_length
        points = {0.0, 0.5 * eps, eps, 2.0 * eps, 3.0 * eps, length}
        if self.symmetric:
            points.update(length - s for s in (0.5 * eps, eps, 2.0 * eps, 3.0 * eps))
        return sorted(points)


@dataclass(frozen=True)
class RawProfile(_ProfileBase):
    """
    Arbitrary positive coefficient function of t; no plateau structure.
    """
    func: Callable[[np.ndarray], np.ndarray]
    collar_length: float
    name: str = 'raw'
    extra_breakpoints: Tuple[float, ...] = ()

    def log_value(self, t):
        shape = np.shape(t)
        t = self._check_domain(np.atleast_1d(np.asarray(t, dtype=float)))
        values = np.broadcast_to(np.asarray(self.func(t), dtype=float), t.shape)
        if np.any(values <= 0.0):
            raise DomainError(f"profile {self.name} must be positive on [0, {self.collar_length}]")
        out = np.log(values)
        return _restore(out, shape)

    def breakpoints(self) -> List[float]:
        return sorted({0.0, float(self.collar_length), *self.extra_breakpoints})


def constant_profile(collar_length: float, value: float = 1.0) -> RawProfile:
    if not value > 0.0:
        raise DomainError(f"constant profile value must be positive, got {value}")
    return RawProfile(
        func=lambda t: np.full(np.shape(t), value),
        collar_length=float(collar_length),
        name=f'constant({value})',
    )


def build_profile(epsilon: float, delta: float, collar_length: float, symmetric: bool = False) -> WarpProfile:
    """
    Plateau profile h_{eps,delta} on [0, collar_length].
    """
    if not collar_length > 0.0:
        raise DomainError(f"collar_length must be positive, got {collar_length}")
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if not 6.0 * epsilon < collar_length:
        raise HypothesisViolationError(
            f"epsilon = {epsilon} must satisfy epsilon < collar_length / 6 = {collar_length / 6.0}"
        )
    return WarpProfile(
        epsilon=float(epsilon),
        delta=float(delta),
        collar_length=float(collar_length),
        symmetric=bool(symmetric),
    )


def eval_profile(profile: _ProfileBase, t):
    return profile.value(t)


def eval_power(profile: _ProfileBase, t, p: float):
    return profile.power(t, p)


def profile_record(profile: WarpProfile) -> Dict[str, object]:
    return {
        'epsilon': profile.epsilon,
        'delta': profile.delta,
        'collar_length': profile.collar_length,
        'symmetric': profile.symmetric,
    }


def profile_from_record(record: Dict[str, object]) -> WarpProfile:
    unknown = set(record) - {'epsilon', 'delta', 'collar_length', 'symmetric'}
    if unknown:
        raise DomainError(f"unknown profile fields {sorted(unknown)}")
    return build_profile(
        float(record['epsilon']),
        float(record['delta']),
        float(record['collar_length']),
        bool(record.get('symmetric', False)),
    )


def max_coefficient_ratio(first: Sequence[float], second: Sequence[float]) -> float:
    """
    Smallest C >= 1 with 1/C <= first/second <= C pointwise.
    """
    ratio = np.asarray(first, dtype=float) / np.asarray(second, dtype=float)
    return float(max(1.0, np.max(ratio), np.max(1.0 / ratio)))
