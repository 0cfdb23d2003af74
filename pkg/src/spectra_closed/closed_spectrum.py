"""
Exact Laplace spectra of the closed manifolds used as fibers and as
boundary cross-sections: circles, flat 2-tori, points and explicit lists.

Spectra are stored as distinct values with multiplicities. Every spectrum
records `complete_up_to`: all eigenvalues <= that value are present.
"""
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.constants import Constants
from src.exceptions import CompletenessError, DomainError

Entry = Tuple[float, int]

CIRCLE = 'circle'
FLAT_TORUS = 'flat_torus'
EXPLICIT = 'explicit'
POINT = 'point'


@dataclass(frozen=True)
class ClosedSpectrum:
    kind: str
    params: Dict[str, float] = field(default_factory=dict)
    entries: Tuple[Entry, ...] = ()
    complete_up_to: float = math.inf

    def __post_init__(self):
        _check_entries(self.entries)

    @property
    def values(self) -> np.ndarray:
        return np.array([value for value, _ in self.entries], dtype=float)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([mult for _, mult in self.entries], dtype=int)

    @property
    def zero_multiplicity(self) -> int:
        """
        Number of connected components (multiplicity of the eigenvalue 0).
        """
        if self.entries and self.entries[0][0] == 0.0:
            return self.entries[0][1]
        return 0

    @property
    def first_nonzero(self) -> float:
        for value, _ in self.entries:
            if value > 0.0:
                return value
        raise CompletenessError(f"{self.kind} spectrum holds no non-zero eigenvalue")

    @property
    def volume(self) -> float:
        """
        Riemannian volume of the manifold; explicit lists carry it as a
        parameter when known.
        """
        if self.kind == CIRCLE:
            return self.params['length']
        if self.kind == FLAT_TORUS:
            return self.params['l1'] * self.params['l2']
        if self.kind == POINT:
            return 1.0
        if 'volume' in self.params:
            return self.params['volume']
        raise DomainError(f"volume of {self.kind} spectrum is unknown")

    def extended(self, count: int) -> 'ClosedSpectrum':
        """
        Regenerate a circle or torus spectrum with `count` distinct values.
        """
        if self.kind == CIRCLE:
            return circle_spectrum(self.params['length'], count)
        if self.kind == FLAT_TORUS:
            return flat_torus_spectrum(self.params['l1'], self.params['l2'], count)
        return self


def _check_entries(entries: Sequence[Entry]) -> None:
    previous = -math.inf
    for value, mult in entries:
        if value < 0.0:
            raise DomainError(f"negative eigenvalue {value} in closed spectrum")
        if value <= previous:
            raise DomainError("closed spectrum values must be strictly increasing")
        if int(mult) < 1:
            raise DomainError(f"multiplicity {mult} of eigenvalue {value} must be >= 1")
        previous = value


def _check_count(count: int) -> None:
    if int(count) < 1:
        raise DomainError(f"count must be >= 1, got {count}")


def circle_spectrum(length: float, count: int) -> ClosedSpectrum:
    """
    First `count` distinct eigenvalues (2 pi j / length)^2 of a circle of the
    given circumference; 0 is simple, every other value has multiplicity 2.
    """
    if not length > 0.0:
        raise DomainError(f"circle length must be positive, got {length}")
    _check_count(count)
    entries = tuple(
        ((2.0 * math.pi * j / length) ** 2, 1 if j == 0 else 2)
        for j in range(int(count))
    )
    return ClosedSpectrum(
        kind=CIRCLE,
        params={'length': float(length)},
        entries=entries,
        complete_up_to=entries[-1][0],
    )


def _commensurable_ratio(ratio: float):
    frac = Fraction(ratio).limit_denominator(10 ** 6)
    if abs(float(frac) - ratio) <= 1e-15 * ratio:
        return frac
    return None


def _torus_values(l1: float, l2: float, bound: float) -> List[Entry]:
    """
    All distinct values <= bound of (2 pi a / l1)^2 + (2 pi b / l2)^2.
    """
    k1 = (2.0 * math.pi / l1) ** 2
    k2 = (2.0 * math.pi / l2) ** 2
    a_max = int(math.floor(math.sqrt(bound / k1))) + 1
    b_max = int(math.floor(math.sqrt(bound / k2))) + 1
    a, b = np.meshgrid(np.arange(-a_max, a_max + 1), np.arange(-b_max, b_max + 1), indexing='ij')
    a2 = (a ** 2).ravel()
    b2 = (b ** 2).ravel()

    ratio = _commensurable_ratio((l1 / l2) ** 2)
    if ratio is not None:
        # value = k1 * (a^2 + b^2 * P / Q); compare the integers a^2 Q + b^2 P
        keys = a2 * ratio.denominator + b2 * ratio.numerator
        unique_keys, counts = np.unique(keys, return_counts=True)
        values = k1 * unique_keys / ratio.denominator
        keep = values <= bound * (1.0 + Constants.TORUS_MERGE_RTOL)
        return [(float(v), int(c)) for v, c in zip(values[keep], counts[keep])]

    raw = np.sort(k1 * a2 + k2 * b2)
    raw = raw[raw <= bound * (1.0 + Constants.TORUS_MERGE_RTOL)]
    merged: List[Entry] = []
    for value in raw:
        if merged and value - merged[-1][0] <= Constants.TORUS_MERGE_RTOL * max(value, 1.0):
            merged[-1] = (merged[-1][0], merged[-1][1] + 1)
        else:
            merged.append((float(value), 1))
    return merged


def flat_torus_spectrum(l1: float, l2: float, count: int) -> ClosedSpectrum:
    """
    First `count` distinct eigenvalues of the flat torus R^2 / (l1 Z x l2 Z),
    multiplicities counted over all lattice representations.
    """
    if not (l1 > 0.0 and l2 > 0.0):
        raise DomainError(f"torus side lengths must be positive, got ({l1}, {l2})")
    _check_count(count)
    bound = (2.0 * math.pi / max(l1, l2)) ** 2 * max(int(count), 2)
    while True:
        values = _torus_values(l1, l2, bound)
        if len(values) > count:
            break
        bound *= 2.0
    entries = tuple(values[:count])
    return ClosedSpectrum(
        kind=FLAT_TORUS,
        params={'l1': float(l1), 'l2': float(l2)},
        entries=entries,
        complete_up_to=entries[-1][0],
    )


def point_spectrum() -> ClosedSpectrum:
    """
    Spectrum of a point: the cross-section of an interval base.
    """
    return ClosedSpectrum(kind=POINT, entries=((0.0, 1),), complete_up_to=math.inf)


def explicit_spectrum(entries: Sequence[Entry], complete: bool = False, volume: float = None) -> ClosedSpectrum:
    if not entries:
        raise DomainError("explicit spectrum needs at least one entry")
    entries = tuple((float(value), int(mult)) for value, mult in entries)
    return ClosedSpectrum(
        kind=EXPLICIT,
        params={} if volume is None else {'volume': float(volume)},
        entries=entries,
        complete_up_to=math.inf if complete else entries[-1][0],
    )


def truncate_below(spec: ClosedSpectrum, bound: float) -> ClosedSpectrum:
    """
    All entries with value <= bound. Raises CompletenessError when the stored
    list cannot guarantee that no eigenvalue <= bound is missing.
    """
    if bound < 0.0:
        raise DomainError(f"truncation bound must be >= 0, got {bound}")
    if bound > spec.complete_up_to:
        raise CompletenessError(
            f"{spec.kind} spectrum is only known up to {spec.complete_up_to}; "
            f"cannot truncate at {bound}"
        )
    entries = tuple(entry for entry in spec.entries if entry[0] <= bound)
    return replace(spec, entries=entries, complete_up_to=bound)


def count_up_to(spec: ClosedSpectrum, bound: float) -> int:
    """
    Number of eigenvalues <= bound, counted with multiplicity.
    """
    return int(sum(mult for _, mult in truncate_below(spec, bound).entries))


def first_values(spec: ClosedSpectrum, count: int) -> np.ndarray:
    """
    First `count` eigenvalues repeated according to multiplicity.
    """
    _check_count(count)
    flat = np.repeat(spec.values, spec.multiplicities)
    if flat.size < count:
        raise CompletenessError(f"{spec.kind} spectrum holds only {flat.size} eigenvalues")
    return flat[:count]


def spectrum_from_record(record: Dict[str, object]) -> ClosedSpectrum:
    """
    Build a spectrum from a config record such as
    {kind: circle, length: 6.283, count: 64}.
    """
    kind = record.get('kind')
    count = int(record.get('count', 64))
    if kind == CIRCLE:
        return circle_spectrum(float(record['length']), count)
    if kind == FLAT_TORUS:
        return flat_torus_spectrum(float(record['l1']), float(record['l2']), count)
    if kind == POINT:
        return point_spectrum()
    if kind == EXPLICIT:
        return explicit_spectrum(
            [tuple(entry) for entry in record['entries']],
            complete=bool(record.get('complete', False)),
            volume=record.get('volume'),
        )
    raise DomainError(f"unknown closed spectrum kind {kind!r}")
