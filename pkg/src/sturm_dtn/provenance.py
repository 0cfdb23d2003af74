"""
Eigenvalue lists that remember where every value came from.
"""
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from src.constants import Constants


@dataclass(frozen=True, order=True)
class Source:
    lambda_fiber: float
    fiber_multiplicity: int
    mu_mode: float
    mu_multiplicity: int
    branch: int

    @property
    def multiplicity(self) -> int:
        return self.fiber_multiplicity * self.mu_multiplicity


@dataclass(frozen=True)
class SpectrumEntry:
    value: float
    multiplicity: int
    sources: Tuple[Source, ...]


@dataclass(frozen=True)
class SpectrumWithProvenance:
    entries: Tuple[SpectrumEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def values(self) -> np.ndarray:
        return np.array([entry.value for entry in self.entries], dtype=float)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([entry.multiplicity for entry in self.entries], dtype=int)

    def flat_values(self) -> np.ndarray:
        """
        Eigenvalues repeated according to multiplicity.
        """
        return np.repeat(self.values, self.multiplicities)

    def count_up_to(self, bound: float) -> int:
        return int(sum(entry.multiplicity for entry in self.entries if entry.value <= bound))

    def truncated(self, bound: float) -> 'SpectrumWithProvenance':
        return SpectrumWithProvenance(tuple(entry for entry in self.entries if entry.value <= bound))

    def pairs(self) -> List[Tuple[float, Source]]:
        return [(entry.value, source) for entry in self.entries for source in entry.sources]

    def to_frame(self) -> pd.DataFrame:
        """
        One row per source: value, source multiplicity, lambda_fiber,
        mu_mode, branch.
        """
        rows = [
            {
                'value': value,
                'multiplicity': source.multiplicity,
                'lambda_fiber': source.lambda_fiber,
                'mu_mode': source.mu_mode,
                'branch': source.branch,
            }
            for value, source in self.pairs()
        ]
        return pd.DataFrame(rows, columns=Constants.SPECTRUM_COLUMNS)


def merge_eigenvalues(
    pairs: Iterable[Tuple[float, Source]],
    rtol: float = Constants.MERGE_RTOL,
    atol: float = Constants.MERGE_ATOL,
) -> SpectrumWithProvenance:
    """
    Sort (value, source) pairs by value, then lambda, then mu, then branch,
    and merge runs of values equal within tolerance into single entries.
    """
    ordered = sorted(
        ((0.0 if abs(value) <= atol else float(value), source) for value, source in pairs),
        key=lambda pair: (pair[0], pair[1].lambda_fiber, pair[1].mu_mode, pair[1].branch),
    )
    groups: List[Tuple[float, List[Source]]] = []
    for value, source in ordered:
        if groups and abs(value - groups[-1][0]) <= rtol * max(abs(value), abs(groups[-1][0])) + atol:
            groups[-1][1].append(source)
        else:
            groups.append((value, [source]))
    return SpectrumWithProvenance(tuple(
        SpectrumEntry(value, sum(source.multiplicity for source in sources), tuple(sources))
        for value, sources in groups
    ))


def combine(spectra: Sequence[SpectrumWithProvenance], **tolerances) -> SpectrumWithProvenance:
    return merge_eigenvalues((pair for spectrum in spectra for pair in spectrum.pairs()), **tolerances)
