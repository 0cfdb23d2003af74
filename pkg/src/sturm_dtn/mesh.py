from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.constants import Constants
from src.exceptions import DomainError, ResolutionError

Interval = Tuple[float, float]


@dataclass(frozen=True)
class MeshSpec:
    """
    Element budget and grading data for meshes of [0, L].

    Half of the budget is shared equally between the segments cut out by
    `breakpoints`, the other half in proportion to segment length, so short
    profile segments of width O(eps) stay resolved as eps shrinks.
    """
    elements: int = Constants.DEFAULT_MESH_ELEMENTS
    breakpoints: Tuple[float, ...] = ()
    transitions: Tuple[Interval, ...] = ()
    min_transition_elements: int = Constants.MIN_TRANSITION_ELEMENTS

    def refined(self, factor: int = 2) -> 'MeshSpec':
        return MeshSpec(self.elements * factor, self.breakpoints, self.transitions, self.min_transition_elements)


def graded_mesh(length: float, spec: MeshSpec) -> np.ndarray:
    if not length > 0.0:
        raise DomainError(f"mesh length must be positive, got {length}")
    points = sorted({0.0, float(length), *(float(b) for b in spec.breakpoints if 0.0 < b < length)})
    segments = list(zip(points[:-1], points[1:]))
    count = len(segments)
    nodes = [np.array([0.0])]
    for a, b in segments:
        share = 0.5 * spec.elements / count + 0.5 * spec.elements * (b - a) / length
        if count == 1:
            share = spec.elements
        elements = max(int(round(share)), spec.min_transition_elements if count > 1 else 1)
        nodes.append(np.linspace(a, b, elements + 1)[1:])
    return np.concatenate(nodes)


def check_resolution(nodes: np.ndarray, transitions: Sequence[Interval], min_elements: int) -> None:
    """
    Every transition interval must hold at least `min_elements` elements.
    """
    if nodes.size - 1 < Constants.MIN_ELEMENTS:
        raise ResolutionError(
            f"mesh has {nodes.size - 1} elements; at least {Constants.MIN_ELEMENTS} are required"
        )
    slack = 1e-12 * (nodes[-1] - nodes[0])
    for a, b in transitions:
        inside = np.count_nonzero((nodes >= a - slack) & (nodes <= b + slack))
        if inside - 1 < min_elements:
            raise ResolutionError(
                f"transition interval [{a:.6g}, {b:.6g}] is covered by {max(inside - 1, 0)} elements; "
                f"at least {min_elements} are required",
                interval=(a, b),
            )
