"""
Steklov spectrum of the surface [0, L] x S^1 with metric dt^2 + h(t)^2 dtheta^2,
computed directly on a tensor grid without separating variables.

The quadratic form is the integral of h u_t^2 + h^-1 u_theta^2 over
dt dtheta. Unknowns are ordered ring by ring (theta fastest), so every
coupling lies within n_theta of the diagonal.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from src.constants import Constants
from src.eigencore import PartitionedSystem, dtn_eigen
from src.exceptions import DomainError, ResolutionError
from src.spectra_closed import circle_spectrum, point_spectrum
from src.sturm_dtn import BaseGeometry
from src.warp_profile import RawProfile, WarpedMetricSpec
from src.warped_assembler import mesh_for, steklov_spectrum_warped

logger = logging.getLogger(__name__)

Coefficient = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RevolutionGrid:
    n_t: int
    n_theta: int
    length: float
    fiber_length: float
    h: Coefficient
    left_bc: str = Constants.STEKLOV
    right_bc: str = Constants.STEKLOV

    def __post_init__(self):
        if self.n_t < Constants.MIN_AXIAL_NODES:
            raise DomainError(f"n_t must be >= {Constants.MIN_AXIAL_NODES}, got {self.n_t}")
        if self.n_theta < Constants.MIN_FIBER_NODES or self.n_theta % 2:
            raise DomainError(
                f"n_theta must be even and >= {Constants.MIN_FIBER_NODES}, got {self.n_theta}"
            )
        if not (self.length > 0.0 and self.fiber_length > 0.0):
            raise DomainError(f"lengths must be positive, got L={self.length}, fiber={self.fiber_length}")
        # ring conditions
        BaseGeometry(point_spectrum(), self.length, self.left_bc, self.right_bc)
        collar = getattr(self.h, 'collar_length', None)
        if collar is not None and abs(collar - self.length) > 1e-12 * self.length:
            raise DomainError(f"profile is defined on [0, {collar}], grid on [0, {self.length}]")
        self._check_transitions()

    def _check_transitions(self) -> None:
        intervals = getattr(self.h, 'transition_intervals', lambda: [])()
        nodes = self.t_nodes
        for a, b in intervals:
            inside = np.count_nonzero((nodes >= a) & (nodes <= b))
            if inside < Constants.MIN_TRANSITION_ELEMENTS:
                raise ResolutionError(
                    f"transition [{a:.6g}, {b:.6g}] holds {inside} axial nodes; "
                    f"at least {Constants.MIN_TRANSITION_ELEMENTS} are required",
                    interval=(a, b),
                )

    @property
    def t_nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_t)

    @property
    def dt(self) -> float:
        return self.length / (self.n_t - 1)

    @property
    def dtheta(self) -> float:
        return self.fiber_length / self.n_theta

    @property
    def steklov_rings(self) -> Tuple[int, ...]:
        return tuple(
            ring for ring, bc in ((0, self.left_bc), (self.n_t - 1, self.right_bc))
            if bc == Constants.STEKLOV
        )

    def index(self, ring: int, j: int) -> int:
        return ring * self.n_theta + (j % self.n_theta)


@dataclass(frozen=True)
class RevolutionSystem:
    grid: RevolutionGrid
    matrix: sp.csr_matrix
    boundary: np.ndarray
    interior: np.ndarray
    boundary_mass: np.ndarray
    system: PartitionedSystem


def _positive(h: Coefficient, t: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(h(t), dtype=float), t.shape)
    if np.any(values <= 0.0):
        raise DomainError("h must be positive on the grid")
    return values


def assemble_revolution(grid: RevolutionGrid) -> RevolutionSystem:
    """
    Five-point flux-form matrix of the quadratic form and the boundary mass
    h(end) dtheta on every Steklov ring.
    """
    n_t, n_th = grid.n_t, grid.n_theta
    t = grid.t_nodes
    dt, dth = grid.dt, grid.dtheta
    h_nodes = _positive(grid.h, t)
    h_mid = _positive(grid.h, 0.5 * (t[:-1] + t[1:]))

    ring = np.arange(n_t)
    j = np.arange(n_th)
    rows, cols, weights = [], [], []

    # axial edges (i, j) -- (i + 1, j)
    axial = np.repeat(h_mid * dth / dt, n_th)
    rows.append((ring[:-1, None] * n_th + j[None, :]).ravel())
    cols.append((ring[1:, None] * n_th + j[None, :]).ravel())
    weights.append(axial)

    # angular edges (i, j) -- (i, j + 1), half-width cells on the end rings
    share = np.ones(n_t)
    share[[0, -1]] = 0.5
    angular = np.repeat(share * dt / (h_nodes * dth), n_th)
    rows.append((ring[:, None] * n_th + j[None, :]).ravel())
    cols.append((ring[:, None] * n_th + ((j + 1) % n_th)[None, :]).ravel())
    weights.append(angular)

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    weights = np.concatenate(weights)
    order = n_t * n_th
    off = sp.coo_matrix((-weights, (rows, cols)), shape=(order, order))
    degree = np.bincount(rows, weights, order) + np.bincount(cols, weights, order)
    matrix = (off + off.T + sp.diags(degree)).tocsr()

    boundary = np.concatenate([np.arange(r * n_th, (r + 1) * n_th) for r in grid.steklov_rings])
    interior = np.setdiff1d(np.arange(order), boundary)
    boundary_mass = np.concatenate([np.full(n_th, h_nodes[r] * dth) for r in grid.steklov_rings])
    system = PartitionedSystem(
        a_ii=matrix[interior][:, interior].tocsr(),
        a_ib=matrix[interior][:, boundary].toarray(),
        a_bb=matrix[boundary][:, boundary].toarray(),
        b_bb=boundary_mass,
    )
    logger.debug("Revolution grid %d x %d: %d interior, %d boundary unknowns", n_t, n_th, interior.size, boundary.size)
    return RevolutionSystem(grid, matrix, boundary, interior, boundary_mass, system)


def _all_values(grid: RevolutionGrid) -> np.ndarray:
    values = dtn_eigen(assemble_revolution(grid).system).values
    floor = Constants.ZERO_RTOL * float(np.max(np.abs(values), initial=0.0))
    return np.where(np.abs(values) <= floor, 0.0, values)


def revolution_steklov(grid: RevolutionGrid, count: int) -> np.ndarray:
    """
    First `count` discrete Steklov eigenvalues, ascending.
    """
    available = grid.n_theta * len(grid.steklov_rings)
    if not 1 <= int(count) <= available:
        raise DomainError(f"count must lie in [1, {available}], got {count}")
    return _all_values(grid)[:int(count)]


def warped_spec_of(grid: RevolutionGrid, fiber_length: float = None) -> WarpedMetricSpec:
    """
    The same surface as a plain warped product with n = k = 1 over an
    interval base.
    """
    fiber_length = fiber_length or grid.fiber_length
    profile = grid.h
    if not hasattr(profile, 'log_value'):
        profile = RawProfile(func=grid.h, collar_length=grid.length, name='oracle')
    base = BaseGeometry(point_spectrum(), grid.length, grid.left_bc, grid.right_bc)
    fiber = circle_spectrum(fiber_length, grid.n_theta // 2 + 1)
    return WarpedMetricSpec(1, 1, profile, base, fiber, mode=Constants.PLAIN_WARP)


def _relative_gap(a: float, b: float, floor: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale <= floor else abs(a - b) / scale


@dataclass
class ComparisonReport:
    passed: bool
    top: float
    tol: float
    oracle_count: int
    assembler_count: int
    max_deviation: float
    pairs: List[Tuple[float, float, float]] = field(default_factory=list)
    first_unmatched: Optional[float] = None
    message: str = ''

    def to_dict(self) -> Dict[str, object]:
        return {
            'passed': self.passed,
            'top': self.top,
            'tol': self.tol,
            'oracle_count': self.oracle_count,
            'assembler_count': self.assembler_count,
            'max_deviation': self.max_deviation,
            'first_unmatched': self.first_unmatched,
            'message': self.message,
        }


def compare_with_assembler(
    grid: RevolutionGrid,
    top: float,
    tol: float,
    assembler_fiber_length: float = None,
    mesh_elements: int = Constants.DEFAULT_MESH_ELEMENTS,
) -> ComparisonReport:
    """
    Pair the sorted oracle and assembler eigenvalues <= top.

    Counts are compared below top (1 - tol); values inside the guard band
    [top (1 - tol), top (1 + tol)] may be missing from either side. Passes
    when the counts agree and every pair is within `tol` relatively.
    """
    if not top > 0.0 or not tol > 0.0:
        raise DomainError(f"top and tol must be positive, got top={top}, tol={tol}")
    spec = warped_spec_of(grid, assembler_fiber_length)
    reach = top * (1.0 + tol)
    oracle = _all_values(grid)
    oracle = oracle[oracle <= reach]
    assembled = steklov_spectrum_warped(spec, reach, mesh_for(spec, max(mesh_elements, grid.n_t - 1)))
    assembled = assembled.flat_values()

    below = top * (1.0 - tol)
    oracle_count = int(np.count_nonzero(oracle <= below))
    assembler_count = int(np.count_nonzero(assembled <= below))
    paired = min(oracle.size, assembled.size)
    floor = Constants.COMPARE_ZERO_RTOL * top
    pairs = [(float(a), float(b), _relative_gap(a, b, floor)) for a, b in zip(oracle[:paired], assembled[:paired])]
    max_deviation = max((gap for _, _, gap in pairs), default=0.0)

    first_unmatched = None
    message = 'ok'
    if oracle_count != assembler_count:
        longer = oracle if oracle_count > assembler_count else assembled
        first_unmatched = float(longer[min(oracle_count, assembler_count)])
        message = (
            f"count mismatch below {below:.6g}: oracle {oracle_count}, assembler {assembler_count}; "
            f"first unmatched value {first_unmatched:.9g}"
        )
    elif max_deviation > tol:
        worst = max(pairs, key=lambda pair: pair[2])
        first_unmatched = worst[0]
        message = f"oracle value {worst[0]:.9g} vs assembler {worst[1]:.9g}: deviation {worst[2]:.3g} > {tol:.3g}"
    report = ComparisonReport(
        passed=first_unmatched is None,
        top=float(top),
        tol=float(tol),
        oracle_count=oracle_count,
        assembler_count=assembler_count,
        max_deviation=float(max_deviation),
        pairs=pairs,
        first_unmatched=first_unmatched,
        message=message,
    )
    logger.info("Oracle comparison up to %.6g: %s", top, message)
    return report
