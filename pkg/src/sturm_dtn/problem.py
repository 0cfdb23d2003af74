"""
Weighted one-dimensional Steklov/Neumann problems

    -(w a')' + q a = 0 on [0, L],
    w a' = sigma * beta a at Steklov ends (outward derivative),
    w a' = 0 at Neumann ends,

discretised with piecewise-linear elements: midpoint quadrature for w,
trapezoidal (lumped) quadrature for q. beta is the boundary weight.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Tuple

import numpy as np
import scipy.sparse as sp

from src.constants import Constants
from src.eigencore import Eigen, InteriorFactor, PartitionedSystem, dtn_eigen
from src.exceptions import DomainError
from src.sturm_dtn.mesh import MeshSpec, check_resolution, graded_mesh

Coefficient = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EndCondition:
    kind: str
    boundary_weight: float = 1.0

    def __post_init__(self):
        if self.kind not in (Constants.STEKLOV, Constants.NEUMANN):
            raise DomainError(f"end condition must be steklov or neumann, got {self.kind!r}")
        if self.kind == Constants.STEKLOV and not self.boundary_weight > 0.0:
            raise DomainError(f"Steklov boundary weight must be positive, got {self.boundary_weight}")

    @property
    def is_steklov(self) -> bool:
        return self.kind == Constants.STEKLOV


def steklov(boundary_weight: float = 1.0) -> EndCondition:
    return EndCondition(Constants.STEKLOV, float(boundary_weight))


def neumann() -> EndCondition:
    return EndCondition(Constants.NEUMANN)


def _constant(value: float) -> Coefficient:
    return lambda t: np.full(np.shape(t), float(value))


@dataclass(frozen=True)
class SturmProblem:
    length: float
    w: Coefficient
    q: Coefficient
    left: EndCondition = field(default_factory=steklov)
    right: EndCondition = field(default_factory=steklov)
    mesh: MeshSpec = field(default_factory=MeshSpec)

    def __post_init__(self):
        if not self.length > 0.0:
            raise DomainError(f"interval length must be positive, got {self.length}")
        if not (self.left.is_steklov or self.right.is_steklov):
            raise DomainError("at least one end must carry a Steklov condition")

    @classmethod
    def constant(cls, length: float, w: float = 1.0, q: float = 0.0, **kwargs) -> 'SturmProblem':
        return cls(length, _constant(w), _constant(q), **kwargs)

    @cached_property
    def nodes(self) -> np.ndarray:
        return graded_mesh(self.length, self.mesh)

    @property
    def boundary_nodes(self) -> Tuple[int, ...]:
        last = self.nodes.size - 1
        return tuple(
            index for index, end in ((0, self.left), (last, self.right)) if end.is_steklov
        )

    @property
    def boundary_weights(self) -> np.ndarray:
        return np.array(
            [end.boundary_weight for end in (self.left, self.right) if end.is_steklov], dtype=float
        )

    @property
    def interior_nodes(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.nodes.size), self.boundary_nodes)


@dataclass(frozen=True)
class AssembledSturm:
    problem: SturmProblem
    matrix: sp.csr_matrix
    stiffness: sp.csr_matrix
    mass: np.ndarray
    system: PartitionedSystem


def assemble_full(p: SturmProblem) -> AssembledSturm:
    nodes = p.nodes
    check_resolution(nodes, p.mesh.transitions, p.mesh.min_transition_elements)
    widths = np.diff(nodes)
    midpoints = 0.5 * (nodes[:-1] + nodes[1:])

    w_mid = np.asarray(p.w(midpoints), dtype=float)
    if np.any(w_mid <= 0.0):
        raise DomainError("gradient weight w must be positive")
    q_nodes = np.asarray(p.q(nodes), dtype=float)
    if np.any(q_nodes < 0.0):
        raise DomainError("zeroth-order coefficient q must be non-negative")

    conductance = w_mid / widths
    main = np.zeros(nodes.size)
    main[:-1] += conductance
    main[1:] += conductance
    stiffness = sp.diags([-conductance, main, -conductance], [-1, 0, 1], format='csr')

    lumped = np.zeros(nodes.size)
    lumped[:-1] += 0.5 * widths
    lumped[1:] += 0.5 * widths
    mass = q_nodes * lumped
    matrix = (stiffness + sp.diags(mass)).tocsr()

    boundary = list(p.boundary_nodes)
    interior = p.interior_nodes
    system = PartitionedSystem(
        a_ii=matrix[interior][:, interior].tocsr(),
        a_ib=matrix[interior][:, boundary].toarray(),
        a_bb=matrix[boundary][:, boundary].toarray(),
        b_bb=p.boundary_weights,
    )
    return AssembledSturm(problem=p, matrix=matrix, stiffness=stiffness, mass=mass, system=system)


def assemble(p: SturmProblem) -> PartitionedSystem:
    return assemble_full(p).system


def dtn_eigen_sturm(p: SturmProblem) -> Eigen:
    return dtn_eigen(assemble(p))


def dtn_eigenvalues(p: SturmProblem) -> np.ndarray:
    """
    One value per Steklov end, ascending.
    """
    return dtn_eigen_sturm(p).values


def harmonic_extension(p: SturmProblem, boundary_values, assembled: AssembledSturm = None) -> np.ndarray:
    """
    Nodal values minimising the discrete energy among functions with the
    given values on the Steklov nodes.
    """
    assembled = assembled or assemble_full(p)
    system = assembled.system
    g = np.asarray(boundary_values, dtype=float)
    if g.shape != (system.boundary_order,):
        raise DomainError(f"expected {system.boundary_order} boundary values, got shape {g.shape}")
    full = np.zeros(p.nodes.size)
    full[list(p.boundary_nodes)] = g
    full[p.interior_nodes] = -InteriorFactor(system.a_ii).solve(system.a_ib @ g)
    return full


def _boundary_norm(p: SturmProblem, samples: np.ndarray) -> float:
    values = samples[list(p.boundary_nodes)]
    return float(np.sum(p.boundary_weights * values ** 2))


def rayleigh_quotient(p: SturmProblem, samples, assembled: AssembledSturm = None) -> float:
    """
    f^T (K + Q) f over the boundary-weighted square sum of f at Steklov nodes.
    """
    assembled = assembled or assemble_full(p)
    f = np.asarray(samples, dtype=float)
    if f.shape != p.nodes.shape:
        raise DomainError(f"expected {p.nodes.size} nodal samples, got shape {f.shape}")
    denominator = _boundary_norm(p, f)
    if denominator <= 1e-300:
        raise DomainError("Rayleigh quotient undefined: f vanishes on every Steklov node")
    return float(f @ (assembled.matrix @ f)) / denominator


def constrained_rayleigh_quotient(p: SturmProblem, samples, assembled: AssembledSturm = None) -> float:
    """
    Quotient of f minus its boundary-weighted mean on the Steklov nodes. For
    q = 0 its minimum is the first non-zero eigenvalue.
    """
    f = np.asarray(samples, dtype=float)
    weights = p.boundary_weights
    mean = float(np.sum(weights * f[list(p.boundary_nodes)]) / np.sum(weights))
    return rayleigh_quotient(p, f - mean, assembled)
