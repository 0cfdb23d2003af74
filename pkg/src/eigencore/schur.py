"""
Discrete Dirichlet-to-Neumann matrices by Schur complement.

The interior block is eliminated with a Cholesky factorisation, on banded
storage when the block is narrow, dense otherwise.
"""
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from src.constants import Constants
from src.eigencore.jacobi import Eigen, SymMatrix, sym_eig
from src.exceptions import DomainError, NumericError

logger = logging.getLogger(__name__)

Block = Union[np.ndarray, sp.spmatrix]


@dataclass(frozen=True)
class PartitionedSystem:
    """
    Stiffness split into interior (I) and boundary (B) unknowns, with the
    diagonal boundary mass `b_bb`.
    """
    a_ii: Block
    a_ib: np.ndarray
    a_bb: np.ndarray
    b_bb: np.ndarray

    def __post_init__(self):
        b_bb = np.asarray(self.b_bb, dtype=float)
        if b_bb.ndim != 1 or np.any(b_bb <= 0.0):
            raise DomainError("boundary mass must be a vector of strictly positive entries")
        n_b = b_bb.size
        n_i = self.a_ii.shape[0]
        if self.a_bb.shape != (n_b, n_b) or self.a_ib.shape != (n_i, n_b):
            raise DomainError(
                f"inconsistent block shapes: a_ii {self.a_ii.shape}, a_ib {self.a_ib.shape}, "
                f"a_bb {self.a_bb.shape}, b_bb {b_bb.shape}"
            )
        object.__setattr__(self, 'b_bb', b_bb)

    @property
    def interior_order(self) -> int:
        return self.a_ii.shape[0]

    @property
    def boundary_order(self) -> int:
        return self.b_bb.size


def bandwidth(matrix: Block) -> int:
    if sp.issparse(matrix):
        coo = matrix.tocoo()
        return int(np.max(np.abs(coo.row - coo.col))) if coo.nnz else 0
    rows, cols = np.nonzero(matrix)
    return int(np.max(np.abs(rows - cols))) if rows.size else 0


def _upper_banded(matrix: Block, width: int) -> np.ndarray:
    order = matrix.shape[0]
    ab = np.zeros((width + 1, order))
    for offset in range(width + 1):
        diagonal = matrix.diagonal(offset) if sp.issparse(matrix) else np.diagonal(matrix, offset)
        ab[width - offset, offset:] = diagonal
    return ab


class InteriorFactor:
    """
    Cholesky factor of a symmetric positive definite interior block.
    """

    def __init__(self, a_ii: Block, banded_max_bandwidth: int = Constants.BANDED_MAX_BANDWIDTH):
        self.order = a_ii.shape[0]
        self.width = bandwidth(a_ii) if self.order else 0
        # narrow bands, or bands thin relative to the order, use banded storage
        self.banded = self.width <= banded_max_bandwidth or 8 * (self.width + 1) <= self.order
        try:
            if self.order == 0:
                self._factor = None
            elif self.banded:
                self._factor = sla.cholesky_banded(_upper_banded(a_ii, self.width), lower=False)
            else:
                dense = a_ii.toarray() if sp.issparse(a_ii) else np.asarray(a_ii, dtype=float)
                self._factor = sla.cho_factor(dense, lower=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericError(
                f"interior block of order {self.order} is not positive definite; "
                f"the interior problem is ill-posed ({exc})"
            ) from exc
        logger.debug(
            "Interior Cholesky: order %d, bandwidth %d, %s storage",
            self.order, self.width, 'banded' if self.banded else 'dense',
        )

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self.order == 0:
            return np.zeros_like(rhs, dtype=float)
        if self.banded:
            return sla.cho_solve_banded((self._factor, False), rhs)
        return sla.cho_solve(self._factor, rhs)


def schur_complement(system: PartitionedSystem, factor: InteriorFactor = None) -> np.ndarray:
    """
    A_BB - A_IB^T A_II^{-1} A_IB.
    """
    a_bb = np.asarray(system.a_bb, dtype=float)
    if system.interior_order == 0:
        return a_bb.copy()
    factor = factor or InteriorFactor(system.a_ii)
    a_ib = np.asarray(system.a_ib, dtype=float)
    return a_bb - a_ib.T @ factor.solve(a_ib)


def dtn_matrix(system: PartitionedSystem) -> SymMatrix:
    """
    B^{-1/2} (A_BB - A_IB^T A_II^{-1} A_IB) B^{-1/2}; its eigenvalues are the
    discrete Steklov eigenvalues.
    """
    scale = 1.0 / np.sqrt(system.b_bb)
    schur = schur_complement(system)
    dtn = scale[:, None] * schur * scale[None, :]
    return SymMatrix(0.5 * (dtn + dtn.T))


def dtn_eigen(system: PartitionedSystem) -> Eigen:
    """
    Discrete Steklov eigenvalues with eigenvectors mapped back to boundary
    values (columns normalised in the boundary-mass inner product).
    """
    eigen = sym_eig(dtn_matrix(system))
    return Eigen(eigen.values, eigen.vectors / np.sqrt(system.b_bb)[:, None])
