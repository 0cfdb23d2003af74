"""
Dense symmetric eigensolver by cyclic Jacobi rotations.

Each sweep visits every off-diagonal pair once, in the round-robin order of
a tournament schedule, so the n/2 rotations of one round touch disjoint
rows and columns and are applied together with numpy fancy indexing.
"""
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

import numpy as np

from src.constants import Constants
from src.exceptions import DomainError, NumericError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"symmetric matrix must be square, got shape {entries.shape}")
        scale = max(float(np.max(np.abs(entries))) if entries.size else 0.0, 1e-300)
        if entries.size and np.max(np.abs(entries - entries.T)) > Constants.SYMMETRY_RTOL * scale:
            raise DomainError("matrix is not symmetric within 1e-12 relative")
        object.__setattr__(self, 'entries', 0.5 * (entries + entries.T))

    @property
    def order(self) -> int:
        return self.entries.shape[0]


class Eigen(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray

    def pairs(self) -> List[Tuple[float, np.ndarray]]:
        return [(float(value), self.vectors[:, i]) for i, value in enumerate(self.values)]


def round_robin(order: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    Rounds of disjoint index pairs (p < q) covering every pair exactly once.
    """
    players = list(range(order + (order % 2)))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        p, q = [], []
        for i in range(size // 2):
            a, b = players[i], players[size - 1 - i]
            if a < order and b < order:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> int:
    apq = a[p, q]
    # entries negligible against their diagonal are left alone
    negligible = 1e-2 * np.finfo(float).eps * np.sqrt(np.abs(a[p, p] * a[q, q]))
    active = np.abs(apq) > np.maximum(negligible, 1e-300)
    if not np.any(active):
        return 0
    p, q, apq = p[active], q[active], apq[active]
    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    col_p, col_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c[:, None] * row_p - s[:, None] * row_q
    a[q, :] = s[:, None] * row_p + c[:, None] * row_q
    a[p, q] = 0.0
    a[q, p] = 0.0

    vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q
    return int(p.size)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def sym_eig(
    m,
    off_rtol: float = Constants.JACOBI_OFF_RTOL,
    max_sweeps: int = Constants.JACOBI_MAX_SWEEPS,
    residual_rtol: float = Constants.EIG_RESIDUAL_RTOL,
) -> Eigen:
    """
    Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    symmetric matrix.
    """
    matrix = m if isinstance(m, SymMatrix) else SymMatrix(np.asarray(m, dtype=float))
    original = matrix.entries
    order = matrix.order
    if order == 0:
        return Eigen(np.zeros(0), np.zeros((0, 0)))

    a = original.copy()
    v = np.eye(order)
    norm = float(np.linalg.norm(original))
    threshold = off_rtol * norm
    rounds = round_robin(order)

    sweeps = 0
    while _off_norm(a) > threshold and sweeps < max_sweeps:
        rotations = sum(_rotate(a, v, p, q) for p, q in rounds)
        sweeps += 1
        if rotations == 0:
            break

    values = np.diag(a).copy()
    ordering = np.argsort(values, kind='stable')
    values, v = values[ordering], v[:, ordering]

    residual = float(np.max(np.linalg.norm(original @ v - v * values, axis=0))) if norm > 0.0 else 0.0
    if residual > residual_rtol * max(norm, 1e-300) and norm > 0.0:
        raise NumericError(
            f"Jacobi iteration did not converge after {sweeps} sweeps (residual {residual:.3e})",
            residual=residual,
        )
    if _off_norm(a) > threshold:
        logger.warning(
            "Jacobi stopped after %d sweeps with off-diagonal norm %.3e above threshold %.3e; "
            "residual %.3e accepted", sweeps, _off_norm(a), threshold, residual,
        )
    logger.debug("Jacobi order %d converged in %d sweeps", order, sweeps)
    return Eigen(values, v)
