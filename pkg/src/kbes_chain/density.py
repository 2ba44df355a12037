"""Density-matrix validation helpers."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .errors import ShapeError, StateError
from .linalg import ComplexMatrix, as_matrix

DENSITY_TOL = 1e-10


class Defects(NamedTuple):
    trace_deviation: float
    hermiticity_defect: float
    min_eigenvalue: float


def hermitize(rho: ArrayLike) -> ComplexMatrix:
    """Return the Hermitian part ``(rho + rho^dag) / 2``."""
    m = as_matrix(rho)
    return 0.5 * (m + m.conj().T)


def defects(rho: ArrayLike) -> Defects:
    """Trace deviation from 1, max-entry Hermiticity defect, and smallest eigenvalue."""
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"density matrix must be square, got {m.shape}")
    herm = float(np.abs(m - m.conj().T).max(initial=0.0))
    lam = np.linalg.eigvalsh(hermitize(m))
    return Defects(float(abs(np.trace(m) - 1)), herm, float(lam.min()))


def check_density(rho: ArrayLike, tol: float = DENSITY_TOL) -> ComplexMatrix:
    """Validate a density matrix and return it as a complex array.

    Raises
    ------
    StateError
        If trace, Hermiticity or positivity is violated by more than ``tol``.
    """
    m = as_matrix(rho)
    d = defects(m)
    if d.trace_deviation > tol:
        raise StateError(f"trace deviates from 1 by {d.trace_deviation:.3e}")
    if d.hermiticity_defect > tol:
        raise StateError(f"matrix is not Hermitian (defect {d.hermiticity_defect:.3e})")
    if d.min_eigenvalue < -tol:
        raise StateError(f"matrix is not positive semidefinite (min eigenvalue {d.min_eigenvalue:.3e})")
    return m


def is_x_state(rho: ArrayLike, tol: float = 1e-9) -> bool:
    """True when every entry off the diagonal and anti-diagonal of a 4x4 matrix is below ``tol``."""
    m = as_matrix(rho)
    if m.shape != (4, 4):
        return False
    mask = np.ones((4, 4), dtype=bool)
    idx = np.arange(4)
    mask[idx, idx] = False
    mask[idx, 3 - idx] = False
    return bool(np.abs(m[mask]).max() <= tol)
