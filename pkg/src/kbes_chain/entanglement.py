"""Two-qubit concurrence, l1 coherence, and sudden-death event detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .density import DENSITY_TOL, hermitize, is_x_state
from .errors import ShapeError, StateError
from .linalg import as_matrix

ESD_TOL = 1e-9

# sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> basis
_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128
)


def _two_qubit(rho: ArrayLike):
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise ShapeError(f"two-qubit density matrix must be 4x4, got {m.shape}")
    return m


def wootters_lambdas(rho: ArrayLike) -> np.ndarray:
    """Descending square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``.

    Computed as the singular values of ``V^T (Y x Y) V`` with ``rho = V V^dag``,
    which avoids taking square roots of round-off-sized eigenvalues.
    """
    m = _two_qubit(rho)
    herm = float(np.abs(m - m.conj().T).max())
    if herm > DENSITY_TOL:
        raise StateError(f"matrix is not Hermitian (defect {herm:.3e})")
    w, u = np.linalg.eigh(hermitize(m))
    if w.min() < -DENSITY_TOL:
        raise StateError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})")
    v = u * np.sqrt(np.clip(w, 0.0, None))[np.newaxis, :]
    return np.linalg.svd(v.T @ _YY @ v, compute_uv=False)


def concurrence(rho: ArrayLike) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)`` of a two-qubit state."""
    lam = wootters_lambdas(rho)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def x_state_k(rho: ArrayLike, tol: float = 1e-9) -> float:
    """Unclamped ``2 max(K1, K2)`` of an X state; its positive part is the concurrence."""
    m = _two_qubit(rho)
    if not is_x_state(m, tol):
        raise StateError("matrix is not an X state")
    p = np.clip(np.diag(m).real, 0.0, None)
    return float(2 * max(abs(m[0, 3]) - np.sqrt(p[1] * p[2]), abs(m[1, 2]) - np.sqrt(p[0] * p[3])))


def concurrence_x(rho: ArrayLike, tol: float = 1e-9) -> float:
    """Closed-form concurrence of an X state.

    ``C = 2 max(0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44))``

    Raises
    ------
    StateError
        If an entry outside the diagonal and anti-diagonal exceeds ``tol``.
    """
    return float(min(1.0, max(0.0, x_state_k(rho, tol))))


def l1_coherence(rho: ArrayLike) -> float:
    """Sum of the moduli of all off-diagonal entries."""
    m = as_matrix(rho)
    return float(np.abs(m).sum() - np.abs(np.diag(m)).sum())


@dataclass(frozen=True)
class EsdEvent:
    """One entanglement sudden death and, if it happens, the following revival."""

    death_time: float
    revival_time: Optional[float] = None

    def __post_init__(self):
        if self.revival_time is not None and not self.death_time < self.revival_time:
            raise ValueError("revival must come after death")


def _crossing(t0, c0, t1, c1, level):
    if c1 == c0:
        return float(t1)
    return float(t0 + (level - c0) * (t1 - t0) / (c1 - c0))


def esd_events(times: Sequence[float], series: Sequence[float], tol: float = ESD_TOL) -> list[EsdEvent]:
    """Locate death/revival pairs in a concurrence time series.

    A death is a step from ``C > tol`` to ``C <= tol``; the following step back
    above ``tol`` is its revival.  Both instants are linearly interpolated to
    the level ``tol``.  A series that starts at or below ``tol`` contributes no
    death until it has first become entangled.
    """
    t = np.asarray(times, dtype=float)
    c = np.asarray(series, dtype=float)
    if t.shape != c.shape:
        raise ShapeError(f"times and series differ in length ({t.size} vs {c.size})")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")

    events = []
    death = None
    alive = bool(c[0] > tol) if c.size else False
    for i in range(1, c.size):
        now = bool(c[i] > tol)
        if alive and not now:
            death = _crossing(t[i - 1], c[i - 1], t[i], c[i], tol)
        elif not alive and now and death is not None:
            events.append(EsdEvent(death, _crossing(t[i - 1], c[i - 1], t[i], c[i], tol)))
            death = None
        alive = now
    if death is not None:
        events.append(EsdEvent(death))
    return events


def revival_peaks(times: Sequence[float], series: Sequence[float], tol: float = ESD_TOL) -> list[float]:
    """Maximum concurrence reached inside each revival window, in order."""
    c = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    peaks = []
    for ev in esd_events(t, c, tol):
        if ev.revival_time is None:
            continue
        start = np.searchsorted(t, ev.revival_time)
        stop = start
        while stop < c.size and c[stop] > tol:
            stop += 1
        peaks.append(float(c[start:stop].max()))
    return peaks
