"""Time evolution, spectra and steady states of a vectorized Lindblad generator."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .density import DENSITY_TOL, hermitize
from .entanglement import concurrence, l1_coherence
from .errors import DefectiveError, NumericalError, ShapeError, SteadyStateError
from .kbes import Liouvillian, devectorize, vectorize
from .linalg import ComplexMatrix, as_matrix, eig_general, matrix_exp, solve_linear

#: Eigenvalues with modulus at or below this count as the stationary mode.
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class Trajectory:
    """States sampled at increasing times, with the usual two-qubit read-outs."""

    times: NDArray[np.float64]
    states: tuple[ComplexMatrix, ...] = field(repr=False)

    def __len__(self):
        return len(self.times)

    @cached_property
    def concurrence(self) -> NDArray[np.float64]:
        return np.array([concurrence(s) for s in self.states])

    @cached_property
    def l1_coherence(self) -> NDArray[np.float64]:
        return np.array([l1_coherence(s) for s in self.states])

    @property
    def populations(self) -> NDArray[np.float64]:
        """Array of shape (len(times), N) holding the diagonals."""
        return np.array([np.diag(s).real for s in self.states])

    def element(self, i: int, j: int) -> NDArray[np.complex128]:
        """Time series of the matrix entry ``(i, j)`` (zero-based)."""
        return np.array([s[i, j] for s in self.states])


def _check_times(times) -> NDArray[np.float64]:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1:
        raise ShapeError("times must be one-dimensional")
    if np.any(t < 0):
        raise ValueError("times must be nonnegative")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    return t


def _check_dims(f: Liouvillian, rho0: ArrayLike) -> ComplexMatrix:
    rho = as_matrix(rho0)
    if rho.shape != (f.dim_hilbert, f.dim_hilbert):
        raise ShapeError(f"state of shape {rho.shape} does not fit a {f.dim_hilbert}-level generator")
    return rho


def evolve(f: Liouvillian, rho0: ArrayLike, t: float) -> ComplexMatrix:
    """``devectorize(exp(F t) vectorize(rho0))`` without any post-processing."""
    rho = _check_dims(f, rho0)
    if t == 0:
        return rho.copy()
    return devectorize(matrix_exp(f.matrix * t) @ vectorize(rho))


def propagate(f: Liouvillian, rho0: ArrayLike, times: Sequence[float]) -> Trajectory:
    """Evolve ``rho0`` with the full propagator ``exp(F t)`` at each requested time.

    Each output state is replaced by its Hermitian part; a correction larger
    than 1e-10 (max entry) raises :class:`NumericalError`.
    """
    t = _check_times(times)
    rho = _check_dims(f, rho0)
    v0 = vectorize(rho)
    states = []
    for ti in t:
        s = rho.copy() if ti == 0 else devectorize(matrix_exp(f.matrix * ti) @ v0)
        h = hermitize(s)
        fix = float(np.abs(h - s).max())
        if fix > DENSITY_TOL:
            raise NumericalError(f"Hermiticity drift {fix:.3e} at t={ti}")
        states.append(h)
    return Trajectory(t, tuple(states))


def spectrum(f: Liouvillian) -> NDArray[np.complex128]:
    """All eigenvalues, by descending real part and then ascending imaginary part."""
    w = eig_general(f.matrix).eigenvalues
    # round the keys so that round-off cannot reorder equal real parts
    order = np.lexsort((np.round(w.imag, 9), -np.round(w.real, 9)))
    return w[order]


@dataclass(frozen=True)
class SpectralSolution:
    """Mode expansion ``|rho(t)> = sum_i C_i exp(lambda_i t) |phi_i>``."""

    eigenvalues: NDArray[np.complex128]
    modes: ComplexMatrix = field(repr=False)
    coefficients: NDArray[np.complex128]

    def vector_at(self, t: float) -> NDArray[np.complex128]:
        return self.modes @ (self.coefficients * np.exp(self.eigenvalues * t))

    def at(self, t: float) -> ComplexMatrix:
        """Density matrix at time ``t``."""
        return devectorize(self.vector_at(t))


def spectral_solve(f: Liouvillian, rho0: ArrayLike) -> SpectralSolution:
    """Expand ``rho0`` in the right eigenvectors of ``F``.

    Raises
    ------
    DefectiveError
        If the eigenvector matrix is numerically singular; use :func:`propagate`.
    """
    rho = _check_dims(f, rho0)
    dec = eig_general(f.matrix)
    if dec.is_defective:
        raise DefectiveError(f"generator is numerically defective (cond={dec.condition:.3e})")
    c = solve_linear(dec.right_eigenvectors, vectorize(rho))
    return SpectralSolution(dec.eigenvalues, dec.right_eigenvectors, c)


def steady_state(f: Liouvillian, zero_tol: float = ZERO_TOL) -> ComplexMatrix:
    """Unit-trace density matrix spanning the null space of ``F``.

    Raises
    ------
    SteadyStateError
        If the number of eigenvalues with modulus below ``zero_tol`` is not
        exactly one; ``multiplicity`` carries the count.
    """
    dec = eig_general(f.matrix)
    zero = np.flatnonzero(np.abs(dec.eigenvalues) <= zero_tol)
    if zero.size != 1:
        what = "no zero eigenvalue" if zero.size == 0 else f"zero eigenvalue with multiplicity {zero.size}"
        raise SteadyStateError(f"generator has {what}; steady state is not unique", int(zero.size))
    rho = devectorize(dec.right_eigenvectors[:, zero[0]])
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        raise NumericalError("null vector is traceless and cannot be normalized")
    rho = hermitize(rho / tr)
    resid = float(np.linalg.norm(f.matrix @ vectorize(rho)))
    if resid > 1e-9:
        raise NumericalError(f"steady-state residual {resid:.3e} exceeds 1e-9")
    return rho
