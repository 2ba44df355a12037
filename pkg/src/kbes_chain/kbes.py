"""Ket-bra vectorization and Liouvillian assembly.

A density matrix ``rho = sum rho[m, n] |m><n|`` is mapped onto the vector
``sum rho[m, n] |m, n~>`` of the doubled space, stored with component
``m*N + n`` holding ``rho[m, n]`` (row-major).  With that ordering

    A rho   ->  kron(A, I)   @ vec(rho)
    rho B   ->  kron(I, B.T) @ vec(rho)

and any Lindblad generator becomes an ``N**2 x N**2`` matrix acting on
``vec(rho)``, so that ``d|rho>/dt = F |rho>`` is an ordinary linear ODE.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Iterable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ShapeError, StateError
from .linalg import ComplexMatrix, as_matrix, dagger, kron

HERMITIAN_TOL = 1e-12


def vectorize(rho: ArrayLike) -> NDArray[np.complex128]:
    """Flatten an ``N x N`` operator into its ket-bra vector of length ``N**2``."""
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"can only vectorize square matrices, got {m.shape}")
    return m.reshape(-1).copy()


def devectorize(v: ArrayLike) -> ComplexMatrix:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise ShapeError(f"vector length {v.size} is not a perfect square")
    return v.reshape(n, n).copy()


def left_mult_super(a: ArrayLike) -> ComplexMatrix:
    """Superoperator of ``rho -> A rho``."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"operator must be square, got {a.shape}")
    return kron(a, np.eye(a.shape[0]))


def right_mult_super(b: ArrayLike) -> ComplexMatrix:
    """Superoperator of ``rho -> rho B``."""
    b = as_matrix(b)
    if b.shape[0] != b.shape[1]:
        raise ShapeError(f"operator must be square, got {b.shape}")
    return kron(np.eye(b.shape[0]), b.T)


def sandwich_super(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """Superoperator of ``rho -> A rho B``."""
    return kron(a, as_matrix(b).T)


@dataclass(frozen=True)
class DissipationChannel:
    """One term ``h (L_n rho L_m^dag - 1/2 {L_m^dag L_n, rho})`` of a Lindblad generator.

    ``co_operator`` defaults to ``jump_operator``, which is the usual diagonal
    channel ``L rho L^dag - 1/2 {L^dag L, rho}`` with rate ``weight``.
    """

    jump_operator: ComplexMatrix
    weight: float
    co_operator: Optional[ComplexMatrix] = None

    def __post_init__(self):
        object.__setattr__(self, "jump_operator", as_matrix(self.jump_operator))
        if self.co_operator is None:
            object.__setattr__(self, "co_operator", self.jump_operator)
        else:
            object.__setattr__(self, "co_operator", as_matrix(self.co_operator))
        if self.jump_operator.shape != self.co_operator.shape:
            raise ShapeError("jump and co-operator shapes differ")
        if not self.weight >= 0:
            raise ValueError(f"channel weight must be nonnegative, got {self.weight}")


@dataclass(frozen=True)
class Liouvillian:
    """Vectorized Lindblad generator.

    ``matrix`` acts on ``vectorize(rho)`` for a ``dim_hilbert``-level system.
    """

    dim_hilbert: int
    matrix: ComplexMatrix = field(repr=False)
    ordering: str = "row-major"

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim_hilbert**2, self.dim_hilbert**2):
            raise ShapeError(f"Liouvillian of a {self.dim_hilbert}-level system must be "
                             f"{self.dim_hilbert ** 2}x{self.dim_hilbert ** 2}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, rho: ArrayLike) -> ComplexMatrix:
        """Return ``d rho / dt`` for the given operator."""
        return devectorize(self.matrix @ vectorize(rho))


def build_liouvillian(h: ArrayLike, channels: Iterable[DissipationChannel] = ()) -> Liouvillian:
    """Assemble ``F = -i(H x I - I x H^T) + sum_k h_k D_k`` in the row-major ordering.

    Parameters
    ----------
    h : (N, N) array_like
        Hermitian Hamiltonian (hbar = 1).
    channels : iterable of DissipationChannel
        Dissipative terms; each must act on the same ``N``-level space.
    """
    h = as_matrix(h)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ShapeError(f"Hamiltonian must be square, got {h.shape}")
    scale = max(1.0, np.abs(h).max(initial=0.0))
    if np.abs(h - dagger(h)).max(initial=0.0) > HERMITIAN_TOL * scale:
        raise StateError("Hamiltonian is not Hermitian")

    f = -1j * (left_mult_super(h) - right_mult_super(h))
    for ch in channels:
        ln, lm = ch.jump_operator, ch.co_operator
        if ln.shape != (n, n):
            raise ShapeError(f"channel operator shape {ln.shape} does not match Hamiltonian {h.shape}")
        if ch.weight == 0:
            continue
        anti = dagger(lm) @ ln
        f = f + ch.weight * (
            kron(ln, lm.conj()) - 0.5 * left_mult_super(anti) - 0.5 * right_mult_super(anti)
        )
    return Liouvillian(n, f)
