"""Dense complex linear algebra for small Hilbert and Liouville spaces.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; nothing
here mutates its inputs.  Sizes are expected to stay in the few-hundred range
(a 16-level system gives a 256 x 256 superoperator).
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConvergenceError, ShapeError, SingularMatrixError

ComplexMatrix = NDArray[np.complex128]

#: Eigenvector-matrix condition number above which a decomposition is flagged defective.
DEFECTIVE_CONDITION = 1e8

#: Reciprocal condition number below which ``solve_linear`` refuses to solve.
SINGULAR_RCOND = 1e-12

# Pade(13) numerator coefficients and the 1-norm bound under which the
# unscaled approximant is accurate to double precision (Higham 2005).
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def as_matrix(a: ArrayLike) -> ComplexMatrix:
    """Return ``a`` as a 2-D complex128 array (a copy only when needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _square(a: ArrayLike, what: str = "matrix") -> ComplexMatrix:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"{what} must be square, got shape {m.shape}")
    return m


def dagger(a: ArrayLike) -> ComplexMatrix:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """Kronecker product; entry ``(i*rB + k, j*cB + l)`` equals ``A[i, j] * B[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def matrix_exp(a: ArrayLike) -> ComplexMatrix:
    """Matrix exponential by scaling and squaring of a degree-13 Pade approximant.

    The matrix is scaled by ``2**-s`` until its 1-norm is below the Pade(13)
    accuracy bound, the approximant is evaluated, and the result is squared
    ``s`` times.
    """
    a = _square(a)
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    if n == 0:
        return ident
    norm1 = np.linalg.norm(a, 1)
    if not np.isfinite(norm1):
        raise ValueError("matrix_exp input contains non-finite entries")
    s = 0
    if norm1 > _THETA13:
        s = max(0, int(math.ceil(math.log2(norm1 / _THETA13))))
    x = a / (2.0**s)

    b = _PADE13
    x2 = x @ x
    x4 = x2 @ x2
    x6 = x4 @ x2
    u = x @ (
        x6 @ (b[13] * x6 + b[11] * x4 + b[9] * x2)
        + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * ident
    )
    v = (
        x6 @ (b[12] * x6 + b[10] * x4 + b[8] * x2)
        + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * ident
    )
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


@dataclass(frozen=True)
class EigenDecomposition:
    """Right eigensystem of a square matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
    right_eigenvectors : ndarray, shape (n, n)
        Column ``i`` belongs to ``eigenvalues[i]``; unit 2-norm, with the
        largest-magnitude component rotated onto the positive real axis.
    is_defective : bool
        True when ``cond(right_eigenvectors)`` exceeds the threshold used.
    condition : float
        Condition number of the eigenvector matrix.
    """

    eigenvalues: NDArray[np.complex128]
    right_eigenvectors: ComplexMatrix
    is_defective: bool
    condition: float


def _fix_phase(vecs: ComplexMatrix) -> ComplexMatrix:
    out = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    cols = np.arange(out.shape[1])
    # ties between equal-magnitude components resolve to the lowest index
    mags = np.round(np.abs(out), 12)
    pivot = np.argmax(mags, axis=0)
    lead = out[pivot, cols]
    return out * (np.abs(lead) / lead)[np.newaxis, :]


def eig_general(a: ArrayLike, defective_condition: float = DEFECTIVE_CONDITION) -> EigenDecomposition:
    """Full complex eigen-decomposition of a general square matrix.

    Hermitian input is routed to the Hermitian solver so that eigenvalues are
    real and eigenvectors orthonormal even inside degenerate subspaces.

    Raises
    ------
    ShapeError
        If ``a`` is not square.
    ConvergenceError
        If LAPACK reports non-convergence.
    """
    a = _square(a)
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    try:
        if np.abs(a - a.conj().T).max(initial=0.0) <= 1e-14 * scale:
            w, v = np.linalg.eigh(a)
            w = w.astype(np.complex128)
        else:
            w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigen-solver did not converge: {exc}") from exc
    v = _fix_phase(v.astype(np.complex128))
    cond = float(np.linalg.cond(v)) if v.size else 1.0
    if not np.isfinite(cond):
        cond = math.inf
    return EigenDecomposition(w, v, cond > defective_condition, cond)


def solve_linear(a: ArrayLike, b: ArrayLike) -> NDArray[np.complex128]:
    """Solve ``A x = b`` for square, well-conditioned ``A``.

    Raises
    ------
    SingularMatrixError
        If the reciprocal condition number of ``A`` is below ``SINGULAR_RCOND``.
    """
    a = _square(a)
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[0] != a.shape[0]:
        raise ShapeError(f"right-hand side has length {b.shape[0]}, expected {a.shape[0]}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or 1.0 / cond < SINGULAR_RCOND:
        raise SingularMatrixError(f"matrix is singular to tolerance (cond={cond:.3e})")
    return np.linalg.solve(a, b)
