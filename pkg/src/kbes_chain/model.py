"""Two-qubit XYZ Heisenberg chain with local thermal baths.

Basis order is ``|00>, |01>, |10>, |11>`` (matrix indices 0..3, i.e. the
usual rho11..rho44).  On each qubit ``sigma_minus = |1><0|`` and
``sigma_z = |0><0| - |1><1|``, so zero-temperature damping drives every qubit
into ``|1>`` and the T=0 steady state of the uncoupled chain is ``|11><11|``.
"""

from __future__ import annotations

from dataclasses import dataclass
import enum
import math
from typing import Optional
import warnings

import numpy as np

from .errors import StateError
from .kbes import DissipationChannel, Liouvillian, build_liouvillian
from .linalg import ComplexMatrix, kron

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)


class AnisotropyWarning(UserWarning):
    """Delta lies outside the XY-anisotropy range (-1, 1)."""


def on_qubit(op, which: int) -> ComplexMatrix:
    """Embed a single-qubit operator on qubit 1 or 2 of the chain."""
    if which == 1:
        return kron(op, I2)
    if which == 2:
        return kron(I2, op)
    raise ValueError(f"qubit index must be 1 or 2, got {which}")


@dataclass(frozen=True)
class SpinChainParams:
    """Physical parameters of the chain; all energies and rates in units of ``gamma``.

    ``n`` is the mean thermal occupation of each bath; emission and absorption
    rates are ``alpha = gamma (n + 1)`` and ``beta = gamma n``.  ``gamma = 0``
    is accepted and gives the closed chain, which has no unique steady state.
    ``Delta`` outside (-1, 1) only warns, since sweeps drive the product
    ``J * Delta`` directly.
    """

    B: float = 0.0
    J: float = 1.0
    Delta: float = 1.0
    Jz: float = 0.0
    gamma: float = 1.0
    n: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if not self.n >= 0:
            raise ValueError(f"n must be nonnegative, got {self.n}")
        for name in ("B", "J", "Delta", "Jz"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not -1 < self.Delta < 1:
            warnings.warn(f"anisotropy Delta={self.Delta} lies outside (-1, 1)", AnisotropyWarning, stacklevel=3)

    @property
    def alpha(self) -> float:
        return self.gamma * (self.n + 1)

    @property
    def beta(self) -> float:
        return self.gamma * self.n

    @property
    def j_delta(self) -> float:
        return self.J * self.Delta

    @classmethod
    def from_j_delta(cls, j_delta: float, J: float = 1.0, **kw) -> "SpinChainParams":
        """Build parameters from the combined product ``J * Delta``."""
        if J == 0:
            raise ValueError("J must be nonzero to realize a J*Delta product")
        return cls(J=J, Delta=j_delta / J, **kw)


class Kind(enum.Enum):
    """Which Bell-like state seeds the extended Werner-like family."""

    PHI = "phi"  # a|01> + b|10>
    PSI = "psi"  # a|00> + b|11>

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"phi": cls.PHI, "Φ": cls.PHI, "φ": cls.PHI, "psi": cls.PSI, "Ψ": cls.PSI, "ψ": cls.PSI}
        if key not in aliases:
            raise ValueError(f"unknown state kind {value!r}; use 'phi' or 'psi'")
        return aliases[key]


@dataclass(frozen=True)
class EWLParams:
    """Extended Werner-like state ``r |chi><chi| + (1 - r) I/4``.

    ``|chi>`` is ``a|01> + b|10>`` (PHI) or ``a|00> + b|11>`` (PSI) with
    ``b = b_abs * exp(i delta)``.  ``b_abs`` defaults to ``sqrt(1 - a**2)``.
    """

    kind: Kind = Kind.PHI
    r: float = 1.0
    a: float = 1 / math.sqrt(2)
    b_abs: Optional[float] = None
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if not 0 <= self.r <= 1:
            raise ValueError(f"purity r must lie in [0, 1], got {self.r}")
        if not 0 <= self.a <= 1:
            raise ValueError(f"amplitude a must lie in [0, 1], got {self.a}")
        if self.b_abs is None:
            object.__setattr__(self, "b_abs", math.sqrt(max(0.0, 1.0 - self.a**2)))
        if not 0 <= self.b_abs <= 1:
            raise ValueError(f"|b| must lie in [0, 1], got {self.b_abs}")
        if abs(self.a**2 + self.b_abs**2 - 1) > 1e-12:
            raise StateError(f"a^2 + |b|^2 = {self.a ** 2 + self.b_abs ** 2!r}, must equal 1")
        object.__setattr__(self, "delta", self.delta % (2 * math.pi))

    @property
    def b(self) -> complex:
        return self.b_abs * complex(math.cos(self.delta), math.sin(self.delta))


def xyz_hamiltonian(p: SpinChainParams) -> ComplexMatrix:
    """``B(sz1 + sz2) + J(s+1 s-2 + h.c.) + J Delta(s+1 s+2 + s-1 s-2) + Jz sz1 sz2``."""
    sp1, sm1, sz1 = (on_qubit(o, 1) for o in (SIGMA_PLUS, SIGMA_MINUS, SIGMA_Z))
    sp2, sm2, sz2 = (on_qubit(o, 2) for o in (SIGMA_PLUS, SIGMA_MINUS, SIGMA_Z))
    return (
        p.B * (sz1 + sz2)
        + p.J * (sp1 @ sm2 + sm1 @ sp2)
        + p.j_delta * (sp1 @ sp2 + sm1 @ sm2)
        + p.Jz * (sz1 @ sz2)
    )


def thermal_dissipators(p: SpinChainParams) -> list[DissipationChannel]:
    """Local thermal baths: per qubit, emission ``sigma_minus`` at rate ``2 alpha``
    and absorption ``sigma_plus`` at rate ``2 beta``."""
    channels = []
    for q in (1, 2):
        channels.append(DissipationChannel(on_qubit(SIGMA_MINUS, q), 2 * p.alpha))
        channels.append(DissipationChannel(on_qubit(SIGMA_PLUS, q), 2 * p.beta))
    return channels


def model_liouvillian(p: SpinChainParams) -> Liouvillian:
    """Full 16 x 16 generator of the damped XYZ chain."""
    return build_liouvillian(xyz_hamiltonian(p), thermal_dissipators(p))


def single_qubit_liouvillian(gamma: float = 1.0, n: float = 0.0, h=None) -> Liouvillian:
    """One thermally damped qubit with the same channel convention as the chain."""
    alpha, beta = gamma * (n + 1), gamma * n
    h = np.zeros((2, 2)) if h is None else h
    return build_liouvillian(h, [DissipationChannel(SIGMA_MINUS, 2 * alpha), DissipationChannel(SIGMA_PLUS, 2 * beta)])


def bell_like(q: EWLParams) -> np.ndarray:
    """State vector of the pure Bell-like component."""
    psi = np.zeros(4, dtype=np.complex128)
    if q.kind is Kind.PHI:
        psi[1], psi[2] = q.a, q.b
    else:
        psi[0], psi[3] = q.a, q.b
    return psi


def ewl_density(q: EWLParams) -> ComplexMatrix:
    """Density matrix of an extended Werner-like state (always an X-matrix)."""
    psi = bell_like(q)
    return q.r * np.outer(psi, psi.conj()) + (1 - q.r) / 4 * np.eye(4, dtype=np.complex128)
