"""Ket-bra vectorized Lindblad solver for a damped two-qubit XYZ Heisenberg chain."""

from .analytic import (
    ClosedFormContext,
    closed_form_concurrence,
    closed_form_state,
    cmax_infinity,
    final_concurrence,
    k_m,
    maximize_final_concurrence,
    steady_state_closed,
)
from .dynamics import SpectralSolution, Trajectory, propagate, spectral_solve, spectrum, steady_state
from .entanglement import EsdEvent, concurrence, concurrence_x, esd_events, l1_coherence
from .kbes import (
    DissipationChannel,
    Liouvillian,
    build_liouvillian,
    devectorize,
    left_mult_super,
    right_mult_super,
    vectorize,
)
from .linalg import EigenDecomposition, eig_general, kron, matrix_exp, solve_linear
from .model import (
    EWLParams,
    Kind,
    SpinChainParams,
    ewl_density,
    model_liouvillian,
    thermal_dissipators,
    xyz_hamiltonian,
)

__version__ = "0.1.0"
