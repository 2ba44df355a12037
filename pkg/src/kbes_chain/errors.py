"""Exception hierarchy shared by the solver modules."""


class KbesError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(KbesError, ValueError):
    """An operand has the wrong shape or inconsistent dimensions."""


class SingularMatrixError(KbesError):
    """A linear system is singular to working tolerance."""


class ConvergenceError(KbesError):
    """An iterative eigen-solver failed to converge."""


class DefectiveError(KbesError):
    """The eigenvector matrix is too ill-conditioned for a spectral expansion."""


class SteadyStateError(KbesError):
    """The generator has no unique zero eigenvalue.

    ``multiplicity`` is the number of eigenvalues found inside the zero
    tolerance (0 when none was found).
    """

    def __init__(self, message, multiplicity):
        super().__init__(message)
        self.multiplicity = multiplicity


class NumericalError(KbesError):
    """A computed quantity violated a numerical invariant beyond tolerance."""


class StateError(KbesError, ValueError):
    """A matrix is not a valid density matrix, or violates a structural precondition."""
