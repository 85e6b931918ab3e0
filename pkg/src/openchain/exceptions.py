"""Exception types raised by the solvers and scan routines."""


class OpenChainError(Exception):
    """Base class for all openchain errors."""


class NonUniqueSteadyStateError(OpenChainError):
    """The Liouvillian null space has dimension > 1; no unique stationary state."""


class SingularSystemError(OpenChainError):
    """No solution of the constrained stationary system met the residual bound."""


class SingularReducedLiouvillianError(OpenChainError):
    """The vacuum-deleted Liouvillian is not invertible (gamma_out = 0)."""


class IllConditionedEigenbasisError(OpenChainError):
    """Eigenvector matrix too ill-conditioned for a spectral evaluation."""


class DimensionCapError(OpenChainError):
    """Requested qubit-chain length exceeds the dense-Liouvillian cap."""


class SingularMatrixError(OpenChainError):
    """Green's function matrix is singular (eta = gamma = 0 on a real eigenvalue)."""


class GridTooCoarseError(OpenChainError):
    """A scanned maximum sits on the grid boundary; the grid does not bracket it.

    The computed scan is attached as ``.scan`` so callers can still inspect
    or persist the curve.
    """

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan
