"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes, so each class says which bucket it
belongs to: usage/model problems (2), empty hinge sets (3) and violated
theoretical hypotheses (4).
"""


class PrsaError(Exception):
    """Base class for every error raised by the toolkit."""


class ModelError(PrsaError, ValueError):
    """Invalid signal model, e.g. a non-stationary AR polynomial."""


class QuadratureError(PrsaError, ArithmeticError):
    """Quadrature refinement did not converge.

    The last two iterates are kept so the caller can judge how far off
    the estimate is.
    """

    def __init__(self, message, previous, last):
        super().__init__(f"{message} (last iterates {previous!r}, {last!r})")
        self.previous = previous
        self.last = last


class DecompositionError(PrsaError, ValueError):
    """Covariance matrix is not positive semidefinite within tolerance."""


class EmbeddingError(PrsaError, ValueError):
    """Circulant embedding has negative eigenvalues; more padding is needed."""


class NoHingeError(PrsaError):
    """No admissible hinge point was found."""


class OverhangError(PrsaError, IndexError):
    """A hinge window reads outside the available samples."""


class DomainError(PrsaError, ValueError):
    """A hypothesis of a limit theorem is violated."""


class DegenerateThresholdError(DomainError):
    """The conditioning event {w > c} has (numerically) zero probability."""


class HorizonError(DomainError):
    """Covariance table is too short for the requested lags."""


class DecayError(DomainError):
    """Covariance does not decay fast enough for the CLT covariance sum."""


class InsufficientDataError(PrsaError, ValueError):
    """Too few samples or replicates for a statistical check."""
