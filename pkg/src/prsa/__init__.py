"""Phase-rectified signal averaging with asymptotic predictions and Monte Carlo checks."""

from .core import (
    HingeSet,
    PrsaResult,
    compute_prsa,
    detect_hinges,
    direct_average,
    haar_index,
    hinge_count,
    prsa_via_increments,
)
from .errors import (
    DecayError,
    DegenerateThresholdError,
    DomainError,
    EmbeddingError,
    ModelError,
    NoHingeError,
    OverhangError,
    PrsaError,
)
from .signals import (
    ArmaParams,
    CovarianceFunction,
    TimeSeries,
    TwoHarmonicParams,
    arma_autocovariance,
    sample_stationary_gaussian,
    sample_two_harmonic,
    simulate_arma,
)
from .theory_det import det_limit_coeffs, det_limit_coeffs_c0, det_limit_curve, expected_zero_rate
from .theory_stoch import clt_covariance, lln_limit, lln_limit_vector, recover_covariance_diffs

__version__ = "0.1.0"
