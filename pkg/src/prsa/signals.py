"""Input signals: sampled two-harmonic functions and stationary Gaussian processes.

ARMA convention used throughout::

    x_t = sum_r ar[r-1] x_{t-r} + e_t + sum_j ma[j-1] e_{t-j},   e_t ~ N(0, sigma^2)

so the AR polynomial is ``1 - sum_r ar[r-1] z^r`` and the MA polynomial is
``1 + sum_j ma[j-1] z^j``.

Frequencies are floats, so the irrationality assumptions behind the
two-harmonic limit theorem can only ever hold approximately; any pair of
distinct frequencies in (0, 1) is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from .errors import EmbeddingError, ModelError
from .numerics import make_rng

MA_INF_CUTOFF = 1e-14
MAX_BURN_IN = 10_000


@dataclass(frozen=True)
class TimeSeries:
    values: np.ndarray
    origin_index: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("TimeSeries values must be one-dimensional")
        if values.size < 2:
            raise ValueError(f"TimeSeries needs at least 2 samples, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("TimeSeries values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "origin_index", int(self.origin_index))

    def __len__(self) -> int:
        return self.values.size

    @property
    def index(self) -> np.ndarray:
        return np.arange(self.origin_index, self.origin_index + self.values.size)

    def increments(self) -> np.ndarray:
        """First differences ``w_i = x_i - x_{i-1}``; entry ``k`` is ``w_{k+1}``."""
        return np.diff(self.values)


@dataclass(frozen=True)
class TwoHarmonicParams:
    A: float
    xi1: float
    xi2: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if not self.A > 0:
            raise ModelError(f"A must be positive, got {self.A}")
        for name in ("xi1", "xi2"):
            xi = getattr(self, name)
            if not 0.0 < xi < 1.0:
                raise ModelError(f"{name} must lie in (0, 1), got {xi}")
        if self.xi1 == self.xi2:
            raise ModelError("xi1 and xi2 must differ")

    @property
    def sine_ratio(self) -> float:
        """Effective ratio ``sin(pi xi2) / sin(pi xi1)`` entering the c = 0 limit."""
        return math.sin(math.pi * self.xi2) / math.sin(math.pi * self.xi1)


@dataclass(frozen=True)
class ArmaParams:
    ar: tuple[float, ...] = ()
    ma: tuple[float, ...] = ()
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ar", tuple(float(a) for a in self.ar))
        object.__setattr__(self, "ma", tuple(float(m) for m in self.ma))
        if not self.sigma > 0:
            raise ModelError(f"sigma must be positive, got {self.sigma}")
        if self.ar and self.max_inverse_root() >= 1.0:
            raise ModelError(
                f"AR polynomial for ar={self.ar} has a root on or inside the unit circle"
            )

    @property
    def p(self) -> int:
        return len(self.ar)

    @property
    def q(self) -> int:
        return len(self.ma)

    def ar_poly(self) -> np.ndarray:
        """Coefficients of ``1 - sum ar_r z^r`` in increasing powers."""
        return np.concatenate([[1.0], -np.asarray(self.ar, dtype=float)])

    def ma_poly(self) -> np.ndarray:
        return np.concatenate([[1.0], np.asarray(self.ma, dtype=float)])

    def max_inverse_root(self) -> float:
        """Largest ``1/|root|`` of the AR polynomial (0 for pure MA).

        The inverse roots are the roots of ``z^p - ar_1 z^(p-1) - ... - ar_p``,
        which avoids dividing by tiny roots of the original polynomial.
        """
        coeffs = np.concatenate([[1.0], -np.asarray(self.ar, dtype=float)])
        while coeffs.size > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        if coeffs.size == 1:
            return 0.0
        return float(np.max(np.abs(np.roots(coeffs))))

    def default_burn_in(self) -> int:
        rho = self.max_inverse_root()
        burn = 10 * (self.p + self.q + 1) / (1.0 - rho)
        return int(min(math.ceil(burn), MAX_BURN_IN))


@dataclass(frozen=True)
class CovarianceFunction:
    """Autocovariance ``C(0..k_max)``; ``C(-k) = C(k)`` and ``C(k) = 0`` past ``k_max``."""

    values: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("covariance values must be a non-empty vector")
        if not values[0] > 0:
            raise ModelError(f"C(0) must be positive, got {values[0]}")
        if np.any(np.abs(values) > values[0] * (1 + 1e-12)):
            raise ModelError("covariance violates |C(k)| <= C(0)")
        object.__setattr__(self, "values", values)

    @property
    def k_max(self) -> int:
        return self.values.size - 1

    def __call__(self, k):
        """Evaluate at integer lags (scalar or array), even extension, zero past k_max."""
        k = np.abs(np.asarray(k, dtype=int))
        padded = np.append(self.values, 0.0)
        out = padded[np.minimum(k, self.values.size)]
        return float(out) if out.ndim == 0 else out

    @classmethod
    def white_noise(cls, k_max: int, variance: float = 1.0) -> "CovarianceFunction":
        values = np.zeros(k_max + 1)
        values[0] = variance
        return cls(values, {"model": "white-noise", "variance": variance})


# --------------------------------------------------------------------------
# Deterministic signal
# --------------------------------------------------------------------------

def two_harmonic(params: TwoHarmonicParams, m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return np.cos(2 * np.pi * params.xi1 * m + params.phi1) + params.A * np.cos(
        2 * np.pi * params.xi2 * m + params.phi2
    )


def sample_two_harmonic(params: TwoHarmonicParams, m_lo: int, m_hi: int) -> TimeSeries:
    """Sample ``cos(2 pi xi1 m + phi1) + A cos(2 pi xi2 m + phi2)`` for ``m_lo <= m < m_hi``."""
    if not m_lo < m_hi:
        raise ValueError(f"need m_lo < m_hi, got {m_lo}, {m_hi}")
    return TimeSeries(two_harmonic(params, np.arange(m_lo, m_hi)), origin_index=m_lo)


# --------------------------------------------------------------------------
# ARMA
# --------------------------------------------------------------------------

def simulate_arma(
    params: ArmaParams,
    n: int,
    seed: int | np.random.Generator,
    burn_in: int | None = None,
) -> TimeSeries:
    """Simulate ``n`` samples of a Gaussian ARMA process after discarding a burn-in."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if burn_in is None:
        burn_in = params.default_burn_in()
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    eps = params.sigma * rng.standard_normal(n + burn_in)
    x = sps.lfilter(params.ma_poly(), params.ar_poly(), eps)
    return TimeSeries(x[burn_in:])


def ma_inf_weights(params: ArmaParams, cutoff: float = MA_INF_CUTOFF) -> np.ndarray:
    """Impulse response ``psi_0, psi_1, ...`` truncated once the tail drops below ``cutoff``."""
    rho = params.max_inverse_root()
    if rho == 0.0:
        return params.ma_poly().copy()
    # enough terms for rho^k to fall below the cutoff, polynomial prefactors included
    length = params.p + params.q + 1 + int(math.ceil(math.log(cutoff) / math.log(rho)))
    while True:
        impulse = np.zeros(length)
        impulse[0] = 1.0
        psi = sps.lfilter(params.ma_poly(), params.ar_poly(), impulse)
        tail = np.abs(psi[-max(params.p + params.q, 8):])
        if np.all(tail < cutoff):
            big = np.nonzero(np.abs(psi) >= cutoff)[0]
            return psi[: big[-1] + 1]
        length *= 2


def _ar_autocovariance_yw(ar: np.ndarray, sigma2: float, k_max: int) -> np.ndarray:
    """Autocovariance of a pure AR(p) by solving the Yule-Walker equations."""
    p = ar.size
    # gamma(k) - sum_r ar_r gamma(|k - r|) = sigma2 * [k == 0],  k = 0..p
    mat = np.eye(p + 1)
    for k in range(p + 1):
        for r in range(1, p + 1):
            mat[k, abs(k - r)] -= ar[r - 1]
    rhs = np.zeros(p + 1)
    rhs[0] = sigma2
    gamma = np.zeros(max(k_max, p) + 1)
    gamma[: p + 1] = np.linalg.solve(mat, rhs)
    for k in range(p + 1, gamma.size):
        gamma[k] = np.dot(ar, gamma[k - 1 :: -1][:p])
    return gamma[: k_max + 1]


def arma_autocovariance(params: ArmaParams, k_max: int) -> CovarianceFunction:
    """Exact autocovariance ``C(0..k_max)`` of a stationary ARMA process.

    Pure AR models go through Yule-Walker; everything else through the
    MA(infinity) expansion ``C(k) = sigma^2 sum_j psi_j psi_{j+k}``.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    sigma2 = params.sigma**2
    meta = {"model": "arma", "ar": list(params.ar), "ma": list(params.ma), "sigma": params.sigma}
    if params.p and not params.q:
        gamma = _ar_autocovariance_yw(np.asarray(params.ar), sigma2, k_max)
        return CovarianceFunction(gamma, {**meta, "method": "yule-walker"})
    psi = ma_inf_weights(params)
    gamma = np.zeros(k_max + 1)
    for k in range(min(k_max, psi.size - 1) + 1):
        gamma[k] = sigma2 * np.dot(psi[: psi.size - k], psi[k:])
    return CovarianceFunction(gamma, {**meta, "method": "ma-infinity"})


# --------------------------------------------------------------------------
# Circulant embedding
# --------------------------------------------------------------------------

def circulant_eigenvalues(cov: CovarianceFunction, n: int) -> tuple[np.ndarray, int]:
    """Eigenvalues of the circulant matrix embedding ``C`` on a loop of ``2 * max(n, k_max + 1)`` points."""
    half = max(n, cov.k_max + 1)
    lags = np.concatenate([np.arange(0, half + 1), np.arange(half - 1, 0, -1)])
    row = cov(lags)
    return np.fft.rfft(row).real, row.size


def sample_stationary_gaussian(
    cov: CovarianceFunction, n: int, seed: int | np.random.Generator
) -> TimeSeries:
    """Exact sample path of a centred stationary Gaussian process by circulant embedding.

    Raises
    ------
    EmbeddingError
        If the embedding has eigenvalues below ``-1e-10 * C(0)``; the usual
        cure is a longer (padded) ``n`` or a smoother covariance tail.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    lam_half, m = circulant_eigenvalues(cov, n)
    if lam_half.min() < -1e-10 * cov.values[0]:
        raise EmbeddingError(
            f"circulant embedding of size {m} has eigenvalue {lam_half.min():.3g}; "
            "increase the padding (larger n) or taper the covariance"
        )
    lam = np.concatenate([lam_half, lam_half[-2:0:-1]])
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    y = np.fft.fft(np.sqrt(np.clip(lam, 0.0, None) / m) * z)
    return TimeSeries(y.real[:n])
