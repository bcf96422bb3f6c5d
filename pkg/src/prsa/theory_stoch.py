"""Limits of PRSA for centred stationary Gaussian input.

With ``d = C(0) - C(1)`` the increment ``w_0 = x_0 - x_{-1}`` has variance
``2d`` and ``Cov(x_l, w_0) = C(l) - C(l+1)``; conditioning on ``w_0 > c``
gives the law-of-large-numbers limit

    zeta_l = (C(l) - C(l+1)) / sqrt(4 pi d) * exp(-c^2 / (4d)) / Q(c / sqrt(2d)).

Only the last two factors depend on ``c``, so curves for different
thresholds are proportional.  The asymptotic covariance of
``sqrt(N) (z - zeta)`` is a lag sum of covariances of
``(x_l - zeta_l) 1{w_0 > c}`` terms, estimated here term by term by Monte
Carlo over the exact finite-dimensional Gaussian law.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DecayError, DomainError, HorizonError
from .numerics import GaussianSpec, gaussian_tail, make_rng, mvn_sample, seed_label
from .signals import CovarianceFunction

DECAY_PROXY = 1e-6


@dataclass(frozen=True)
class StochPrediction:
    zeta: np.ndarray
    c: float
    L: int
    cov_source: CovarianceFunction = field(repr=False)

    @property
    def ell(self) -> np.ndarray:
        return np.arange(-self.L, self.L + 1)

    def at(self, ell: int) -> float:
        return float(self.zeta[ell + self.L])


def _increment_half_variance(C: CovarianceFunction) -> float:
    c0, c1 = C(0), C(1)
    if not c0 > 0:
        raise DomainError(f"need C(0) > 0, got {c0}")
    if not c0 > c1:
        raise DomainError(f"need C(0) > C(1), got C(0)={c0}, C(1)={c1}")
    return c0 - c1


def threshold_factor(d: float, c: float) -> float:
    """``exp(-c^2/(4d)) / (sqrt(4 pi d) Q(c/sqrt(2d)))`` without under/overflow."""
    t = c / math.sqrt(2.0 * d)
    # exp(-t^2/2) / Q(t) = 2 / erfcx(t / sqrt 2)
    return 2.0 / (math.sqrt(4.0 * math.pi * d) * float(special.erfcx(t / math.sqrt(2.0))))


def hinge_probability(C: CovarianceFunction, c: float) -> float:
    """``P(w_0 > c)`` for the increments of the process."""
    d = _increment_half_variance(C)
    return gaussian_tail(c / math.sqrt(2.0 * d))


def lln_limit(C: CovarianceFunction, c: float, ell: int) -> float:
    """Limit of ``z(ell)``; raises :class:`DomainError` unless ``C(0) > C(1)``."""
    d = _increment_half_variance(C)
    if abs(ell) + 1 > C.k_max:
        raise HorizonError(f"lag {ell} needs C up to lag {abs(ell) + 1}, table stops at {C.k_max}")
    return (C(ell) - C(ell + 1)) * threshold_factor(d, c)


def lln_limit_vector(C: CovarianceFunction, c: float, L: int) -> StochPrediction:
    if L < 0:
        raise ValueError(f"L must be >= 0, got {L}")
    if C.k_max < L + 1:
        raise HorizonError(f"L={L} needs a covariance table up to lag {L + 1}, got {C.k_max}")
    d = _increment_half_variance(C)
    ell = np.arange(-L, L + 1)
    zeta = (C(ell) - C(ell + 1)) * threshold_factor(d, c)
    return StochPrediction(zeta, float(c), int(L), C)


def recover_covariance_diffs(
    pred: StochPrediction | np.ndarray, c0_minus_c1: float, c: float | None = None
) -> np.ndarray:
    """Invert the limit formula: ``C(l) - C(l+1)`` from ``zeta_l`` and ``C(0) - C(1)``.

    ``pred`` is a :class:`StochPrediction` or a bare ``zeta`` vector, in
    which case the threshold ``c`` must be given.
    """
    if not c0_minus_c1 > 0:
        raise DomainError(f"C(0) - C(1) must be positive, got {c0_minus_c1}")
    if isinstance(pred, StochPrediction):
        zeta, c = pred.zeta, pred.c
    elif c is None:
        raise ValueError("threshold c is required when passing a bare zeta vector")
    else:
        zeta = pred
    return np.asarray(zeta, dtype=float) / threshold_factor(c0_minus_c1, c)


def conditional_increment_mean(sigma2: float, c: float) -> float:
    """``E[w | w > c]`` for ``w ~ N(0, sigma2)``: the jump between ``z(-1)`` and ``z(0)`` for a random walk."""
    if not sigma2 > 0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    sigma = math.sqrt(sigma2)
    t = c / sigma
    # sigma * phi(t) / Q(t) = sigma * sqrt(2/pi) / erfcx(t / sqrt 2)
    return sigma * math.sqrt(2.0 / math.pi) / float(special.erfcx(t / math.sqrt(2.0)))


# --------------------------------------------------------------------------
# CLT covariance
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CltCovariance:
    V: np.ndarray
    h_max: int
    mc_stderr: np.ndarray
    terms: np.ndarray = field(repr=False)
    terms_stderr: np.ndarray = field(repr=False)
    tail_term: float = 0.0
    truncation_warning: bool = False
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def L(self) -> int:
        return (self.V.shape[0] - 1) // 2

    def entry(self, ell: int, ell2: int) -> float:
        return float(self.V[ell + self.L, ell2 + self.L])

    def entry_stderr(self, ell: int, ell2: int) -> float:
        return float(self.mc_stderr[ell + self.L, ell2 + self.L])

    def term_magnitudes(self) -> np.ndarray:
        """``max_{l,l'} |term_h|`` for ``h = -h_max..h_max``."""
        return np.max(np.abs(self.terms), axis=(1, 2))


def _lag_term(C, zeta, c, L, h, samples, rng, chunk):
    """MC estimate of ``E[A_l B_l']`` with ``A_l = (x_l - zeta_l) 1{w_0 > c}``, ``B`` shifted by ``h``."""
    block0 = np.arange(-L - 1, L + 1)
    blockh = block0 + h
    idx = np.union1d(block0, blockh)
    cov = C(idx[:, None] - idx[None, :])
    pos0 = np.searchsorted(idx, block0)
    posh = np.searchsorted(idx, blockh)
    spec = GaussianSpec(np.zeros(idx.size), cov)
    k = 2 * L + 1
    s1 = np.zeros((k, k))
    s2 = np.zeros((k, k))
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        x = mvn_sample(spec, m, rng)
        x0, xh = x[:, pos0], x[:, posh]
        a = (x0[:, 1:] - zeta) * (x0[:, [L + 1]] - x0[:, [L]] > c)
        b = (xh[:, 1:] - zeta) * (xh[:, [L + 1]] - xh[:, [L]] > c)
        s1 += a.T @ b
        s2 += (a * a).T @ (b * b)
        done += m
    mean = s1 / samples
    var = np.maximum(s2 / samples - mean * mean, 0.0)
    return mean, np.sqrt(var / samples)


def clt_covariance(
    C: CovarianceFunction,
    c: float,
    L: int,
    h_max: int | None = None,
    samples: int = 200_000,
    seed: int = 0,
    chunk: int = 50_000,
) -> CltCovariance:
    """Asymptotic covariance ``V_L`` of ``sqrt(N) (z_{N,L} - zeta)``.

    The lag sum is truncated at ``|h| <= h_max`` (default ``4 k_max``).
    Lags whose two windows are more than ``k_max`` apart are exactly zero
    under the truncated covariance and are not sampled.  Lag ``h`` uses
    the generator ``make_rng(seed, h + h_max)``.

    Raises
    ------
    DecayError
        If ``|C(k_max)| >= 1e-6 C(0)``: a finite table cannot stand in for
        the rapid-decay hypothesis when its last entry is still large.
    """
    d = _increment_half_variance(C)
    if abs(C(C.k_max)) >= DECAY_PROXY * C(0):
        raise DecayError(
            f"|C(k_max)| = {abs(C(C.k_max)):.3g} is not below {DECAY_PROXY:g} * C(0); extend the table"
        )
    if h_max is None:
        h_max = 4 * C.k_max
    pred = lln_limit_vector(C, c, L)
    zeta = pred.zeta
    P = hinge_probability(C, c)
    k = 2 * L + 1
    hs = np.arange(-h_max, h_max + 1)
    terms = np.zeros((hs.size, k, k))
    terms_se = np.zeros((hs.size, k, k))
    reach = 2 * L + 1 + C.k_max
    for j, h in enumerate(hs):
        if abs(h) > reach:
            continue
        rng = make_rng(seed, int(h + h_max))
        terms[j], terms_se[j] = _lag_term(C, zeta, c, L, int(h), samples, rng, chunk)
    total = terms.sum(axis=0)
    total_se = np.sqrt(np.sum(terms_se**2, axis=0))
    edge = [0, hs.size - 1]
    tail = float(np.max(np.abs(terms[edge])))
    tail_se = float(np.max(terms_se[edge]))
    flagged = h_max < reach and tail > 3 * tail_se
    if flagged:
        warnings.warn(
            f"lag sum truncated at h_max={h_max} with last term {tail:.3g} (stderr {tail_se:.3g})",
            RuntimeWarning,
            stacklevel=2,
        )
    return CltCovariance(
        V=total / P**2,
        h_max=int(h_max),
        mc_stderr=total_se / P**2,
        terms=terms / P**2,
        terms_stderr=terms_se / P**2,
        tail_term=tail / P**2,
        truncation_warning=bool(flagged),
        metadata={
            "samples_per_lag": samples,
            "hinge_probability": P,
            "c0_minus_c1": d,
            "seeds": seed_label(seed, 0) + " .. " + seed_label(seed, 2 * h_max),
        },
    )
