import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import pinned
from prsa.errors import DecayError, DomainError, HorizonError
from prsa.signals import ArmaParams, CovarianceFunction, arma_autocovariance
from prsa.theory_stoch import (
    clt_covariance,
    conditional_increment_mean,
    hinge_probability,
    lln_limit,
    lln_limit_vector,
    recover_covariance_diffs,
    threshold_factor,
)

WHITE = CovarianceFunction.white_noise(3)


def test_white_noise_limit_exact():
    pred = lln_limit_vector(WHITE, 0.0, 2)
    root = 1 / math.sqrt(math.pi)
    assert np.allclose(pred.zeta, [0.0, -root, root, 0.0, 0.0], atol=1e-15)


def test_white_noise_limit_against_conditional_monte_carlo():
    ref = pinned.WHITE_ZETA_MC
    pred = lln_limit_vector(WHITE, 0.0, 2).zeta
    dev = np.abs(pred - np.array(ref["mean"])) / np.array(ref["stderr"])
    assert np.all(dev <= 3.5), dev


def test_conditional_increment_mean():
    assert conditional_increment_mean(1.0, 1.0) == pytest.approx(pinned.COND_MEAN_C1, rel=1e-12)
    assert conditional_increment_mean(1.0, 0.0) == pytest.approx(math.sqrt(2 / math.pi))
    assert conditional_increment_mean(4.0, 0.0) == pytest.approx(2 * math.sqrt(2 / math.pi))
    # E[w | w > c] -> c for large c, and stays finite far out
    assert conditional_increment_mean(1.0, 40.0) == pytest.approx(40.0 + 1 / 40, rel=1e-4)
    with pytest.raises(DomainError):
        conditional_increment_mean(0.0, 1.0)


@given(st.floats(-30, 60), st.floats(0.0, 5.0))
def test_threshold_factor_finite_and_increasing(c, dc):
    # beyond c ~ -45 the exact value exp(-c^2 / 4d) underflows; above, no tail underflow
    f = threshold_factor(0.7, c)
    assert np.isfinite(f) and f > 0
    assert threshold_factor(0.7, c + dc) >= f


def test_hypothesis_checks():
    with pytest.raises(DomainError):
        lln_limit(CovarianceFunction(np.array([1.0, 1.0, 0.5])), 0.0, 0)
    with pytest.raises(HorizonError):
        lln_limit(CovarianceFunction(np.array([1.0, 0.5])), 0.0, 1)
    with pytest.raises(HorizonError):
        lln_limit_vector(WHITE, 0.0, 3)
    assert hinge_probability(WHITE, 0.0) == 0.5


@given(st.floats(-0.9, 0.9), st.floats(-2, 2), st.floats(-2, 2))
def test_threshold_only_rescales(phi, c1, c2):
    cov = arma_autocovariance(ArmaParams(ar=(phi,)), 8)
    a = lln_limit_vector(cov, c1, 6).zeta
    b = lln_limit_vector(cov, c2, 6).zeta
    ratio = threshold_factor(cov(0) - cov(1), c1) / threshold_factor(cov(0) - cov(1), c2)
    assert np.allclose(a, ratio * b, rtol=1e-12, atol=1e-15)


@given(st.floats(-0.9, 0.9), st.floats(-3, 3))
def test_recovery_round_trip(phi, c):
    cov = arma_autocovariance(ArmaParams(ar=(phi,)), 12)
    pred = lln_limit_vector(cov, c, 10)
    ell = np.arange(-10, 11)
    back = recover_covariance_diffs(pred, cov(0) - cov(1))
    assert np.allclose(back, cov(ell) - cov(ell + 1), rtol=1e-12, atol=1e-14)
    assert np.allclose(recover_covariance_diffs(pred.zeta, cov(0) - cov(1), c=c), back)
    with pytest.raises(ValueError):
        recover_covariance_diffs(pred.zeta, cov(0) - cov(1))


@pytest.fixture(scope="module")
def white_clt():
    return clt_covariance(CovarianceFunction.white_noise(2), 0.0, 1, samples=400_000, seed=3)


def test_clt_covariance_against_replicate_oracle(white_clt):
    ref = pinned.WHITE_V_L1
    v00 = white_clt.entry(0, 0)
    tol = 3 * math.hypot(ref["V00_stderr"], white_clt.entry_stderr(0, 0))
    assert abs(v00 - ref["V"][1][1]) <= tol
    assert abs(v00 - ref["V"][1][1]) <= 0.25 * v00


def test_clt_covariance_structure(white_clt):
    V = white_clt.V
    assert np.allclose(V, V.T, atol=6 * white_clt.mc_stderr.max())
    assert np.all(np.linalg.eigvalsh(0.5 * (V + V.T)) > 0)
    assert white_clt.h_max == 8 and not white_clt.truncation_warning
    # windows further apart than 2L + 1 + k_max share nothing: exactly zero
    mags = white_clt.term_magnitudes()
    hs = np.arange(-8, 9)
    assert np.all(mags[np.abs(hs) > 5] == 0.0)


def test_clt_covariance_requires_decay():
    slow = arma_autocovariance(ArmaParams(ar=(0.9,)), 10)
    with pytest.raises(DecayError):
        clt_covariance(slow, 0.0, 1, samples=1000)


def test_clt_truncation_warning():
    cov = arma_autocovariance(ArmaParams(ar=(0.3,)), 14)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = clt_covariance(cov, 0.0, 1, h_max=1, samples=50_000)
    assert res.truncation_warning
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)
