import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import pinned
from prsa.errors import DegenerateThresholdError, DomainError
from prsa.theory_det import (
    DetPrediction,
    continuous_limit_coeffs,
    count_extrema,
    count_zeros,
    det_limit_coeffs,
    det_limit_coeffs_c0,
    det_limit_curve,
    discretization_coefficient_gap,
    discretized_ratio,
    expected_extrema_rate,
    expected_zero_rate,
    mc_det_limit_coeffs,
    threshold_bound,
)

REF = pinned.C0_A07_XI08


def test_c0_closed_form_against_high_precision_quadrature():
    b1, b2 = det_limit_coeffs_c0(0.7, 0.8)
    assert b1 == pytest.approx(REF["B1"], abs=1e-10)
    assert b2 == pytest.approx(REF["B2"], abs=1e-10)


def test_general_threshold_path_reduces_to_c0_form():
    pred = det_limit_coeffs(0.7, REF["xi1"], REF["xi2"], 0.0)
    assert pred.B1 == pytest.approx(REF["B1"], abs=1e-9)
    assert pred.B2 == pytest.approx(REF["B2"], abs=1e-9)


@pytest.mark.parametrize("c, key", [(0.0, "MC_A07_XI08"), (0.6, "MC_A07_XI08_C06")])
def test_quadrature_against_frozen_torus_monte_carlo(c, key):
    mc = getattr(pinned, key)
    pred = det_limit_coeffs(0.7, REF["xi1"], REF["xi2"], c)
    assert abs(pred.B1 - mc["B1"]) <= 3 * mc["se1"]
    assert abs(pred.B2 - mc["B2"]) <= 3 * mc["se2"]


def test_unit_effective_amplitude_gives_equal_coefficients():
    b1, b2 = det_limit_coeffs_c0(1.0, 1.0)
    assert b1 == pytest.approx(4 / math.pi**2, abs=1e-10)
    assert b2 == pytest.approx(4 / math.pi**2, abs=1e-10)
    # A = 1 and xi2 = 1 - xi1 give equal sines with distinct frequencies
    pred = det_limit_coeffs(1.0, 0.3, 0.7, 0.0)
    assert pred.B1 == pytest.approx(4 / math.pi**2, abs=1e-9)
    assert pred.B2 == pytest.approx(4 / math.pi**2, abs=1e-9)


def test_unit_effective_amplitude_scales_second_coefficient_by_A():
    # A xi = 1 with A = 2: B1 stays 4/pi^2, B2 = 4 A^2 xi / pi^2 = 8/pi^2
    xi2 = math.asin(0.5 * math.sin(0.3 * math.pi)) / math.pi
    pred = det_limit_coeffs(2.0, 0.3, xi2, 0.0)
    assert pred.B1 == pytest.approx(4 / math.pi**2, abs=1e-8)
    assert pred.B2 == pytest.approx(8 / math.pi**2, abs=1e-8)


def test_threshold_domain():
    bound = threshold_bound(0.7, 0.2, 0.3)
    with pytest.raises(DomainError):
        det_limit_coeffs(0.7, 0.2, 0.3, bound)
    with pytest.raises(DegenerateThresholdError):
        det_limit_coeffs(0.7, 0.2, 0.3, bound * (1 - 1e-14))
    with pytest.raises(DomainError):
        det_limit_coeffs(-1.0, 0.2, 0.3)


def test_very_negative_threshold_averages_everything():
    # every increment is a hinge, so the average of a zero-mean signal vanishes
    pred = det_limit_coeffs(0.7, 0.2, 0.3, -10.0)
    assert abs(pred.B1) < 1e-9 and abs(pred.B2) < 1e-9


@given(st.floats(0.1, 4.0), st.floats(0.05, 0.45), st.floats(0.05, 0.45), st.floats(-0.9, 0.9))
def test_coefficients_are_finite_and_bounded(A, xi1, xi2, frac):
    c = frac * threshold_bound(A, xi1, xi2)
    pred = det_limit_coeffs(A, xi1, xi2, c)
    assert np.isfinite(pred.B1) and np.isfinite(pred.B2)
    # conditional means of sin U and A sin V
    assert abs(pred.B1) <= 1 + 1e-9 and abs(pred.B2) <= A + 1e-9


def test_mc_oracle_symmetry_moment_vanishes():
    est = mc_det_limit_coeffs(0.7, 0.2, 0.3, 0.4, 200_000, 1)
    # U -> pi - U preserves the event and flips cos U
    assert abs(est.cos_moment) <= 4 * est.cos_moment_stderr + 1e-12
    with pytest.raises(ValueError):
        mc_det_limit_coeffs(0.7, 0.2, 0.3, 0.4, 100, 1)


def test_curve_shape():
    pred = DetPrediction(0.5, 0.25, 0.1, 0.3, 0.0, 1.0)
    ell = np.arange(-3, 4)
    expected = 0.5 * np.sin(np.pi * 0.1 * (2 * ell + 1)) + 0.25 * np.sin(np.pi * 0.3 * (2 * ell + 1))
    assert np.allclose(det_limit_curve(pred, ell), expected)
    assert isinstance(det_limit_curve(pred, 0), float)


def test_continuous_limit_and_discretization():
    assert continuous_limit_coeffs(0.7, 0.8) == det_limit_coeffs_c0(0.7, 0.8)
    assert discretized_ratio(0.8, 1e-4) == pytest.approx(0.8, rel=1e-7)
    gap = discretization_coefficient_gap(0.8, 1e-3, range(-50, 51))
    assert gap <= math.pi * 1e-3


def test_zero_rate_regimes():
    assert expected_zero_rate(0.5, 0.3) == 2.0
    assert expected_zero_rate(3.0, 0.5) == pytest.approx(1.0)
    assert expected_zero_rate(1.5, 0.4) == pytest.approx(pinned.ZERO_RATE_A15_XI04, rel=2e-3)
    assert expected_extrema_rate(3.0, 0.4) == pytest.approx(pinned.EXTREMA_RATE_A3_XI04, rel=2e-3)
    with pytest.raises(DomainError):
        expected_zero_rate(1.0, 1.5)


@given(st.floats(0.05, 0.95))
def test_zero_rate_continuous_across_regimes(xi):
    eps = 1e-9
    assert expected_zero_rate(1 + eps, xi) == pytest.approx(2.0, abs=1e-3)
    assert expected_zero_rate(1 / xi - eps, xi) == pytest.approx(2 * xi, abs=1e-3)


def test_counting_at_irrational_ratio():
    xi = 1 / math.sqrt(7)
    assert count_zeros(1.5, xi, 2000.0) / 2000 == pytest.approx(expected_zero_rate(1.5, xi), rel=0.01)
    assert count_extrema(3.0, xi, 2000.0) / 2000 == pytest.approx(expected_extrema_rate(3.0, xi), rel=0.01)
