"""Limit of PRSA for the deterministic two-harmonic signal.

For ``x_m = cos(2 pi xi1 m + phi1) + A cos(2 pi xi2 m + phi2)`` with
rationally independent ``1, xi1, xi2``, the averaged window converges to

    z(l) -> B1 sin(pi xi1 (2l + 1)) + B2 sin(pi xi2 (2l + 1)),

with ``s1 = sin(pi xi1)``, ``s2 = sin(pi xi2)`` and ``(U, V)`` uniform on
the torus,

    B1 = E[sin U ; E_c] / P(E_c),     B2 = A E[sin V ; E_c] / P(E_c),
    E_c = {s1 sin U + A s2 sin V > c/2}.

The quadrature path integrates one phase out in closed form and leaves
one-dimensional integrals with arcsine weights; :func:`mc_det_limit_coeffs`
estimates the same expectations by sampling the torus directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateThresholdError, DomainError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, clip_unit, integrate_singular, make_rng

DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class DetPrediction:
    B1: float
    B2: float
    xi1: float
    xi2: float
    c: float
    A: float

    @property
    def sine_ratio(self) -> float:
        return math.sin(math.pi * self.xi2) / math.sin(math.pi * self.xi1)

    def curve(self, ell) -> np.ndarray:
        ell = np.asarray(ell, dtype=float)
        return self.B1 * np.sin(np.pi * self.xi1 * (2 * ell + 1)) + self.B2 * np.sin(
            np.pi * self.xi2 * (2 * ell + 1)
        )


def threshold_bound(A: float, xi1: float, xi2: float) -> float:
    """Largest attainable increment ``2 (sin(pi xi1) + A sin(pi xi2))``; c must stay below it."""
    return 2.0 * (math.sin(math.pi * xi1) + A * math.sin(math.pi * xi2))


def _check_params(A, xi1, xi2):
    if not A > 0:
        raise DomainError(f"A must be positive, got {A}")
    for name, xi in (("xi1", xi1), ("xi2", xi2)):
        if not 0.0 < xi < 1.0:
            raise DomainError(f"{name} must lie in (0, 1), got {xi}")


BREAK_MERGE = 1e-12


def _breakpoints(lo: float, hi: float, points) -> list[float]:
    """Panel edges for ``[lo, hi]``; kinks closer than ``BREAK_MERGE`` to an edge are dropped.

    A sliver panel next to a singular endpoint puts every substituted node
    onto the endpoint in floating point; the kink is left inside the
    neighbouring panel instead, where panel doubling absorbs it.
    """
    edges = [lo]
    for p in sorted(points):
        if edges[-1] + BREAK_MERGE < p < hi - BREAK_MERGE:
            edges.append(p)
    return [*edges, hi]


def _integrate_pieces(f, edges, spec):
    return sum(integrate_singular(f, a, b, spec) for a, b in zip(edges[:-1], edges[1:]) if b > a)


def _clipped_numerator(p: float, q: float, half_c: float, spec: QuadratureSpec) -> float:
    """``int sqrt(max(0, 1 - ((c/2 - q u) / p)^2) / (1 - u^2)) du`` over ``[-1, 1]``.

    ``p`` weights the phase being integrated out in closed form, ``q`` the
    remaining one.  The support is ``|c/2 - q u| <= p``, intersected with
    ``[-1, 1]``; outside it the integrand vanishes identically.
    """
    lo = max(-1.0, (half_c - p) / q)
    hi = min(1.0, (half_c + p) / q)
    if not hi - lo > BREAK_MERGE:
        return 0.0

    def f(u):
        a = (half_c - q * u) / p
        return np.sqrt(np.maximum(0.0, 1.0 - a * a) / (1.0 - u * u))

    return integrate_singular(f, lo, hi, spec)


def _denominator(s1: float, As2: float, half_c: float, spec: QuadratureSpec) -> float:
    """``int int 1{s1 u + A s2 v > c/2} / sqrt((1-u^2)(1-v^2)) du dv`` over the square.

    The inner ``u`` integral is ``pi/2 - arcsin(u0(v))`` with
    ``u0(v) = (c/2 - A s2 v) / s1`` clipped to [-1, 1].  The clip creates
    kinks where ``u0 = +-1``; the outer integral is split there.
    """
    kinks = [(half_c - s1) / As2, (half_c + s1) / As2]

    def f(v):
        u0 = np.clip((half_c - As2 * v) / s1, -1.0, 1.0)
        return (0.5 * np.pi - np.arcsin(u0)) / np.sqrt(1.0 - v * v)

    return _integrate_pieces(f, _breakpoints(-1.0, 1.0, kinks), spec)


def det_limit_coeffs(
    A: float, xi1: float, xi2: float, c: float = 0.0, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> DetPrediction:
    """Limit amplitudes ``B1, B2`` for an arbitrary threshold ``c``.

    Raises
    ------
    DomainError
        If ``c >= 2 (sin(pi xi1) + A sin(pi xi2))`` (no increment can exceed it).
    DegenerateThresholdError
        If the acceptance region has weight below ``1e-12``.
    """
    _check_params(A, xi1, xi2)
    bound = threshold_bound(A, xi1, xi2)
    if not c < bound:
        raise DomainError(f"threshold c={c} must be below 2[sin(pi xi1) + A sin(pi xi2)] = {bound}")
    s1 = math.sin(math.pi * xi1)
    As2 = A * math.sin(math.pi * xi2)
    half_c = 0.5 * c
    den = _denominator(s1, As2, half_c, spec)
    if den < DENOMINATOR_FLOOR:
        raise DegenerateThresholdError(f"acceptance region at c={c} has weight {den:.3g}")
    n1 = _clipped_numerator(s1, As2, half_c, spec)
    n2 = _clipped_numerator(As2, s1, half_c, spec)
    return DetPrediction(n1 / den, A * n2 / den, xi1, xi2, float(c), A)


def det_limit_coeffs_c0(A: float, xi: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """Closed-form ``c = 0`` amplitudes in terms of ``A`` and the ratio ``xi``.

    Returns ``(B1, B2)`` with

        B1 = 4/pi^2       int_0^m sqrt((1 - A^2 xi^2 u^2) / (1 - u^2)) du
        B2 = 4 A^2 xi/pi^2 int_0^m sqrt((1 - u^2) / (1 - A^2 xi^2 u^2)) du

    and ``m = min(1, 1/(A xi))``.
    """
    if not (A > 0 and xi > 0):
        raise DomainError(f"need A > 0 and xi > 0, got A={A}, xi={xi}")
    k2 = (A * xi) ** 2
    upper = min(1.0, 1.0 / (A * xi))

    def f1(u):
        return np.sqrt(np.maximum(0.0, 1.0 - k2 * u * u) / (1.0 - u * u))

    def f2(u):
        return np.sqrt(np.maximum(0.0, 1.0 - u * u) / (1.0 - k2 * u * u))

    i1 = integrate_singular(f1, 0.0, upper, spec)
    i2 = integrate_singular(f2, 0.0, upper, spec)
    scale = 4.0 / math.pi**2
    return scale * i1, scale * A * A * xi * i2


def continuous_limit_coeffs(A: float, xi: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """Amplitudes for ``f(t) = cos(2 pi t + phi1) + A cos(2 pi xi t + phi2)`` averaged on ``{f' > 0}``.

    Same formulas as the discrete ``c = 0`` case, with ``xi`` the raw
    frequency ratio; the limit curve is ``B1 sin(2 pi s) + B2 sin(2 pi xi s)``.
    """
    return det_limit_coeffs_c0(A, xi, spec)


def discretized_ratio(xi: float, eps: float) -> float:
    """Sine ratio seen by the discrete theory when the continuous signal is sampled at step ``eps``."""
    return math.sin(math.pi * xi * eps) / math.sin(math.pi * eps)


def discretization_coefficient_gap(xi: float, eps: float, ells) -> float:
    """Largest gap between continuous and discrete curve coefficients over ``ells``.

    Compares ``sin(2 pi l xi_i)`` with ``sin(pi (2l + 1) xi_i)`` for
    ``xi_1 = eps``, ``xi_2 = xi eps``; the gap is at most ``pi max(xi_1, xi_2)``.
    """
    ell = np.asarray(ells, dtype=float)
    gaps = [
        np.max(np.abs(np.sin(2 * np.pi * ell * f) - np.sin(np.pi * (2 * ell + 1) * f)))
        for f in (eps, xi * eps)
    ]
    return float(max(gaps))


def det_limit_curve(pred: DetPrediction, ell) -> float | np.ndarray:
    out = pred.curve(ell)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# Monte Carlo oracle over the torus
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class McDetEstimate:
    B1: float
    B2: float
    stderr: float
    stderr_B1: float
    stderr_B2: float
    probability: float
    cos_moment: float
    cos_moment_stderr: float
    samples: int
    antithetic: bool


def mc_det_limit_coeffs(
    A: float,
    xi1: float,
    xi2: float,
    c: float,
    samples: int,
    seed: int,
    antithetic: bool = True,
    chunk: int = 1_000_000,
) -> McDetEstimate:
    """Sample ``(U, V)`` uniformly on the torus and estimate ``B1, B2`` as conditional means.

    With ``antithetic=True`` each draw is paired with ``(-U, -V)``; the pair
    is one sample, so ``samples`` counts function evaluations in both
    modes.  Standard errors come from the delta method for a ratio of
    means.  :attr:`McDetEstimate.stderr` is the larger of the two.
    """
    if samples < 10_000:
        raise ValueError(f"need at least 10^4 samples, got {samples}")
    _check_params(A, xi1, xi2)
    s1 = math.sin(math.pi * xi1)
    As2 = A * math.sin(math.pi * xi2)
    half_c = 0.5 * c
    rng = make_rng(seed)
    draws = samples // 2 if antithetic else samples
    # running sums of per-draw quantities: a1 = sinU 1, a2 = A sinV 1, b = 1, d = cosU 1
    keys = ("a1", "a2", "b", "d")
    s = dict.fromkeys(keys, 0.0)
    ss = {k: 0.0 for k in ("a1a1", "a2a2", "bb", "a1b", "a2b", "dd")}
    done = 0
    while done < draws:
        m = min(chunk, draws - done)
        U = rng.uniform(0.0, 2 * np.pi, m)
        V = rng.uniform(0.0, 2 * np.pi, m)
        su, sv, cu = np.sin(U), np.sin(V), np.cos(U)
        g = s1 * su + As2 * sv
        ind = (g > half_c).astype(float)
        a1 = su * ind
        a2 = A * sv * ind
        d = cu * ind
        if antithetic:
            # (-U, -V): sin flips, cos is unchanged, the event becomes g < -c/2
            ind_r = (-g > half_c).astype(float)
            a1 = 0.5 * (a1 - su * ind_r)
            a2 = 0.5 * (a2 - A * sv * ind_r)
            d = 0.5 * (d + cu * ind_r)
            ind = 0.5 * (ind + ind_r)
        vals = {"a1": a1, "a2": a2, "b": ind, "d": d}
        for k in keys:
            s[k] += float(np.sum(vals[k]))
        ss["a1a1"] += float(np.dot(a1, a1))
        ss["a2a2"] += float(np.dot(a2, a2))
        ss["bb"] += float(np.dot(ind, ind))
        ss["a1b"] += float(np.dot(a1, ind))
        ss["a2b"] += float(np.dot(a2, ind))
        ss["dd"] += float(np.dot(d, d))
        done += m
    N = float(draws)
    mean = {k: s[k] / N for k in keys}
    if mean["b"] <= 0.0:
        raise DegenerateThresholdError(f"no sample satisfied the hinge condition at c={c}")

    def cov(xy, x, y):
        return ss[xy] / N - mean[x] * mean[y]

    def ratio_se(a, aa, ab):
        r = mean[a] / mean["b"]
        var = cov(aa, a, a) - 2 * r * cov(ab, a, "b") + r * r * cov("bb", "b", "b")
        return r, math.sqrt(max(var, 0.0) / N) / mean["b"]

    B1, se1 = ratio_se("a1", "a1a1", "a1b")
    B2, se2 = ratio_se("a2", "a2a2", "a2b")
    d_se = math.sqrt(max(cov("dd", "d", "d"), 0.0) / N)
    return McDetEstimate(
        B1=B1,
        B2=B2,
        stderr=max(se1, se2),
        stderr_B1=se1,
        stderr_B2=se2,
        probability=mean["b"],
        cos_moment=mean["d"],
        cos_moment_stderr=d_se,
        samples=samples,
        antithetic=antithetic,
    )


# --------------------------------------------------------------------------
# Zero and extremum counting
# --------------------------------------------------------------------------

def expected_zero_rate(A: float, xi: float) -> float:
    """Long-run zeros per unit time of ``cos(2 pi t + phi1) + A cos(2 pi xi t + phi2)``."""
    if not A > 0 or not 0.0 < xi < 1.0:
        raise DomainError(f"need A > 0 and xi in (0, 1), got A={A}, xi={xi}")
    if A <= 1.0:
        return 2.0
    if A * xi >= 1.0:
        return 2.0 * xi
    r = math.sqrt((1.0 - (A * xi) ** 2) / (1.0 - xi * xi))
    return 4.0 / math.pi * (math.asin(float(clip_unit(r / A))) + xi * math.acos(float(clip_unit(r))))


def expected_extrema_rate(A: float, xi: float) -> float:
    """Long-run extrema per unit time: the zero rate of ``f'``, i.e. with ``A xi`` in place of ``A``."""
    return expected_zero_rate(A * xi, xi)


def _sign_changes(fun, T: float, dt: float, chunk: int = 2_000_000) -> int:
    total = int(round(T / dt))
    count = 0
    prev = None
    for start in range(0, total + 1, chunk):
        t = np.arange(start, min(start + chunk, total + 1)) * dt
        s = np.signbit(fun(t))
        if prev is not None:
            count += int(prev != s[0])
        count += int(np.count_nonzero(s[1:] != s[:-1]))
        prev = s[-1]
    return count


def count_zeros(
    A: float, xi: float, T: float, dt: float = 1e-3, phi1: float = 0.3, phi2: float = 1.1
) -> int:
    """Sign changes of the sampled two-harmonic function on ``[0, T]``."""
    return _sign_changes(
        lambda t: np.cos(2 * np.pi * t + phi1) + A * np.cos(2 * np.pi * xi * t + phi2), T, dt
    )


def count_extrema(
    A: float, xi: float, T: float, dt: float = 1e-3, phi1: float = 0.3, phi2: float = 1.1
) -> int:
    """Sign changes of the derivative of the two-harmonic function on ``[0, T]``."""
    return _sign_changes(
        lambda t: np.sin(2 * np.pi * t + phi1) + A * xi * np.sin(2 * np.pi * xi * t + phi2), T, dt
    )


def count_zeros_phase_averaged(
    A: float, xi: float, T: float, strata: int = 500, dt: float = 1e-3, phi1: float = 0.3
) -> float:
    """Zeros over total time ``T`` split into ``strata`` runs with ``phi2`` on a uniform grid.

    For rational ``xi`` the trajectory is a closed curve on the torus and a
    single run counts zeros of one phase-dependent periodic orbit; sweeping
    ``phi2`` over ``2 pi (k + 1/2) / strata`` restores the torus average
    that :func:`expected_zero_rate` describes.  Returns the total count
    (a float, since each run boundary is counted once per run).
    """
    if strata < 1:
        raise ValueError(f"strata must be >= 1, got {strata}")
    span = T / strata
    total = 0
    for k in range(strata):
        total += count_zeros(A, xi, span, dt, phi1, 2 * np.pi * (k + 0.5) / strata)
    return float(total)
