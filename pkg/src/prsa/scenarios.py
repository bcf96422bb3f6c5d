"""End-to-end verification scenarios behind ``prsa verify``.

Each scenario builds its signal from fixed seeds, runs PRSA, compares
with the matching prediction and returns a :class:`ScenarioReport` whose
checks carry the tolerances of the acceptance table.  Keyword arguments
scale a scenario up (longer series, more replicates) without changing
its tolerances.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import compute_prsa, direct_average, prsa_via_increments
from .harness import (
    NORMALITY_TEST,
    ExperimentSpec,
    compare_curves,
    consecutive_increments,
    normality_check,
    normalized_by_center,
    pairwise_max_disagreement,
    random_walk,
    run_replicates,
    variance_scaling_check,
)
from .numerics import make_rng, seed_label
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
from .theory_det import (
    count_zeros,
    count_zeros_phase_averaged,
    det_limit_coeffs,
    det_limit_curve,
    expected_zero_rate,
    mc_det_limit_coeffs,
)
from .theory_stoch import (
    clt_covariance,
    conditional_increment_mean,
    lln_limit_vector,
    recover_covariance_diffs,
)

DET_PARAMS = TwoHarmonicParams(0.7, math.sqrt(2) / 8, math.sqrt(3) / 4, 0.3, 1.1)
ARMA_X2 = ArmaParams(ar=(0.01, 0.15), ma=(-0.15,), sigma=1.0)


@dataclass(frozen=True)
class Check:
    metric: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<="

    def line(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        return f"{mark:4s} {self.metric} = {self.value:.6g} ({self.relation} {self.tolerance:g})"


def _upper(metric: str, value: float, tol: float) -> Check:
    return Check(metric, float(value), tol, bool(value <= tol))


def _within(metric: str, value: float, lo: float, hi: float) -> Check:
    return Check(metric, float(value), hi, bool(lo <= value <= hi), relation=f"in [{lo:g}, {hi:g}], hi")


def _lower(metric: str, value: float, tol: float) -> Check:
    return Check(metric, float(value), tol, bool(value >= tol), relation=">=")


@dataclass
class ScenarioReport:
    name: str
    spec: dict
    checks: list[Check]
    predicted: list[float] = field(default_factory=list)
    empirical: list[float] = field(default_factory=list)
    per_ell_errors: list[float] = field(default_factory=list)
    max_abs_error: float | None = None
    rmse: float | None = None
    scaling: dict | None = None
    normality: dict | None = None
    seeds: list[str] = field(default_factory=list)
    runtime_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def failing(self) -> list[Check]:
        return [ch for ch in self.checks if not ch.passed]

    def attach_curve(self, empirical, predicted) -> None:
        rep = compare_curves(empirical, predicted)
        self.predicted = rep.predicted.tolist()
        self.empirical = rep.empirical.tolist()
        self.per_ell_errors = rep.per_ell_errors.tolist()
        self.max_abs_error = rep.max_abs_error
        self.rmse = rep.rmse

    def to_dict(self) -> dict:
        return {
            "scenario": self.name,
            "passed": self.passed,
            "spec": self.spec,
            "predicted": self.predicted,
            "empirical": self.empirical,
            "per_ell_errors": self.per_ell_errors,
            "max_abs_error": self.max_abs_error,
            "rmse": self.rmse,
            "scaling": self.scaling,
            "normality": self.normality,
            "seeds": self.seeds,
            "checks": [ch.__dict__ for ch in self.checks],
            "runtime_s": self.runtime_s,
        }


def _timed(fn: Callable[..., ScenarioReport]) -> Callable[..., ScenarioReport]:
    @functools.wraps(fn)
    def wrapper(**kwargs) -> ScenarioReport:
        t0 = time.perf_counter()
        rep = fn(**kwargs)
        rep.runtime_s = time.perf_counter() - t0
        return rep

    return wrapper


# --------------------------------------------------------------------------
# Deterministic model
# --------------------------------------------------------------------------

@_timed
def det_two_harmonic(n: int = 1_000_000, L: int = 20, c: float = 0.0, tol: float = 0.02) -> ScenarioReport:
    """Empirical PRSA of the two-harmonic signal against the limit curve."""
    p = DET_PARAMS
    res = compute_prsa(sample_two_harmonic(p, 0, n), c, L)
    pred = det_limit_coeffs(p.A, p.xi1, p.xi2, c)
    rep = ScenarioReport(
        "det-two-harmonic",
        {"A": p.A, "xi1": p.xi1, "xi2": p.xi2, "phi1": p.phi1, "phi2": p.phi2, "c": c, "n": n, "L": L,
         "B1": pred.B1, "B2": pred.B2},
        [],
    )
    rep.attach_curve(res.z, det_limit_curve(pred, res.ell))
    rep.checks.append(_upper("max_abs_error", rep.max_abs_error, tol))
    return rep


def quad_mc_grid() -> list[tuple[float, float, float, float]]:
    """Twenty ``(A, xi1, xi2, c)`` points covering both regimes and both threshold signs."""
    pairs = [
        (0.3, math.sqrt(2) / 8, math.sqrt(3) / 4),
        (0.7, math.sqrt(2) / 8, math.sqrt(3) / 4),
        (1.5, 0.1 * math.sqrt(5), 0.1 * math.pi),
        (3.0, 1 / math.e, 1 / math.sqrt(7)),
        (0.9, 0.05 * math.sqrt(3), math.sqrt(2) / 3),
    ]
    grid = []
    for A, xi1, xi2 in pairs:
        bound = 2 * (math.sin(math.pi * xi1) + A * math.sin(math.pi * xi2))
        for frac in (-0.4, 0.0, 0.3, 0.7):
            grid.append((A, xi1, xi2, frac * bound))
    return grid


@_timed
def quad_vs_mc(samples: int = 10_000_000, seed: int = 21, k_sigma: float = 3.0) -> ScenarioReport:
    """Quadrature amplitudes against the torus Monte Carlo oracle on a fixed grid."""
    checks, seeds, rows = [], [], []
    for j, (A, xi1, xi2, c) in enumerate(quad_mc_grid()):
        q = det_limit_coeffs(A, xi1, xi2, c)
        m = mc_det_limit_coeffs(A, xi1, xi2, c, samples, seed + j)
        seeds.append(seed_label(seed + j))
        rows.append({"A": A, "xi1": xi1, "xi2": xi2, "c": c, "B1": q.B1, "B2": q.B2,
                     "B1_mc": m.B1, "B2_mc": m.B2, "se1": m.stderr_B1, "se2": m.stderr_B2})
        tag = f"A={A:g},c={c:.3g}"
        checks.append(_upper(f"|dB1|/se [{tag}]", abs(q.B1 - m.B1) / m.stderr_B1, k_sigma))
        checks.append(_upper(f"|dB2|/se [{tag}]", abs(q.B2 - m.B2) / m.stderr_B2, k_sigma))
    return ScenarioReport("quad-vs-mc", {"samples": samples, "grid": rows}, checks, seeds=seeds)


@_timed
def zero_count(T: float = 1e4, dt: float = 1e-3, strata: int = 500, tol: float = 0.01) -> ScenarioReport:
    """Sign changes of the continuous two-harmonic function against the zero-rate formula.

    The test ratios are rational, so counts are averaged over a grid of
    second-harmonic phases (see :func:`count_zeros_phase_averaged`).
    """
    cases = [(0.5, 0.3), (3.0, 0.5), (1.5, 0.4), (1.3, 0.45)]
    checks, rows = [], []
    for A, xi in cases:
        expected = expected_zero_rate(A, xi) * T
        counted = count_zeros_phase_averaged(A, xi, T, strata, dt)
        rows.append({"A": A, "xi": xi, "expected": expected, "counted": counted,
                     "counted_single_phase": count_zeros(A, xi, T, dt)})
        checks.append(_upper(f"rel_error [A={A:g},xi={xi:g}]", abs(counted - expected) / expected, tol))
    return ScenarioReport("zero-count", {"T": T, "dt": dt, "strata": strata, "cases": rows}, checks)


# --------------------------------------------------------------------------
# Stationary Gaussian model
# --------------------------------------------------------------------------

@_timed
def lln_white(n: int = 1_000_000, L: int = 20, seed: int = 11, tol: float = 0.01) -> ScenarioReport:
    """White noise at ``c = 0``: a single pair of lags carries the whole curve."""
    cov = CovarianceFunction.white_noise(L + 1)
    res = compute_prsa(sample_stationary_gaussian(cov, n, make_rng(seed)), 0.0, L)
    pred = lln_limit_vector(cov, 0.0, L)
    root = 1 / math.sqrt(math.pi)
    others = [abs(res.at(l)) for l in range(-L, L + 1) if l not in (0, -1)]
    rep = ScenarioReport(
        "lln-white", {"model": "white-noise", "c": 0.0, "n": n, "L": L}, [], seeds=[seed_label(seed)]
    )
    rep.attach_curve(res.z, pred.zeta)
    rep.checks += [
        _upper("|z(0) - 1/sqrt(pi)|", abs(res.at(0) - root), tol),
        _upper("|z(-1) + 1/sqrt(pi)|", abs(res.at(-1) + root), tol),
        _upper("max |z(l)|, l not in {-1, 0}", max(others), tol),
    ]
    return rep


@_timed
def lln_arma(n: int = 1_000_000, L: int = 20, c: float = 0.0, seed: int = 12, tol: float = 0.01) -> ScenarioReport:
    """ARMA(2,1) input against the covariance-driven limit curve."""
    res = compute_prsa(simulate_arma(ARMA_X2, n, make_rng(seed)), c, L)
    pred = lln_limit_vector(arma_autocovariance(ARMA_X2, L + 1), c, L)
    rep = ScenarioReport(
        "lln-arma",
        {"ar": list(ARMA_X2.ar), "ma": list(ARMA_X2.ma), "sigma": ARMA_X2.sigma, "c": c, "n": n, "L": L},
        [],
        seeds=[seed_label(seed)],
    )
    rep.attach_curve(res.z, pred.zeta)
    rep.checks.append(_upper("max_abs_error", rep.max_abs_error, tol))
    return rep


def threshold_curves(series: TimeSeries, cs, L: int) -> list[np.ndarray]:
    """Empirical curves at several thresholds on one realisation, each divided by its ``z(0)``."""
    return [normalized_by_center(compute_prsa(series, c, L)) for c in cs]


@_timed
def c_scaling(
    n: int = 1_000_000, L: int = 20, seed: int = 13, tol: float = 0.03, white: bool = False
) -> ScenarioReport:
    """Curves at ``c in {-1, 0, 1}`` on one realisation coincide after normalisation."""
    cs = (-1.0, 0.0, 1.0)
    if white:
        cov = CovarianceFunction.white_noise(L + 1)
        series = sample_stationary_gaussian(cov, n, make_rng(seed))
        model = {"model": "white-noise"}
    else:
        cov = arma_autocovariance(ARMA_X2, L + 1)
        series = simulate_arma(ARMA_X2, n, make_rng(seed))
        model = {"ar": list(ARMA_X2.ar), "ma": list(ARMA_X2.ma), "sigma": ARMA_X2.sigma}
    curves = threshold_curves(series, cs, L)
    pred = lln_limit_vector(cov, 0.0, L)
    rep = ScenarioReport("c-scaling", {**model, "c": list(cs), "n": n, "L": L}, [], seeds=[seed_label(seed)])
    rep.attach_curve(curves[1], pred.zeta / pred.at(0))
    rep.checks.append(_upper("pairwise max-abs disagreement", pairwise_max_disagreement(curves), tol))
    return rep


@_timed
def clt_scaling(
    n_values=(10_000, 40_000), replicates: int = 200, L: int = 1, seed: int = 14, lo: float = 2.8, hi: float = 5.7
) -> ScenarioReport:
    """Replicate variance of ``z(0)`` shrinks like ``1/n`` for white noise."""
    cov = CovarianceFunction.white_noise(L + 1)
    spec = ExperimentSpec(cov, 0.0, L, int(n_values[0]), replicates, seed)
    sc = variance_scaling_check(spec, n_values)
    ratio = float(sc.ratios[0, L])
    checks = [_within(f"var ratio z(0), n={n_values[0]} vs {n_values[1]}", ratio, lo, hi)]
    seeds = [seed_label(seed + i, 0) + " .. r=" + str(replicates - 1) for i in range(len(n_values))]
    return ScenarioReport(
        "clt-scaling",
        {"model": "white-noise", "c": 0.0, "L": L, "n_values": list(n_values), "replicates": replicates},
        checks,
        scaling=sc.to_dict(),
        seeds=seeds,
    )


@_timed
def clt_normality(
    n: int = 10_000,
    replicates: int = 500,
    L: int = 1,
    seed: int = 15,
    samples_per_lag: int = 1_000_000,
    level: float = 0.01,
    rel_tol: float = 0.25,
) -> ScenarioReport:
    """``sqrt(n) (z(0) - zeta_0)`` over replicates: normal, with variance close to ``V[0, 0]``."""
    cov = CovarianceFunction.white_noise(L + 1)
    summary = run_replicates(ExperimentSpec(cov, 0.0, L, n, replicates, seed))
    zeta0 = lln_limit_vector(cov, 0.0, L).at(0)
    x = math.sqrt(n) * (summary.z[:, L] - zeta0)
    norm = normality_check(x)
    V = clt_covariance(cov, 0.0, L, samples=samples_per_lag, seed=seed)
    v00 = V.entry(0, 0)
    emp_var = float(np.var(x, ddof=1))
    checks = [
        _lower(f"normality p-value ({NORMALITY_TEST})", norm.p_value, level),
        _upper("|var - V00| / V00", abs(emp_var - v00) / v00, rel_tol),
    ]
    return ScenarioReport(
        "clt-normality",
        {"model": "white-noise", "c": 0.0, "L": L, "n": n, "replicates": replicates,
         "V00": v00, "V00_stderr": V.entry_stderr(0, 0), "empirical_var": emp_var},
        checks,
        normality=norm.to_dict(),
        seeds=[summary.seeds[0] + " .. " + summary.seeds[-1]],
    )


def max_relative_deviation(a: np.ndarray, ref: np.ndarray) -> float:
    return float(np.max(np.abs(a - ref) / np.abs(ref)))


@_timed
def lemma_identity(
    count: int = 100, length: int = 2001, L: int = 5, seed: int = 16, tol: float = 1e-9
) -> ScenarioReport:
    """Increment form of the all-hinge average against the direct average, on Gaussian series."""
    worst = 0.0
    for r in range(count):
        series = TimeSeries(make_rng(seed, r).standard_normal(length))
        for c in (-0.5, 0.0, 0.5):
            ref = direct_average(series, c, L).z
            alt = prsa_via_increments(series, c, L).z
            worst = max(worst, max_relative_deviation(alt, ref))
    return ScenarioReport(
        "lemma-identity",
        {"series": count, "length": length, "L": L, "c": [-0.5, 0.0, 0.5]},
        [_upper("max relative deviation", worst, tol)],
        seeds=[seed_label(seed, 0) + " .. " + seed_label(seed, count - 1)],
    )


@_timed
def random_walk_jump(n: int = 100_000, L: int = 5, seed: int = 17, tol: float = 0.02) -> ScenarioReport:
    """Random walk at ``c = 0``: flat except for one jump of ``E[w | w > 0]``."""
    res = compute_prsa(random_walk(n, seed), 0.0, L)
    inc = consecutive_increments(res)
    expected = np.zeros(2 * L)
    expected[L - 1] = conditional_increment_mean(1.0, 0.0)  # z(0) - z(-1)
    rep = ScenarioReport("random-walk", {"model": "random-walk", "c": 0.0, "n": n, "L": L}, [],
                         seeds=[seed_label(seed)])
    rep.attach_curve(inc, expected)
    rest = np.delete(np.abs(inc), L - 1)
    rep.checks += [
        _upper("|(z(0) - z(-1)) - sqrt(2/pi)|", abs(inc[L - 1] - expected[L - 1]), tol),
        _upper("max other |z(l+1) - z(l)|", float(rest.max()), tol),
    ]
    return rep


@_timed
def cov_recovery(L: int = 10, tol: float = 1e-12) -> ScenarioReport:
    """Inverting the limit formula returns the covariance differences it was built from."""
    tables = {
        "ar1-0.5": arma_autocovariance(ArmaParams(ar=(0.5,)), L + 1),
        "white-noise": CovarianceFunction.white_noise(L + 1),
    }
    checks = []
    for name, cov in tables.items():
        ell = np.arange(-L, L + 1)
        diffs = cov(ell) - cov(ell + 1)
        for c in (-1.0, 0.0, 1.0):
            back = recover_covariance_diffs(lln_limit_vector(cov, c, L), cov(0) - cov(1))
            checks.append(_upper(f"max |diff error| [{name}, c={c:g}]", float(np.max(np.abs(back - diffs))), tol))
    return ScenarioReport("cov-recovery", {"L": L, "tables": list(tables)}, checks)


SCENARIOS: dict[str, Callable[..., ScenarioReport]] = {
    "det-two-harmonic": det_two_harmonic,
    "lln-white": lln_white,
    "lln-arma": lln_arma,
    "c-scaling": c_scaling,
    "clt-scaling": clt_scaling,
    "clt-normality": clt_normality,
    "lemma-identity": lemma_identity,
    "zero-count": zero_count,
    "random-walk": random_walk_jump,
    "quad-vs-mc": quad_vs_mc,
    "cov-recovery": cov_recovery,
}


def run_scenario(name: str, **kwargs) -> ScenarioReport:
    try:
        fn = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    return fn(**kwargs)
