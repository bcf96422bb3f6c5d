"""Replicated PRSA experiments and the statistics used to confront them with theory."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import stats

from .core import PrsaResult, compute_prsa
from .errors import InsufficientDataError, NoHingeError
from .numerics import make_rng, seed_label
from .signals import (
    ArmaParams,
    CovarianceFunction,
    TimeSeries,
    TwoHarmonicParams,
    sample_stationary_gaussian,
    sample_two_harmonic,
    simulate_arma,
)

Signal = Union[TwoHarmonicParams, ArmaParams, CovarianceFunction]

NORMALITY_TEST = "D'Agostino-Pearson K^2 (scipy.stats.normaltest)"


def thread_count() -> int:
    """Worker threads for replicate loops, capped by ``PRSA_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("PRSA_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ExperimentSpec:
    signal: Signal
    c: float
    L: int
    n: int
    replicates: int = 1
    seed: int = 0
    edge_policy: str = "truncate"

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.n < 2 * self.L + 2:
            raise ValueError(f"n={self.n} is too short for L={self.L}")

    def describe(self) -> dict:
        sig = self.signal
        if isinstance(sig, CovarianceFunction):
            sig_desc = {"type": "covariance", "values": sig.values.tolist(), **sig.metadata}
        elif isinstance(sig, ArmaParams):
            sig_desc = {"type": "arma", "ar": list(sig.ar), "ma": list(sig.ma), "sigma": sig.sigma}
        else:
            sig_desc = {"type": "two-harmonic", **asdict(sig)}
        return {
            "signal": sig_desc,
            "c": self.c,
            "L": self.L,
            "n": self.n,
            "replicates": self.replicates,
            "seed": self.seed,
            "edge_policy": self.edge_policy,
        }


def generate_series(signal: Signal, n: int, rng: np.random.Generator) -> TimeSeries:
    """One realisation of length ``n``; the two-harmonic signal ignores ``rng``."""
    if isinstance(signal, TwoHarmonicParams):
        return sample_two_harmonic(signal, 0, n)
    if isinstance(signal, ArmaParams):
        return simulate_arma(signal, n, rng)
    if isinstance(signal, CovarianceFunction):
        return sample_stationary_gaussian(signal, n, rng)
    raise TypeError(f"unsupported signal type {type(signal).__name__}")


@dataclass
class ReplicateSummary:
    results: list[PrsaResult]
    mean: np.ndarray
    var: np.ndarray
    stderr: np.ndarray
    seeds: list[str]
    spec: ExperimentSpec

    @property
    def z(self) -> np.ndarray:
        """Replicate matrix, one row per replicate."""
        return np.vstack([r.z for r in self.results])


def _one_replicate(spec: ExperimentSpec, r: int) -> PrsaResult:
    series = generate_series(spec.signal, spec.n, make_rng(spec.seed, r))
    try:
        return compute_prsa(series, spec.c, spec.L, spec.edge_policy)
    except NoHingeError as exc:
        raise NoHingeError(f"replicate {r}: {exc}") from exc


def run_replicates(spec: ExperimentSpec, threads: int | None = None) -> ReplicateSummary:
    """Run ``spec.replicates`` independent PRSA computations.

    Replicate ``r`` draws from ``make_rng(spec.seed, r)``; results are
    collected in replicate order, so the output does not depend on the
    thread count.
    """
    threads = thread_count() if threads is None else threads
    reps = range(spec.replicates)
    if threads > 1 and spec.replicates > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _one_replicate(spec, r), reps))
    else:
        results = [_one_replicate(spec, r) for r in reps]
    z = np.vstack([res.z for res in results])
    mean = z.mean(axis=0)
    if spec.replicates > 1:
        var = z.var(axis=0, ddof=1)
        stderr = np.sqrt(var / spec.replicates)
    else:
        var = np.zeros_like(mean)
        stderr = np.full_like(mean, np.nan)
    seeds = [seed_label(spec.seed, r) for r in reps]
    return ReplicateSummary(results, mean, var, stderr, seeds, spec)


# --------------------------------------------------------------------------
# Curve comparison
# --------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    max_abs_error: float
    rmse: float
    per_ell_errors: np.ndarray
    predicted: np.ndarray
    empirical: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "predicted": self.predicted.tolist(),
            "empirical": self.empirical.tolist(),
            "per_ell_errors": self.per_ell_errors.tolist(),
            "max_abs_error": self.max_abs_error,
            "rmse": self.rmse,
            "metadata": {k: str(v) for k, v in self.metadata.items()},
        }


def compare_curves(empirical, predicted, **metadata) -> ComparisonReport:
    emp = np.asarray(empirical, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if emp.shape != pred.shape:
        raise ValueError(f"length mismatch: empirical {emp.shape} vs predicted {pred.shape}")
    err = np.abs(emp - pred)
    return ComparisonReport(
        max_abs_error=float(err.max()),
        rmse=float(math.sqrt(np.mean(err**2))),
        per_ell_errors=err,
        predicted=pred,
        empirical=emp,
        metadata=metadata,
    )


# --------------------------------------------------------------------------
# CLT diagnostics
# --------------------------------------------------------------------------

@dataclass
class ScalingReport:
    n_values: list[int]
    variances: np.ndarray  # (len(n_values), 2L+1)
    ratios: np.ndarray  # var(n_i) / var(n_{i+1})
    slopes: np.ndarray  # per-ell slope of log var vs log n
    zero_variance: bool
    replicates: int

    def to_dict(self) -> dict:
        return {
            "n_values": list(self.n_values),
            "variances": self.variances.tolist(),
            "ratios": self.ratios.tolist(),
            "slopes": self.slopes.tolist(),
            "zero_variance": self.zero_variance,
            "replicates": self.replicates,
        }


def variance_scaling_check(spec: ExperimentSpec, n_values: Sequence[int]) -> ScalingReport:
    """Replicate variance of ``z`` at several lengths; the CLT predicts slope -1 in log-log.

    Each length reuses ``spec`` with only ``n`` changed, and a distinct
    seed branch per length.
    """
    n_values = [int(n) for n in n_values]
    if len(n_values) < 2:
        raise InsufficientDataError("need at least two n values")
    if spec.replicates < 100:
        raise InsufficientDataError(f"need >= 100 replicates per n, got {spec.replicates}")
    variances = []
    for i, n in enumerate(n_values):
        sub = ExperimentSpec(spec.signal, spec.c, spec.L, n, spec.replicates, spec.seed + i, spec.edge_policy)
        variances.append(run_replicates(sub).var)
    variances = np.vstack(variances)
    zero = bool(np.any(variances <= 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = variances[:-1] / variances[1:]
        if zero:
            slopes = np.full(variances.shape[1], np.nan)
        else:
            logn = np.log(n_values)
            slopes = np.polyfit(logn, np.log(variances), 1)[0]
    return ScalingReport(n_values, variances, ratios, np.atleast_1d(slopes), zero, spec.replicates)


@dataclass(frozen=True)
class NormalityResult:
    statistic: float
    p_value: float
    test: str = NORMALITY_TEST
    degenerate: bool = False

    def rejects(self, level: float = 0.01) -> bool:
        return self.p_value < level

    def to_dict(self) -> dict:
        return asdict(self)


def normality_check(samples) -> NormalityResult:
    """One-sample normality test (D'Agostino-Pearson omnibus on skewness and kurtosis).

    A constant sample cannot be normal with positive variance; it is
    rejected with ``degenerate=True``.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 100:
        raise InsufficientDataError(f"normality check needs >= 100 samples, got {x.size}")
    if np.ptp(x) == 0.0:
        return NormalityResult(float("inf"), 0.0, degenerate=True)
    res = stats.normaltest(x)
    return NormalityResult(float(res.statistic), float(res.pvalue))


# --------------------------------------------------------------------------
# Invariance checks
# --------------------------------------------------------------------------

def random_walk(n: int, seed: int, sigma: float = 1.0) -> TimeSeries:
    """Cumulative sum of i.i.d. ``N(0, sigma^2)`` increments."""
    return TimeSeries(np.cumsum(sigma * make_rng(seed).standard_normal(n)))


def consecutive_increments(result: PrsaResult) -> np.ndarray:
    """``z(l+1) - z(l)`` for ``l = -L..L-1``."""
    return np.diff(result.z)


def normalized_by_center(result: PrsaResult) -> np.ndarray:
    centre = result.at(0)
    if centre == 0.0:
        raise ZeroDivisionError("z(0) is zero; cannot normalise")
    return result.z / centre


def pairwise_max_disagreement(curves: Sequence[np.ndarray]) -> float:
    worst = 0.0
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            worst = max(worst, float(np.max(np.abs(curves[i] - curves[j]))))
    return worst
