"""Shared numerical primitives.

Quadrature for integrands with inverse-square-root endpoint behaviour,
the standard Gaussian tail function, seeded multivariate Gaussian
sampling and the seed-derivation scheme used by every Monte Carlo
routine in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .errors import DecompositionError, QuadratureError

GL_ORDER = 64
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)

CLIP_WIDTH = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-9
    max_refinements: int = 20

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_refinements < 1:
            raise ValueError(f"max_refinements must be >= 1, got {self.max_refinements}")


DEFAULT_QUADRATURE = QuadratureSpec()


def _composite_gl(g: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, panels: int) -> float:
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    pts = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = np.asarray(g(pts), dtype=float).reshape(panels, GL_ORDER)
    return float(np.sum((vals @ _GL_WEIGHTS) * half))


def integrate_singular(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integrate ``f`` over ``[a, b]`` allowing ``(x-a)^(-1/2)``, ``(b-x)^(-1/2)`` blow-up.

    The map ``x = (a+b)/2 + (b-a)/2 * sin(theta)`` turns arcsine-type
    endpoint behaviour (and square-root zeros) into a smooth integrand on
    ``[-pi/2, pi/2]``, which is then handled by composite Gauss-Legendre
    of order 64. The panel count doubles until two successive estimates
    agree within ``spec.abs_tol``.

    ``f`` must accept and return numpy arrays.

    Raises
    ------
    QuadratureError
        If the estimates have not settled after ``spec.max_refinements``
        doublings.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)

    def g(theta):
        return f(mid + half * np.sin(theta)) * (half * np.cos(theta))

    lo, hi = -0.5 * math.pi, 0.5 * math.pi
    prev = _composite_gl(g, lo, hi, 1)
    for k in range(1, spec.max_refinements + 1):
        cur = _composite_gl(g, lo, hi, 2**k)
        if abs(cur - prev) <= spec.abs_tol:
            return cur
        prev, last = cur, prev
    raise QuadratureError("integrate_singular did not converge", last, prev)


def clip_unit(x, width: float = CLIP_WIDTH):
    """Clip arcsin/arccos arguments into [-1, 1].

    Values outside by more than ``width`` are a caller bug, not float drift.
    """
    arr = np.asarray(x, dtype=float)
    excess = np.max(np.abs(arr)) - 1.0 if arr.size else 0.0
    if excess > width:
        raise ValueError(f"argument leaves [-1, 1] by {excess:.3g} > {width:g}")
    return np.clip(arr, -1.0, 1.0)


def gaussian_tail(x):
    """Standard Gaussian tail ``Q(x) = P(N > x)``; accepts scalars or arrays."""
    out = special.ndtr(-np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def gaussian_density(x):
    out = np.exp(-0.5 * np.square(np.asarray(x, dtype=float))) / math.sqrt(2.0 * math.pi)
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# Random numbers
# --------------------------------------------------------------------------

def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    """Return an independent PCG64 generator for ``(seed, *spawn_key)``.

    Child streams are derived with numpy's ``SeedSequence`` hashing, so
    ``make_rng(s, r)`` for distinct ``r`` are statistically independent and
    reproducible regardless of the order in which they are created.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.PCG64(ss))


def seed_label(seed: int, *spawn_key: int) -> str:
    """Human-readable record of a derived stream, for metadata files."""
    key = ",".join(str(int(k)) for k in spawn_key)
    return f"PCG64(SeedSequence({int(seed)}, spawn_key=({key})))"


@dataclass(frozen=True)
class GaussianSpec:
    mean: np.ndarray
    cov: np.ndarray
    symmetry_tol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov shape {cov.shape} does not match mean of size {mean.size}")
        scale = max(1.0, float(np.max(np.abs(cov))) if cov.size else 1.0)
        if np.max(np.abs(cov - cov.T)) > self.symmetry_tol * scale:
            raise ValueError("covariance matrix is not symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def dim(self) -> int:
        return self.mean.size


def psd_factor(cov: np.ndarray, rel_tol: float = 1e-10) -> tuple[np.ndarray, str]:
    """Return ``F`` with ``F @ F.T == cov`` and the method that produced it.

    Plain Cholesky first; singular or borderline matrices fall back to a
    symmetric eigendecomposition with negative eigenvalues down to
    ``-rel_tol * max_eig`` clipped to zero.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.size == 0:
        return cov.copy(), "empty"
    try:
        return np.linalg.cholesky(cov), "cholesky"
    except np.linalg.LinAlgError:
        pass
    vals, vecs = np.linalg.eigh(cov)
    top = max(float(vals[-1]), 0.0)
    if vals[0] < -rel_tol * max(top, 1e-300) and vals[0] < -1e-300:
        raise DecompositionError(
            f"covariance has eigenvalue {vals[0]:.3g} below tolerance -{rel_tol:g}*{top:.3g}"
        )
    return vecs * np.sqrt(np.clip(vals, 0.0, None)), "eigh-clipped"


def mvn_sample(spec: GaussianSpec, count: int, seed: int | np.random.Generator) -> np.ndarray:
    """Draw ``count`` rows from ``N(spec.mean, spec.cov)``.

    ``seed`` may be an integer or an existing generator; an integer gives
    bit-identical output on every call.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    factor, _ = psd_factor(spec.cov)
    z = rng.standard_normal((count, spec.dim))
    return spec.mean + z @ factor.T
