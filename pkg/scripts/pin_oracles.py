"""Compute reference values by routes that share no code with ``prsa`` and freeze them.

Writes ``tests/pinned.py``.  Nothing here imports the package: integrals
go through mpmath, Monte Carlo and simulation loops are written out
directly, so a test that compares ``prsa`` against these numbers is a
genuine two-route check.

    python3 scripts/pin_oracles.py            # under a minute on one core
"""

from __future__ import annotations

import math
import pprint
from pathlib import Path

import mpmath as mp
import numpy as np

mp.mp.dps = 30
OUT = Path(__file__).resolve().parent.parent / "tests" / "pinned.py"


def elliptic_e(k: float) -> float:
    return float(mp.ellipe(k * k))


def gaussian_tail(x: float) -> float:
    return float(mp.erfc(x / mp.sqrt(2)) / 2)


def conditional_mean_exact(c: float) -> float:
    return float(mp.npdf(c) / (1 - mp.ncdf(c)))


def c0_coefficients_mpmath(A: float, xi: float) -> tuple[float, float]:
    """c = 0 amplitudes by tanh-sinh quadrature of the closed forms."""
    k2 = mp.mpf(A * xi) ** 2
    m = min(mp.mpf(1), 1 / mp.mpf(A * xi))
    i1 = mp.quad(lambda u: mp.sqrt((1 - k2 * u * u) / (1 - u * u)), [0, m])
    i2 = mp.quad(lambda u: mp.sqrt((1 - u * u) / (1 - k2 * u * u)), [0, m])
    return float(4 / mp.pi**2 * i1), float(4 * A * A * xi / mp.pi**2 * i2)


def torus_mc(A: float, s1: float, s2: float, c: float, samples: int, seed: int):
    """Plain (non-antithetic) Monte Carlo of E[sin U | E] and A E[sin V | E]."""
    rng = np.random.default_rng(seed)
    acc = np.zeros(3)
    acc2 = np.zeros(5)  # a1^2, a2^2, b^2, a1 b, a2 b
    chunk = 2_000_000
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        u = rng.random(m) * 2 * np.pi
        v = rng.random(m) * 2 * np.pi
        b = (s1 * np.sin(u) + A * s2 * np.sin(v) > c / 2).astype(float)
        a1 = np.sin(u) * b
        a2 = A * np.sin(v) * b
        acc += [a1.sum(), a2.sum(), b.sum()]
        acc2 += [a1 @ a1, a2 @ a2, b @ b, a1 @ b, a2 @ b]
    mean = acc / samples
    ex2 = acc2 / samples
    out = []
    for j, (sq, cross) in enumerate(((0, 3), (1, 4))):
        r = mean[j] / mean[2]
        var_a = ex2[sq] - mean[j] ** 2
        var_b = ex2[2] - mean[2] ** 2
        cov_ab = ex2[cross] - mean[j] * mean[2]
        se = math.sqrt((var_a - 2 * r * cov_ab + r * r * var_b) / samples) / mean[2]
        out += [float(r), float(se)]
    return tuple(out)


def phase_averaged_rate(A: float, p: int, q: int, derivative: bool, phases: int, dt: float) -> float:
    """Sign changes per unit time of cos(2 pi t + a) + A cos(2 pi (p/q) t + b), averaged over b.

    The function has period q, so one period per phase suffices.
    """
    xi = p / q
    t = np.arange(0.0, q, dt)
    total = 0
    for k in range(phases):
        b = 2 * np.pi * (k + 0.5) / phases
        if derivative:
            f = np.sin(2 * np.pi * t + 0.3) + A * xi * np.sin(2 * np.pi * xi * t + b)
        else:
            f = np.cos(2 * np.pi * t + 0.3) + A * np.cos(2 * np.pi * xi * t + b)
        s = np.signbit(f)
        total += int(np.count_nonzero(s != np.roll(s, 1)))  # periodic wrap closes the loop
    return total / (phases * q)


def white_noise_zeta_mc(samples: int, seed: int) -> dict:
    """E[x_l | x_0 - x_{-1} > 0] for i.i.d. N(0, 1), l = -2..2."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, 5))  # columns l = -2..2
    sel = x[:, 2] - x[:, 1] > 0  # x_0 - x_{-1}
    vals = x[sel]
    mean = vals.mean(axis=0)
    se = vals.std(axis=0, ddof=1) / math.sqrt(vals.shape[0])
    return {"mean": mean.tolist(), "stderr": se.tolist()}


def prsa_truncated(x: np.ndarray, c: float, L: int) -> np.ndarray:
    i = np.arange(L, x.size - L)
    i = i[x[i] - x[i - 1] > c]
    return np.array([x[i + l].mean() for l in range(-L, L + 1)])


def replicate_v(n: int, reps: int, L: int, seed: int) -> dict:
    """N * Cov(z) over independent white-noise replicates of length N = n, c = 0."""
    rng = np.random.default_rng(seed)
    zeta = np.zeros(2 * L + 1)
    zeta[L] = 1 / math.sqrt(math.pi)
    zeta[L - 1] = -1 / math.sqrt(math.pi)
    rows = np.array([prsa_truncated(rng.standard_normal(n), 0.0, L) for _ in range(reps)])
    dev = math.sqrt(n) * (rows - zeta)
    V = np.cov(dev, rowvar=False)
    return {"V": V.tolist(), "V00_stderr": float(V[L, L] * math.sqrt(2 / (reps - 1))), "reps": reps, "n": n}


def arma_sample_autocov(ar, ma, n: int, burn: int, lags: int, seed: int) -> dict:
    """Sample autocovariance of one long ARMA path simulated by the plain recursion."""
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n + burn).tolist()
    x = [0.0] * (n + burn)
    p, q = len(ar), len(ma)
    for t in range(n + burn):
        v = e[t]
        for r in range(1, p + 1):
            if t - r >= 0:
                v += ar[r - 1] * x[t - r]
        for j in range(1, q + 1):
            if t - j >= 0:
                v += ma[j - 1] * e[t - j]
        x[t] = v
    y = np.asarray(x[burn:])
    y = y - y.mean()
    gam = [float(y[: n - k] @ y[k:] / n) for k in range(lags + 1)]
    # Bartlett: Var(gamma_hat(k)) ~ (1/n) sum_j [g(j)^2 + g(j+k) g(j-k)], truncated using the estimate itself
    g = np.array(gam + [0.0] * (lags + 1))

    def G(j):
        return g[abs(j)] if abs(j) <= lags else 0.0

    se = [math.sqrt(sum(G(j) ** 2 + G(j + k) * G(j - k) for j in range(-lags, lags + 1)) / n) for k in range(lags + 1)]
    return {"gamma": gam, "stderr": se, "n": n}


def main() -> None:
    pinned = {}
    pinned["ELLIPE_056"] = elliptic_e(0.56)
    pinned["TAIL_196"] = gaussian_tail(1.96)
    pinned["COND_MEAN_C1"] = conditional_mean_exact(1.0)

    # c = 0 amplitudes at A = 0.7 and sine ratio 0.8
    xi1 = 0.3
    xi2 = math.asin(0.8 * math.sin(0.3 * math.pi)) / math.pi
    b1, b2 = c0_coefficients_mpmath(0.7, 0.8)
    pinned["C0_A07_XI08"] = {"xi1": xi1, "xi2": xi2, "B1": b1, "B2": b2}
    s1, s2 = math.sin(math.pi * xi1), math.sin(math.pi * xi2)
    m1, se1, m2, se2 = torus_mc(0.7, s1, s2, 0.0, 100_000_000, 101)
    pinned["MC_A07_XI08"] = {"B1": m1, "se1": se1, "B2": m2, "se2": se2}
    # a c != 0 point, MC only
    m1, se1, m2, se2 = torus_mc(0.7, s1, s2, 0.6, 100_000_000, 102)
    pinned["MC_A07_XI08_C06"] = {"B1": m1, "se1": se1, "B2": m2, "se2": se2}

    pinned["ZERO_RATE_A15_XI04"] = phase_averaged_rate(1.5, 2, 5, False, 4000, 1e-4)
    pinned["EXTREMA_RATE_A3_XI04"] = phase_averaged_rate(3.0, 2, 5, True, 4000, 1e-4)

    pinned["WHITE_ZETA_MC"] = white_noise_zeta_mc(10_000_000, 103)
    pinned["WHITE_V_L1"] = replicate_v(10_000, 4000, 1, 104)
    pinned["ARMA_X2_AUTOCOV"] = arma_sample_autocov((0.01, 0.15), (-0.15,), 10_000_000, 1000, 10, 105)

    header = '"""Frozen oracle values; regenerate with ``python3 scripts/pin_oracles.py``."""\n\n'
    body = "".join(f"{k} = {pprint.pformat(v, width=100, sort_dicts=True)}\n\n" for k, v in pinned.items())
    OUT.write_text(header + body.rstrip() + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
