"""Phase-rectified signal averaging.

Positions are array positions ``0..N-1`` into ``TimeSeries.values``; the
increment ``w_i = x_i - x_{i-1}`` exists for ``i >= 1``.  The output
vector stores ``z(ell)`` at ``z[ell + L]``.

Two boundary conventions are supported:

``truncate``
    only hinges whose full window ``i-L .. i+L`` lies inside the series
    are averaged (the default);
``all``
    every hinge is averaged and a window reaching outside the series is
    an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import NoHingeError, OverhangError
from .signals import TimeSeries

EdgePolicy = Literal["truncate", "all"]
EDGE_POLICIES = ("truncate", "all")


@dataclass(frozen=True)
class HingeSet:
    indices: np.ndarray
    c: float
    series_len: int

    def __len__(self) -> int:
        return self.indices.size


@dataclass(frozen=True)
class PrsaResult:
    z: np.ndarray
    hinge_count_used: int
    c: float
    L: int
    edge_policy: str = "truncate"

    @property
    def ell(self) -> np.ndarray:
        return np.arange(-self.L, self.L + 1)

    def at(self, ell: int) -> float:
        return float(self.z[ell + self.L])


def detect_hinges(series: TimeSeries, c: float) -> HingeSet:
    """Positions ``i >= 1`` with ``x_i - x_{i-1} > c`` (strict)."""
    w = series.increments()
    idx = np.flatnonzero(w > c) + 1
    return HingeSet(idx, float(c), len(series))


def _window_average(x: np.ndarray, anchors: np.ndarray, L: int) -> np.ndarray:
    offsets = np.arange(-L, L + 1)
    # one gather per lag keeps memory at O(#anchors); np.sum is pairwise and order-fixed
    return np.array([np.sum(x[anchors + o]) for o in offsets]) / anchors.size


def compute_prsa(
    series: TimeSeries, c: float, L: int, edge_policy: EdgePolicy = "truncate"
) -> PrsaResult:
    """Average the windows ``x_{i-L..i+L}`` over hinge points ``i``.

    Raises
    ------
    NoHingeError
        If no admissible hinge exists.
    OverhangError
        With ``edge_policy="all"``, if some hinge window leaves the series.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    n = len(series)
    if n < 2 * L + 2:
        raise ValueError(f"series of length {n} is too short for L={L} (need >= {2 * L + 2})")
    if edge_policy not in EDGE_POLICIES:
        raise ValueError(f"unknown edge policy {edge_policy!r}")
    hinges = detect_hinges(series, c).indices
    if edge_policy == "truncate":
        lo, hi = L, n - 1 - L
        anchors = hinges[(hinges >= lo) & (hinges <= hi)]
    else:
        anchors = hinges
        bad = anchors[(anchors < L) | (anchors > n - 1 - L)]
        if bad.size:
            raise OverhangError(
                f"hinge at position {int(bad[0])} has a window of half-width {L} "
                f"outside 0..{n - 1}; pad the series, shrink L or use edge policy 'truncate'"
            )
        lo, hi = 1, n - 1
    if anchors.size == 0:
        raise NoHingeError(f"no hinge with w > {c} among positions {lo}..{hi}")
    z = _window_average(series.values, anchors, L)
    return PrsaResult(z, int(anchors.size), float(c), int(L), edge_policy)


def haar_index(result: PrsaResult) -> float:
    """Right half-window mean minus left half-window mean of ``z``.

    Both windows have ``L - floor(L/2) + 1`` entries: ``j = floor(L/2)..L``
    on the right, ``j = -L..-floor(L/2)`` on the left.
    """
    L = result.L
    if L < 1:
        raise ValueError("haar_index needs L >= 1")
    h = L // 2
    right = result.z[h + L : 2 * L + 1]
    left = result.z[0 : L - h + 1]
    return float(np.mean(right) - np.mean(left))


def hinge_count(hinges: HingeSet | np.ndarray, a: int, b: int) -> int:
    """Number of hinges ``i`` with ``a < i <= b``."""
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    idx = hinges.indices if isinstance(hinges, HingeSet) else np.asarray(hinges)
    return int(np.searchsorted(idx, b, side="right") - np.searchsorted(idx, a, side="right"))


# --------------------------------------------------------------------------
# Increment decomposition
# --------------------------------------------------------------------------

def _centred(series: TimeSeries, L: int, n: int | None):
    """Return (x, centre, n): ``x[centre + k]`` is the sample at symmetric index ``k``."""
    N = len(series)
    M = (N - 1) // 2
    n_max = M - L
    if n is None:
        n = n_max
    if n < 1:
        raise OverhangError(f"series of length {N} leaves no room for L={L}")
    if n > n_max:
        raise OverhangError(
            f"n={n} needs samples at -{n + L}..{n + L} but only -{M}..{M} exist; "
            "pad the series or shrink L"
        )
    return series.values, M, n


def direct_average(series: TimeSeries, c: float, L: int, n: int | None = None) -> PrsaResult:
    """All-hinge average ``sum_m x_{m+l} 1{w_m > c} / sum_m 1{w_m > c}`` over ``m = -n..n``.

    Indices are symmetric around the centre sample; ``n`` defaults to the
    largest value whose reads stay inside the series.
    """
    x, centre, n = _centred(series, L, n)
    m = np.arange(-n, n + 1) + centre
    anchors = m[(x[m] - x[m - 1]) > c]
    if anchors.size == 0:
        raise NoHingeError(f"no hinge with w > {c} among symmetric indices -{n}..{n}")
    return PrsaResult(_window_average(x, anchors, L), int(anchors.size), float(c), int(L), "all")


def prsa_via_increments(series: TimeSeries, c: float, L: int, n: int | None = None) -> PrsaResult:
    """All-hinge PRSA written as a hinge-weighted sum of increments around ``x_0``.

    With hinge counts ``H(a, b) = #{hinges in (a, b]}`` on the symmetric
    index axis,

        z(l) = x_0 + sum_{p=1}^{n+l} w_p H(p-l-1, n) / H(-n-1, n)
                   - sum_{p=-n+l+1}^{0} w_p H(-n-1, p-l-1) / H(-n-1, n).

    Agrees with :func:`direct_average` up to rounding.  Raises
    :class:`OverhangError` when ``n`` is too large for the series.
    """
    x, centre, n = _centred(series, L, n)
    k_lo = -n - L
    ks = np.arange(k_lo, n + L + 1)
    vals = x[ks + centre]
    w = np.empty_like(vals)
    w[0] = np.nan
    w[1:] = np.diff(vals)

    def w_at(k):
        return w[k - k_lo]

    m = np.arange(-n, n + 1)
    hinges = m[w_at(m) > c]
    total = hinges.size
    if total == 0:
        raise NoHingeError(f"no hinge with w > {c} among symmetric indices -{n}..{n}")
    x0 = vals[-k_lo]
    z = np.empty(2 * L + 1)
    for j, ell in enumerate(range(-L, L + 1)):
        p_pos = np.arange(1, n + ell + 1)
        h_pos = total - np.searchsorted(hinges, p_pos - ell - 1, side="right")
        p_neg = np.arange(-n + ell + 1, 1)
        h_neg = np.searchsorted(hinges, p_neg - ell - 1, side="right")
        # compensated summation: the weights reach H(-n-1, n), so plain dot products lose digits
        pos = math.fsum(w_at(p_pos) * h_pos)
        neg = math.fsum(w_at(p_neg) * h_neg)
        z[j] = x0 + (pos - neg) / total
    return PrsaResult(z, int(total), float(c), int(L), "all")
