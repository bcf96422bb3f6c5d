"""CSV tables with headers, JSON side-files for metadata.

Floats are written with ``%.17g`` so a write/read round trip is exact.
The side-file of ``foo.csv`` is ``foo.json``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import PrsaResult
from .signals import CovarianceFunction, TimeSeries
from .theory_stoch import StochPrediction

FLOAT_FMT = "%.17g"


def metadata_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_table(path, header: tuple[str, str], first, second) -> None:
    """Two-column CSV: an integer key column and a float value column."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for a, b in zip(first, second):
            fh.write(f"{int(a)},{FLOAT_FMT % b}\n")


def read_table(path, header: tuple[str, str]) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(h.strip() for h in rows[0]) != header:
        raise ValueError(f"{path}: expected header {','.join(header)}")
    body = [r for r in rows[1:] if r]
    try:
        first = np.array([int(r[0]) for r in body], dtype=int)
        second = np.array([float(r[1]) for r in body], dtype=float)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed row ({exc})") from exc
    return first, second


def write_series(path, series: TimeSeries, metadata: dict | None = None) -> None:
    write_table(path, ("index", "value"), series.index, series.values)
    if metadata is not None:
        write_json(metadata_path(path), metadata)


def read_series(path) -> TimeSeries:
    idx, vals = read_table(path, ("index", "value"))
    if idx.size and np.any(np.diff(idx) != 1):
        raise ValueError(f"{path}: index column must be consecutive integers")
    origin = int(idx[0]) if idx.size else 0
    return TimeSeries(vals, origin_index=origin)


def write_prsa(path, result: PrsaResult, n: int, extra: dict | None = None) -> None:
    write_table(path, ("ell", "z"), result.ell, result.z)
    meta = {
        "n": int(n),
        "c": result.c,
        "L": result.L,
        "hinge_count_used": result.hinge_count_used,
        "edge_policy": result.edge_policy,
    }
    write_json(metadata_path(path), {**meta, **(extra or {})})


def read_curve(path, header: tuple[str, str] = ("ell", "z")) -> tuple[np.ndarray, np.ndarray]:
    return read_table(path, header)


def read_prsa(path) -> PrsaResult:
    ell, z = read_table(path, ("ell", "z"))
    meta = read_json(metadata_path(path))
    return PrsaResult(z, int(meta["hinge_count_used"]), float(meta["c"]), int(meta["L"]), meta["edge_policy"])


def write_covariance(path, cov: CovarianceFunction) -> None:
    write_table(path, ("lag", "value"), np.arange(cov.k_max + 1), cov.values)
    if cov.metadata:
        write_json(metadata_path(path), cov.metadata)


def read_covariance(path) -> CovarianceFunction:
    lag, vals = read_table(path, ("lag", "value"))
    if not np.array_equal(lag, np.arange(lag.size)):
        raise ValueError(f"{path}: lags must run 0, 1, 2, ...")
    meta_file = metadata_path(path)
    meta = read_json(meta_file) if meta_file.exists() else {"source": str(path)}
    return CovarianceFunction(vals, meta)


def write_prediction(path, ell, values, metadata: dict) -> None:
    """Limit curve on ``ell = -L..L`` in the same layout as a PRSA result."""
    write_table(path, ("ell", "z"), ell, values)
    write_json(metadata_path(path), metadata)


def write_stoch_prediction(path, pred: StochPrediction, extra: dict | None = None) -> None:
    meta = {"c": pred.c, "L": pred.L, "cov_source": pred.cov_source.metadata}
    write_prediction(path, pred.ell, pred.zeta, {**meta, **(extra or {})})
