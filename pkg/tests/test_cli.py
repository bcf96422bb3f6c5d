import hashlib
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from prsa import io
from prsa.scenarios import lln_arma

GOLDEN_ARMA_SHA256 = "dd256da9aed0a26e90043a92b5988f0a42ab1a83981a271b8d374f0974ed4718"


def run(*args, env=None, cwd=None):
    full_env = {**os.environ, **(env or {})}
    return subprocess.run(
        [sys.executable, "-m", "prsa.cli", *args], capture_output=True, text=True, env=full_env, cwd=cwd
    )


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_simulate_two_harmonic_rows(tmp_path):
    out = tmp_path / "t.csv"
    r = run("simulate", "two-harmonic", "--A", "0.7", "--xi1", "0.17", "--xi2", "0.43", "--n", "1000",
            "--output", str(out))
    assert r.returncode == 0, r.stderr
    assert len(out.read_text().splitlines()) == 1001
    assert io.read_json(tmp_path / "t.json")["model"] == "two-harmonic"


def test_simulate_arma_golden_and_reproducible(tmp_path):
    args = ["simulate", "arma", "--ar", "0.01,0.15", "--ma", "-0.15", "--sigma", "1", "--n", "1000", "--seed", "7"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*args, "--output", str(a)).returncode == 0
    assert run(*args, "--output", str(b), env={"PRSA_THREADS": "4"}).returncode == 0
    assert sha256(a) == sha256(b) == GOLDEN_ARMA_SHA256
    meta = io.read_json(tmp_path / "a.json")
    assert meta["seed"] == 7 and meta["n"] == 1000 and meta["sigma"] == 1.0


def test_simulate_usage_errors(tmp_path):
    r = run("simulate", "arma", "--ar", "0.5", "--seed", "1", "--output", str(tmp_path / "x.csv"))
    assert r.returncode == 2 and "--n" in r.stderr
    r = run("simulate", "arma", "--ar", "1.2", "--n", "10", "--seed", "1", "--output", str(tmp_path / "x.csv"))
    assert r.returncode == 2 and "unit circle" in r.stderr
    r = run("simulate", "gaussian", "--white-noise", "2", "--ar", "0.3", "--n", "10", "--seed", "1",
            "--output", str(tmp_path / "x.csv"))
    assert r.returncode == 2 and "exactly one" in r.stderr


def test_simulate_gaussian(tmp_path):
    out = tmp_path / "g.csv"
    assert run("simulate", "gaussian", "--ar", "0.5", "--n", "64", "--seed", "2", "--output", str(out)).returncode == 0
    assert len(io.read_series(out)) == 64


@pytest.fixture
def worked(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("index,value\n0,0\n1,1\n2,0\n3,2\n4,0\n5,3\n6,0\n")
    return p


def test_prsa_worked_example(tmp_path, worked):
    out = tmp_path / "z.csv"
    r = run("prsa", "--input", str(worked), "--c", "0", "--L", "1", "--output", str(out))
    assert r.returncode == 0, r.stderr
    assert out.read_text().splitlines()[1:] == ["-1,0", "0,2", "1,0"]
    assert io.read_json(tmp_path / "z.json")["hinge_count_used"] == 3


def test_prsa_exit_codes(tmp_path, worked):
    out = str(tmp_path / "z.csv")
    assert run("prsa", "--input", str(worked), "--c", "1e9", "--L", "1", "--output", out).returncode == 3
    over = tmp_path / "o.csv"
    over.write_text("index,value\n0,0\n1,0\n2,0\n3,1\n")
    r = run("prsa", "--input", str(over), "--c", "0", "--L", "1", "--edge-policy", "all", "--output", out)
    assert r.returncode == 2 and "outside" in r.stderr
    assert run("prsa", "--input", str(worked), "--c", "0", "--L", "3", "--output", out).returncode == 2


def test_predict_det_unit_amplitude(tmp_path):
    out = tmp_path / "d.csv"
    r = run("predict", "det", "--A", "1", "--xi1", "0.3", "--xi2", "0.7", "--c", "0", "--L", "2", "--output", str(out))
    assert r.returncode == 0, r.stderr
    meta = io.read_json(tmp_path / "d.json")
    assert meta["B1"] == pytest.approx(4 / math.pi**2, abs=1e-9)
    assert meta["B2"] == pytest.approx(4 / math.pi**2, abs=1e-9)
    ell, z = io.read_curve(out)
    b = 4 / math.pi**2
    expected = b * np.sin(np.pi * 0.3 * (2 * ell + 1)) + b * np.sin(np.pi * 0.7 * (2 * ell + 1))
    assert np.allclose(z, expected, atol=1e-9)


def test_predict_det_threshold_too_large(tmp_path):
    r = run("predict", "det", "--A", "0.7", "--xi1", "0.2", "--xi2", "0.3", "--c", "10", "--L", "2",
            "--output", str(tmp_path / "d.csv"))
    assert r.returncode == 4


def test_predict_stoch_white_noise(tmp_path):
    out = tmp_path / "p.csv"
    assert run("predict", "stoch", "--white-noise", "3", "--c", "0", "--L", "2", "--output", str(out)).returncode == 0
    _, z = io.read_curve(out)
    root = 1 / math.sqrt(math.pi)
    assert np.allclose(z, [0, -root, root, 0, 0], atol=1e-15)


def test_predict_stoch_degenerate_covariance(tmp_path):
    cov = tmp_path / "c.csv"
    cov.write_text("lag,value\n0,1\n1,1\n2,0.5\n")
    r = run("predict", "stoch", "--cov", str(cov), "--L", "1", "--output", str(tmp_path / "p.csv"))
    assert r.returncode == 4 and "C(0) > C(1)" in r.stderr


def test_recover_cov_round_trip(tmp_path):
    pred = tmp_path / "p.csv"
    assert run("predict", "stoch", "--ar", "0.5", "--c", "0.5", "--L", "3", "--output", str(pred)).returncode == 0
    out = tmp_path / "r.csv"
    d = 4 / 3 - 2 / 3
    assert run("recover-cov", "--input", str(pred), "--c", "0.5", "--c0-minus-c1", repr(d),
               "--output", str(out)).returncode == 0
    ell, diffs = io.read_table(out, ("ell", "diff"))
    gamma = lambda k: 4 / 3 * 0.5 ** np.abs(k)
    assert np.allclose(diffs, gamma(ell) - gamma(ell + 1), atol=1e-12)


def test_zeros_command():
    r = run("zeros", "--A", "0.5", "--xi", "0.3", "--T", "100")
    assert r.returncode == 0
    assert json.loads(r.stdout)["counted"] == 200


def test_pipeline_reproduces_harness_numbers(tmp_path):
    n = 100_000
    series, res, pred = tmp_path / "x.csv", tmp_path / "z.csv", tmp_path / "p.csv"
    assert run("simulate", "arma", "--ar", "0.01,0.15", "--ma", "-0.15", "--n", str(n), "--seed", "12",
               "--output", str(series)).returncode == 0
    assert run("prsa", "--input", str(series), "--c", "0", "--L", "20", "--output", str(res)).returncode == 0
    assert run("predict", "stoch", "--ar", "0.01,0.15", "--ma", "-0.15", "--k-max", "21", "--c", "0", "--L", "20",
               "--output", str(pred)).returncode == 0
    r = run("compare", "--empirical", str(res), "--predicted", str(pred))
    assert r.returncode == 0
    assert json.loads(r.stdout)["max_abs_error"] == lln_arma(n=n).max_abs_error
    assert run("compare", "--empirical", str(res), "--predicted", str(pred), "--tol", "1e-9").returncode == 5


def test_verify_unknown_scenario():
    assert run("verify", "no-such-scenario").returncode == 2


def test_verify_tolerance_breach_exit_code():
    r = run("verify", "lln-white", "--n", "2000")
    assert r.returncode == 5 and "tolerance breach" in r.stderr


def test_verify_rejects_unsupported_override():
    assert run("verify", "zero-count", "--n", "10").returncode == 2


@pytest.mark.slow
def test_verify_det_two_harmonic(tmp_path):
    out = tmp_path / "r.json"
    r = run("verify", "det-two-harmonic", "--output", str(out))
    assert r.returncode == 0, r.stdout
    rep = json.loads(out.read_text())
    assert set(rep) >= {"spec", "predicted", "empirical", "per_ell_errors", "max_abs_error", "rmse", "scaling",
                        "normality", "seeds"}
    assert rep["max_abs_error"] == max(rep["per_ell_errors"])


@pytest.mark.slow
def test_verify_clt_scaling_bit_reproducible_across_threads(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("verify", "clt-scaling", "--output", str(a), env={"PRSA_THREADS": "1"}).returncode == 0
    assert run("verify", "clt-scaling", "--output", str(b), env={"PRSA_THREADS": "3"}).returncode == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    ra.pop("runtime_s"), rb.pop("runtime_s")
    assert ra == rb
