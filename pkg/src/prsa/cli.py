"""Command-line entry point ``prsa``.

Exit codes: 0 ok, 2 usage or invalid model, 3 no hinge point,
4 theorem hypothesis violated, 5 verification failure.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys

import numpy as np

from . import io
from .core import compute_prsa
from .errors import DomainError, NoHingeError, PrsaError
from .numerics import make_rng, seed_label
from .scenarios import SCENARIOS, run_scenario
from .signals import (
    ArmaParams,
    CovarianceFunction,
    TwoHarmonicParams,
    arma_autocovariance,
    sample_stationary_gaussian,
    sample_two_harmonic,
    simulate_arma,
)
from .theory_det import count_zeros, count_zeros_phase_averaged, det_limit_coeffs, expected_zero_rate
from .theory_stoch import threshold_factor, lln_limit_vector, recover_covariance_diffs

EXIT_OK, EXIT_USAGE, EXIT_NO_HINGE, EXIT_HYPOTHESIS, EXIT_VERIFY = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _floats(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def _covariance_source(args) -> CovarianceFunction:
    """Exactly one of --cov, --white-noise, --ar/--ma."""
    given = [args.cov is not None, args.white_noise is not None, bool(args.ar or args.ma)]
    if sum(given) != 1:
        raise UsageError("give exactly one covariance source: --cov, --white-noise or --ar/--ma")
    if args.cov is not None:
        return io.read_covariance(args.cov)
    if args.white_noise is not None:
        return CovarianceFunction.white_noise(args.white_noise)
    params = ArmaParams(args.ar, args.ma, args.sigma)
    return arma_autocovariance(params, args.k_max)


def cmd_simulate(args) -> int:
    meta = {"n": args.n, "model": args.model}
    if args.model == "two-harmonic":
        p = TwoHarmonicParams(args.A, args.xi1, args.xi2, args.phi1, args.phi2)
        series = sample_two_harmonic(p, args.origin, args.origin + args.n)
        meta.update(A=p.A, xi1=p.xi1, xi2=p.xi2, phi1=p.phi1, phi2=p.phi2)
    elif args.model == "arma":
        p = ArmaParams(args.ar, args.ma, args.sigma)
        burn = p.default_burn_in() if args.burn_in is None else args.burn_in
        series = simulate_arma(p, args.n, make_rng(args.seed), burn_in=burn)
        meta.update(ar=list(p.ar), ma=list(p.ma), sigma=p.sigma, burn_in=burn,
                    seed=args.seed, rng=seed_label(args.seed))
    else:
        cov = _covariance_source(args)
        series = sample_stationary_gaussian(cov, args.n, make_rng(args.seed))
        meta.update(covariance=cov.values.tolist(), seed=args.seed, rng=seed_label(args.seed),
                    method="circulant-embedding")
    io.write_series(args.output, series, meta)
    return EXIT_OK


# --------------------------------------------------------------------------
# prsa
# --------------------------------------------------------------------------

def cmd_prsa(args) -> int:
    series = io.read_series(args.input)
    res = compute_prsa(series, args.c, args.L, args.edge_policy)
    io.write_prsa(args.output, res, len(series), {"input": args.input})
    return EXIT_OK


# --------------------------------------------------------------------------
# predict
# --------------------------------------------------------------------------

def cmd_predict(args) -> int:
    ell = np.arange(-args.L, args.L + 1)
    if args.kind == "det":
        pred = det_limit_coeffs(args.A, args.xi1, args.xi2, args.c)
        meta = {"kind": "det", "A": args.A, "xi1": args.xi1, "xi2": args.xi2, "c": args.c,
                "L": args.L, "B1": pred.B1, "B2": pred.B2}
        io.write_prediction(args.output, ell, pred.curve(ell), meta)
    else:
        cov = _covariance_source(args)
        pred = lln_limit_vector(cov, args.c, args.L)
        d = cov(0) - cov(1)
        io.write_stoch_prediction(
            args.output, pred, {"kind": "stoch", "c0_minus_c1": d, "scale": threshold_factor(d, args.c)}
        )
    return EXIT_OK


# --------------------------------------------------------------------------
# zeros, recover-cov, compare
# --------------------------------------------------------------------------

def cmd_zeros(args) -> int:
    if args.phase_strata:
        counted = count_zeros_phase_averaged(args.A, args.xi, args.T, args.phase_strata, args.dt, args.phi1)
    else:
        counted = count_zeros(args.A, args.xi, args.T, args.dt, args.phi1, args.phi2)
    rate = expected_zero_rate(args.A, args.xi)
    _emit({"A": args.A, "xi": args.xi, "T": args.T, "dt": args.dt, "counted": counted,
           "expected": rate * args.T, "expected_rate": rate,
           "relative_error": abs(counted - rate * args.T) / (rate * args.T)})
    return EXIT_OK


def cmd_recover_cov(args) -> int:
    ell, zeta = io.read_curve(args.input)
    L = (ell.size - 1) // 2
    if not np.array_equal(ell, np.arange(-L, L + 1)):
        raise UsageError(f"{args.input}: ell column must run -L..L")
    diffs = recover_covariance_diffs(zeta, args.c0_minus_c1, c=args.c)
    io.write_table(args.output, ("ell", "diff"), ell, diffs)
    return EXIT_OK


def cmd_compare(args) -> int:
    from .harness import compare_curves

    e_ell, emp = io.read_curve(args.empirical)
    p_ell, pred = io.read_curve(args.predicted)
    if not np.array_equal(e_ell, p_ell):
        raise UsageError("empirical and predicted curves have different ell grids")
    report = compare_curves(emp, pred, empirical_file=args.empirical, predicted_file=args.predicted).to_dict()
    if args.output:
        io.write_json(args.output, report)
    else:
        _emit(report)
    if args.tol is not None and report["max_abs_error"] > args.tol:
        print(f"max_abs_error {report['max_abs_error']:.6g} exceeds {args.tol:g}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def cmd_verify(args) -> int:
    fn = SCENARIOS[args.scenario]
    accepted = inspect.signature(fn).parameters
    kwargs = {}
    for name in ("n", "seed", "replicates"):
        value = getattr(args, name)
        if value is None:
            continue
        if name not in accepted:
            raise UsageError(f"scenario {args.scenario} does not take --{name}")
        kwargs[name] = value
    report = run_scenario(args.scenario, **kwargs)
    payload = report.to_dict()
    if args.output:
        io.write_json(args.output, payload)
    for ch in report.checks:
        print(ch.line())
    status = "PASS" if report.passed else "FAIL"
    print(f"{status} {report.name} ({report.runtime_s:.2f} s)")
    if not report.passed:
        bad = report.failing()[0]
        print(f"tolerance breach: {bad.metric} = {bad.value:.6g}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_cov_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cov", help="covariance CSV with header lag,value")
    p.add_argument("--white-noise", type=int, metavar="K_MAX", help="unit white-noise table up to lag K_MAX")
    p.add_argument("--ar", type=_floats, default=(), help="AR coefficients, comma separated")
    p.add_argument("--ma", type=_floats, default=(), help="MA coefficients, comma separated")
    p.add_argument("--sigma", type=float, default=1.0, help="innovation standard deviation (default 1)")
    p.add_argument("--k-max", type=int, default=64, help="autocovariance table length for --ar/--ma")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prsa", description="Phase-rectified signal averaging toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a time series CSV")
    models = sim.add_subparsers(dest="model", required=True)
    th = models.add_parser("two-harmonic", help="cos(2 pi xi1 m + phi1) + A cos(2 pi xi2 m + phi2)")
    th.add_argument("--A", type=float, required=True)
    th.add_argument("--xi1", type=float, required=True)
    th.add_argument("--xi2", type=float, required=True)
    th.add_argument("--phi1", type=float, default=0.0)
    th.add_argument("--phi2", type=float, default=0.0)
    th.add_argument("--origin", type=int, default=0, help="index of the first sample")
    arma = models.add_parser("arma", help="Gaussian ARMA(p, q)")
    arma.add_argument("--ar", type=_floats, default=())
    arma.add_argument("--ma", type=_floats, default=())
    arma.add_argument("--sigma", type=float, default=1.0, help="innovation standard deviation (default 1)")
    arma.add_argument("--burn-in", type=int, default=None)
    gauss = models.add_parser("gaussian", help="stationary Gaussian sequence by circulant embedding")
    _add_cov_source(gauss)
    for p in (th, arma, gauss):
        p.add_argument("--n", type=int, required=True, help="number of samples")
        p.add_argument("--output", required=True, help="CSV path; metadata goes next to it as .json")
        if p is not th:
            p.add_argument("--seed", type=int, required=True)
    sim.set_defaults(func=cmd_simulate)

    pr = sub.add_parser("prsa", help="run PRSA on a series CSV")
    pr.add_argument("--input", required=True)
    pr.add_argument("--c", type=float, required=True, help="hinge threshold")
    pr.add_argument("--L", type=int, required=True, help="half window")
    pr.add_argument("--edge-policy", choices=("truncate", "all"), default="truncate")
    pr.add_argument("--output", required=True)
    pr.set_defaults(func=cmd_prsa)

    pred = sub.add_parser("predict", help="write a limit curve")
    kinds = pred.add_subparsers(dest="kind", required=True)
    det = kinds.add_parser("det", help="two-harmonic deterministic limit")
    det.add_argument("--A", type=float, required=True)
    det.add_argument("--xi1", type=float, required=True)
    det.add_argument("--xi2", type=float, required=True)
    stoch = kinds.add_parser("stoch", help="stationary Gaussian law-of-large-numbers limit")
    _add_cov_source(stoch)
    for p in (det, stoch):
        p.add_argument("--c", type=float, default=0.0)
        p.add_argument("--L", type=int, required=True)
        p.add_argument("--output", required=True)
    pred.set_defaults(func=cmd_predict)

    z = sub.add_parser("zeros", help="count zeros of the continuous two-harmonic function")
    z.add_argument("--A", type=float, required=True)
    z.add_argument("--xi", type=float, required=True)
    z.add_argument("--T", type=float, required=True)
    z.add_argument("--dt", type=float, default=1e-3)
    z.add_argument("--phi1", type=float, default=0.3)
    z.add_argument("--phi2", type=float, default=1.1)
    z.add_argument("--phase-strata", type=int, default=0, help="average over this many phi2 values")
    z.set_defaults(func=cmd_zeros)

    rc = sub.add_parser("recover-cov", help="covariance differences C(l) - C(l+1) from a limit curve")
    rc.add_argument("--input", required=True, help="curve CSV with header ell,z")
    rc.add_argument("--c", type=float, required=True)
    rc.add_argument("--c0-minus-c1", type=float, required=True)
    rc.add_argument("--output", required=True)
    rc.set_defaults(func=cmd_recover_cov)

    cmp_ = sub.add_parser("compare", help="compare an empirical curve with a prediction")
    cmp_.add_argument("--empirical", required=True)
    cmp_.add_argument("--predicted", required=True)
    cmp_.add_argument("--tol", type=float, default=None, help="exit 5 if max_abs_error exceeds this")
    cmp_.add_argument("--output", default=None)
    cmp_.set_defaults(func=cmd_compare)

    ver = sub.add_parser("verify", help="run a verification scenario")
    ver.add_argument("scenario", help=", ".join(SCENARIOS))
    ver.add_argument("--n", type=int, default=None, help="override the series length")
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--replicates", type=int, default=None)
    ver.add_argument("--output", default=None, help="report JSON path")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.scenario not in SCENARIOS:
        parser.error(f"unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}")
    try:
        return args.func(args)
    except NoHingeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_HINGE
    except DomainError as exc:
        print(f"error: hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (UsageError, PrsaError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
