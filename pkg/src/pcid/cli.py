"""Command line interface: detect, simulate, calibrate, bench.

Exit codes: 0 on success, 1 on input/output problems, 2 on configuration
errors (argparse's own usage errors also exit with 2).  The seed is taken
from --seed, else the PCID_SEED environment variable, else 0; every
subcommand is deterministic for a fixed seed, except for the wall-time
column that bench reports.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import bench as bench_mod
from .calibration import embedded_table, estimate_type1
from .circular import wrap_angle
from .dependent import SubsampleConfig, detect_correlated
from .engine import PcidConfig, pcid_windowed
from .io import ResultDocument, SeriesLoadError, load_series
from .metrics import ari, hausdorff_scaled
from .permutation import b_from_alpha
from .signals import NoiseSpec, SignalSpec, builtin_signal, builtin_signal_ids, generate, signal_values


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PCID_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"PCID_SEED must be an integer, got {env!r}") from None
    return 0


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: $PCID_SEED, else 0)")


def _add_level_options(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, choices=(0.01, 0.05), default=None,
                       help="target end-to-end Type-I error")
    group.add_argument("--alpha", type=float, default=None,
                       help="explicit per-test level (requires --B)")
    parser.add_argument("--B", dest="n_permutations", type=int, default=None,
                        help="permutation count for --alpha")


def _level_kwargs(args):
    """gamma/alpha/B keyword arguments for PcidConfig from parsed flags."""
    if args.alpha is not None:
        if args.n_permutations is None:
            args.n_permutations = b_from_alpha(args.alpha)
        return dict(gamma=None, alpha=args.alpha, n_permutations=args.n_permutations)
    if args.n_permutations is not None:
        raise ValueError("--B requires --alpha")
    gamma = args.gamma if args.gamma is not None else 0.05
    return dict(gamma=gamma, alpha=None, n_permutations=None)


def _noise_from_args(args):
    family = args.noise
    if family == "none":
        return None
    if family == "von_mises":
        return NoiseSpec("von_mises", args.kappa)
    if family == "wrapped_cauchy":
        if args.rho is None:
            raise ValueError("wrapped_cauchy noise requires --rho")
        return NoiseSpec("wrapped_cauchy", args.rho)
    if family == "wrapped_normal":
        if args.beta is None:
            raise ValueError("wrapped_normal noise requires --beta")
        return NoiseSpec("wrapped_normal", args.beta)
    if args.phi is None:
        raise ValueError("ar1 noise requires --phi")
    return NoiseSpec("ar1", ar_phi=args.phi, innovation_kappa=args.innovation_kappa)


def _add_noise_options(parser, default_family="von_mises", default_kappa=2.0):
    parser.add_argument("--noise", default=default_family,
                        choices=("von_mises", "wrapped_cauchy", "wrapped_normal", "ar1", "none"),
                        help="noise family")
    parser.add_argument("--kappa", type=float, default=default_kappa,
                        help="von Mises concentration")
    parser.add_argument("--rho", type=float, default=None,
                        help="wrapped Cauchy concentration")
    parser.add_argument("--beta", type=float, default=None,
                        help="wrapped normal concentration")
    parser.add_argument("--phi", type=float, default=None,
                        help="AR(1) coefficient")
    parser.add_argument("--innovation-kappa", type=float, default=1.7,
                        help="von Mises concentration of AR(1) innovations")


def _open_output(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _cmd_detect(args):
    seed = _resolve_seed(args)
    series = load_series(args.input, units=args.units, column=args.column,
                         header=args.header)
    cfg = PcidConfig(lam=args.lam, window=args.window,
                     allow_sub_milli_alpha=args.allow_sub_milli_alpha,
                     seed=seed, **_level_kwargs(args))
    sub_flags = (args.nu, args.eta, args.delta)
    if any(v is not None for v in sub_flags):
        if any(v is None for v in sub_flags):
            raise ValueError("--nu, --eta and --delta must be given together")
        result = detect_correlated(series, SubsampleConfig(args.nu, args.eta, args.delta), cfg)
    else:
        result = pcid_windowed(series, cfg)

    config_echo = {
        "input": args.input,
        "units": args.units,
        "lambda": cfg.lam,
        "gamma": cfg.gamma,
        "alpha": cfg.alpha,
        "n_permutations": cfg.n_permutations,
        "window": cfg.window,
        "seed": seed,
        "nu": args.nu,
        "eta": args.eta,
        "delta": args.delta,
        "resolved": [
            {"s": p.s, "e": p.e, "alpha": p.alpha, "n_permutations": p.n_permutations}
            for p in result.params
        ],
    }
    metrics = None
    if args.true_changepoints:
        truth = tuple(int(v) for v in args.true_changepoints.split(","))
        metrics = {
            "ari": ari(truth, result.changepoints, len(series)),
            "hausdorff": hausdorff_scaled(truth, result.changepoints, len(series)),
            "n_diff": result.n_hat - len(truth),
        }
    doc = ResultDocument.from_result(result, config_echo,
                                     include_audit=args.audit, metrics=metrics)
    print(doc.to_json())

    if args.emit_fit:
        edges = (0,) + tuple(result.changepoints) + (len(series),)
        fitted = []
        for mean, (a, b) in zip(result.segment_means, zip(edges, edges[1:])):
            fitted.extend([mean] * (b - a))
        with open(args.emit_fit, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t", "theta", "fitted"])
            for t, (theta, fit) in enumerate(zip(series.values, fitted), start=1):
                writer.writerow([t, repr(float(theta)), repr(float(fit))])
    return 0


def _parse_signal_args(args):
    if args.signal is not None:
        if args.length is not None or args.changepoints or args.levels:
            raise ValueError("give either --signal or an explicit --length/--changepoints/--levels")
        return builtin_signal(args.signal)
    if args.length is None:
        raise ValueError("either --signal or --length is required")
    cps = tuple(int(v) for v in args.changepoints.split(",")) if args.changepoints else ()
    levels = tuple(float(v) for v in args.levels.split(",")) if args.levels else (0.0,)
    return SignalSpec(args.length, cps, levels)


def _cmd_simulate(args):
    seed = _resolve_seed(args)
    spec = _parse_signal_args(args)
    noise = _noise_from_args(args)
    series = generate(spec, noise, seed)
    truth = wrap_angle(signal_values(spec))
    handle, owned = _open_output(args.output)
    try:
        writer = csv.writer(handle)
        writer.writerow(["t", "theta", "f"])
        for t, (theta, f) in enumerate(zip(series.values, truth), start=1):
            writer.writerow([t, repr(float(theta)), repr(float(f))])
    finally:
        if owned:
            handle.close()
    return 0


def _cmd_calibrate(args):
    seed = _resolve_seed(args)
    rows = []
    for length in args.length:
        if args.alpha:
            alphas = args.alpha
        else:
            column = 50 * int(length / 50 + 0.5)
            column = min(500, max(50, column))
            alphas = [a for a, _ in embedded_table().column(column)]
        for alpha in alphas:
            est = estimate_type1(
                length, alpha, args.n_permutations, lam=args.lam,
                n_sims=args.n_sims, noise=_noise_from_args(args), seed=seed,
                n_jobs=args.jobs,
            )
            rows.append(est)
    handle, owned = _open_output(args.output)
    try:
        writer = csv.writer(handle)
        writer.writerow(["T", "alpha", "B", "n_sims", "gamma_hat", "se"])
        for est in rows:
            writer.writerow([est.length, est.alpha, est.n_permutations,
                             est.n_sims, repr(est.gamma_hat), repr(est.se)])
    finally:
        if owned:
            handle.close()
    return 0


def _cmd_bench(args):
    seed = _resolve_seed(args)
    if args.full:
        scenarios = bench_mod.full_grid(replicates=args.replicates)
    else:
        level = _level_kwargs(args)
        scenario = dict(
            signal_id=args.signal,
            noise=_noise_from_args(args),
            gamma=level["gamma"], alpha=level["alpha"],
            n_permutations=level["n_permutations"],
            method=args.method, lam=args.lam, window=args.window,
            nu=args.nu, eta=args.eta, delta=args.delta,
            replicates=args.replicates,
        )
        if args.method == "correlated" and args.nu is None:
            raise ValueError("correlated method requires --nu, --eta and --delta")
        scenarios = [scenario]
    rows = []
    for scenario in scenarios:
        rows.append(bench_mod.run_scenario(seed=seed, n_jobs=args.jobs, **scenario))
    handle, owned = _open_output(args.output)
    try:
        bench_mod.write_rows(rows, handle)
    finally:
        if owned:
            handle.close()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pcid",
        description="Multiple change-point detection in the mean direction of angular time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="detect change-points in a CSV series")
    p_detect.add_argument("--input", required=True, help="CSV file, one observation per row")
    p_detect.add_argument("--units", choices=("radians", "degrees"), default="radians")
    p_detect.add_argument("--column", type=int, default=0, help="0-based input column")
    p_detect.add_argument("--header", action="store_true", help="skip the first row")
    _add_level_options(p_detect)
    p_detect.add_argument("--lambda", dest="lam", type=int, default=5,
                          help="interval expansion step")
    p_detect.add_argument("--window", type=int, default=500,
                          help="maximum scan window for long series")
    p_detect.add_argument("--allow-sub-milli-alpha", action="store_true",
                          help="do not floor grid-selected alphas below 0.001")
    p_detect.add_argument("--nu", type=int, default=None,
                          help="subsample into nu subsequences (serially correlated data)")
    p_detect.add_argument("--eta", type=int, default=None,
                          help="votes required to accept a location")
    p_detect.add_argument("--delta", type=int, default=None,
                          help="vote clustering tolerance, in subsequence positions")
    p_detect.add_argument("--audit", action="store_true",
                          help="include the permutation-test log in the output")
    p_detect.add_argument("--emit-fit", default=None, metavar="PATH",
                          help="also write t,theta,fitted CSV")
    p_detect.add_argument("--true-changepoints", default=None, metavar="R1,R2,...",
                          help="known truth; adds accuracy metrics to the output")
    _add_seed(p_detect)
    p_detect.set_defaults(func=_cmd_detect)

    p_sim = sub.add_parser("simulate", help="generate a synthetic angular series")
    p_sim.add_argument("--signal", choices=builtin_signal_ids(), default=None,
                       help="one of the study signals")
    p_sim.add_argument("--length", type=int, default=None, help="explicit signal length")
    p_sim.add_argument("--changepoints", default=None, metavar="R1,R2,...")
    p_sim.add_argument("--levels", default=None, metavar="L0,L1,...")
    _add_noise_options(p_sim)
    p_sim.add_argument("--output", default=None, help="CSV path (default: stdout)")
    _add_seed(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_cal = sub.add_parser("calibrate", help="re-estimate the Type-I error grid")
    p_cal.add_argument("--length", "-T", dest="length", type=int, nargs="+", required=True,
                       help="sequence length(s)")
    p_cal.add_argument("--alpha", type=float, nargs="+", default=None,
                       help="per-test level(s); default: the embedded grid column")
    p_cal.add_argument("--B", dest="n_permutations", type=int, default=10000,
                       help="permutation count (the grid was estimated with 10000)")
    p_cal.add_argument("--n-sims", type=int, default=300, help="replicates per cell")
    p_cal.add_argument("--lambda", dest="lam", type=int, default=5)
    _add_noise_options(p_cal)
    p_cal.add_argument("--output", default=None, help="CSV path (default: stdout)")
    p_cal.add_argument("--jobs", type=int, default=1, help="parallel workers")
    _add_seed(p_cal)
    p_cal.set_defaults(func=_cmd_calibrate)

    p_bench = sub.add_parser("bench", help="replicated accuracy/timing scenarios")
    p_bench.add_argument("--signal", choices=builtin_signal_ids(), default="S4")
    _add_level_options(p_bench)
    _add_noise_options(p_bench, default_kappa=4.0)
    p_bench.add_argument("--method", choices=("windowed", "plain", "correlated"),
                         default="windowed")
    p_bench.add_argument("--lambda", dest="lam", type=int, default=5)
    p_bench.add_argument("--window", type=int, default=500)
    p_bench.add_argument("--nu", type=int, default=None)
    p_bench.add_argument("--eta", type=int, default=None)
    p_bench.add_argument("--delta", type=int, default=None)
    p_bench.add_argument("--replicates", type=int, default=100)
    p_bench.add_argument("--full", action="store_true",
                         help="run the whole simulation-study grid instead of one "
                              "scenario; expect hours of single-core runtime")
    p_bench.add_argument("--output", default=None, help="CSV path (default: stdout)")
    p_bench.add_argument("--jobs", type=int, default=1, help="parallel workers")
    _add_seed(p_bench)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SeriesLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
