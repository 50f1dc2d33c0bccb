"""
Command-line front end.

Subcommands
-----------
otoc      one correlator series (CSV, optional SVG)
pf        one Perron-Frobenius spectrum (CSV with JSON metadata header)
portrait  phase-portrait point cloud (CSV, optional SVG)
area      regular-area estimates for one or more K (CSV)
sweep     full K sweep from a TOML config with flag overrides
fit       exponential or power-law fit of a saved series
plot      render a saved series / sweep / portrait to SVG

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 sweep finished with failed rows.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, classical, pf, plots, quantum
from .config import SweepConfig, expand_k_values, load_config
from .errors import (ConfigError, InvalidArgumentError, NoResonanceError, NoWindowError,
                     NumericFailure, OtocLabError, ResourceLimitError)
from .fitting import (WindowPolicy, detect_exponential_window, fit_exponential, fit_power_law,
                      saturation_value)

log = logging.getLogger("otoclab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3


def _k_list(args):
    if args.k_range:
        start, stop, step = args.k_range
        return expand_k_values({"start": start, "stop": stop, "step": step})
    return list(args.K)


def cmd_otoc(args):
    params = quantum.MapParams(args.K, args.D)
    series = quantum.compute_correlators(params, args.t_max, grid=args.grid, evolve=args.evolve,
                                         d_cap=args.d_cap)
    series.to_csv(args.out)
    print(f"wrote {args.out}")
    if args.svg:
        fit = None
        try:
            fit = fit_exponential(series, detect_exponential_window(series, WindowPolicy()))
        except NoWindowError:
            log.warning("no exponential window found; plotting data only")
        plots.decay_curve(series, args.svg, fit=fit)
        print(f"wrote {args.svg}")
    return EXIT_OK


def build_operator(method, K, size, noise, seed=0, n_per_cell=100):
    if method == "fourier":
        return pf.build_fourier(K, pf.fourier_cutoff(size), 0.2 if noise is None else noise)
    if method == "momentum-position":
        return pf.build_momentum_position(K, size, 0.001 if noise is None else noise)
    if method == "ulam":
        std = 1 / (2 * np.pi * size) if noise is None else noise
        return pf.build_ulam(K, size, n_per_cell, std, seed=seed)
    raise ConfigError(f"unknown method {method!r}")


def write_spectrum(spec, path, metadata):
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(["re", "im", "modulus", "rank"])
        for i, z in enumerate(spec.eigenvalues):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z))), i])


def read_spectrum(path):
    with open(path) as fh:
        meta = json.loads(fh.readline()[1:])
        rows = list(csv.DictReader(fh))
    ev = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    return ev, meta


def cmd_pf(args):
    op = build_operator(args.method, args.K, args.size, args.noise, args.seed, args.n_per_cell)
    spec = pf.spectrum(op, count=args.count)
    meta = op.metadata()
    try:
        lam = pf.leading_resonance(spec, args.unit_tol)
        meta["lambda1"] = [lam.real, lam.imag]
        print(f"|lambda_1| = {abs(lam):.6f}  ({lam.real:+.6f}{lam.imag:+.6f}i)")
    except NoResonanceError as exc:
        print(f"no resonance: {exc}")
    write_spectrum(spec, args.out, meta)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_portrait(args):
    q, p, ids = classical.phase_portrait(args.K, args.n_ic, args.n_steps, args.seed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["q", "p", "trajectory_id"])
        for row in zip(q.tolist(), p.tolist(), ids.tolist()):
            w.writerow(row)
    print(f"wrote {args.out}")
    if args.svg:
        plots.portrait(q, p, args.svg, K=args.K)
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_area(args):
    ks = _k_list(args)
    if not ks:
        raise ConfigError("give --K values or --k-range")
    hole = classical.Hole(*args.hole)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["K", "area", "n_total", "steps"])
        for K in ks:
            est = classical.estimate_regular_area(K, args.n_total, args.steps, hole, args.seed,
                                                  workers=args.workers)
            w.writerow([repr(K), repr(est.area), est.n_total, est.steps])
            print(f"K={K:g}  A_reg={est.area:.5f}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _apply_overrides(cfg: SweepConfig, args):
    if args.K:
        cfg.k_values = list(args.K)
    if args.k_range:
        cfg.k_values = _k_list(args)
    for attr, target, name in (("D", cfg.quantum, "D"), ("t_max", cfg.quantum, "t_max"),
                               ("grid", cfg.quantum, "grid"),
                               ("fourier_truncation", cfg.pf.fourier, "truncation"),
                               ("sigma", cfg.pf.fourier, "sigma"),
                               ("mp_N", cfg.pf.momentum_position, "N"),
                               ("mp_s", cfg.pf.momentum_position, "s"),
                               ("ulam_M", cfg.pf.ulam, "M"),
                               ("n_total", cfg.area, "n_total"), ("steps", cfg.area, "steps"),
                               ("output_dir", cfg, "output_dir"), ("cache_dir", cfg, "cache_dir"),
                               ("parallelism", cfg, "parallelism"), ("seed", cfg, "seed")):
        val = getattr(args, attr)
        if val is not None:
            setattr(target, name, val)
    for flag, target in (("no_quantum", cfg.quantum), ("no_fourier", cfg.pf.fourier),
                         ("no_momentum_position", cfg.pf.momentum_position)):
        if getattr(args, flag):
            target.enabled = False
    if args.ulam:
        cfg.pf.ulam.enabled = True
    if args.area:
        cfg.area.enabled = True
    return cfg


def cmd_sweep(args):
    from .sweep import run_sweep

    cfg = load_config(args.config) if args.config else SweepConfig()
    cfg = _apply_overrides(cfg, args).validate()
    records = run_sweep(cfg)
    for r in records:
        e = r.exp_of_neg_half_gamma
        print(f"K={r.K:<7g} {r.status:<8} e^-g/2={'' if e is None else f'{e:.4f}':<7} "
              f"fourier={r.lambda1_fourier or float('nan'):.4f} "
              f"mp={r.lambda1_momentum_position or float('nan'):.4f}")
    out = Path(cfg.output_dir)
    if args.plots:
        plots.lambda_vs_k(records, out / "lambda_vs_k.svg")
        if cfg.quantum.enabled:
            plots.gamma_vs_k(records, out / "gamma_vs_k.svg")
        if cfg.area.enabled:
            plots.area_vs_k(records, out / "area_vs_k.svg")
    print(f"wrote {out / 'sweep.csv'} and {out / 'manifest.json'}")
    return EXIT_PARTIAL if any(r.status != "ok" for r in records) else EXIT_OK


def cmd_fit(args):
    series = quantum.CorrelatorSeries.from_csv(args.series)
    if args.window:
        window = tuple(args.window)
    elif args.kind == "exponential":
        window = detect_exponential_window(series, WindowPolicy(t_min_hint=args.t_min_hint))
    else:
        raise ConfigError("power-law fits need an explicit --window")
    fitter = fit_exponential if args.kind == "exponential" else fit_power_law
    res = fitter(series, window)
    out = res.as_dict()
    out["saturation"] = saturation_value(series)
    if res.kind == "exponential":
        out["exp_of_neg_half_gamma"] = float(np.exp(-res.exponent / 2))
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_plot(args):
    from .sweep import read_csv

    if args.kind == "decay-curve":
        series = quantum.CorrelatorSeries.from_csv(args.input)
        fit = None
        if args.window:
            fit = fit_exponential(series, tuple(args.window))
        plots.decay_curve(series, args.out, fit=fit)
    elif args.kind == "portrait":
        with open(args.input, newline="") as fh:
            rows = list(csv.DictReader(fh))
        q = np.array([float(r["q"]) for r in rows])
        p = np.array([float(r["p"]) for r in rows])
        plots.portrait(q, p, args.out)
    else:
        plots.emit_plot(read_csv(args.input), args.kind, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(prog="otoclab", description=__doc__.split("\n\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("otoc", help="compute O1, O2, C for one (K, D)")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--D", type=int, default=1000)
    p.add_argument("--t-max", type=int, default=36)
    p.add_argument("--grid", choices=quantum.GRIDS, default="positive")
    p.add_argument("--evolve", choices=("P", "X"), default="P")
    p.add_argument("--d-cap", type=int, default=quantum.D_CAP)
    p.add_argument("--out", default="series.csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_otoc)

    p = sub.add_parser("pf", help="spectrum of one Perron-Frobenius approximation")
    p.add_argument("--method", choices=pf.METHODS, default="fourier")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--size", type=int, default=30,
                   help="fourier: modes per axis; momentum-position: N per axis; ulam: M")
    p.add_argument("--noise", type=float,
                   help="sigma / s / Gaussian std (defaults 0.2 / 0.001 / 1/(2 pi M))")
    p.add_argument("--n-per-cell", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, help="leading eigenvalues only (iterative)")
    p.add_argument("--unit-tol", type=float, default=1e-6)
    p.add_argument("--out", default="spectrum.csv")
    p.set_defaults(func=cmd_pf)

    p = sub.add_parser("portrait", help="phase-portrait point cloud")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--n-ic", type=int, default=200)
    p.add_argument("--n-steps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="portrait.csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("area", help="regular-area estimates by the hole method")
    p.add_argument("--K", type=float, nargs="*", default=[])
    p.add_argument("--k-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    p.add_argument("--n-total", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--hole", type=float, nargs=4, default=[0.0, 0.1, 0.0, 0.1],
                   metavar=("Q0", "Q1", "P0", "P1"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="area.csv")
    p.set_defaults(func=cmd_area)

    p = sub.add_parser("sweep", help="K sweep: decay rates, resonances, regular areas")
    p.add_argument("--config")
    p.add_argument("--K", type=float, nargs="*", default=[])
    p.add_argument("--k-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    p.add_argument("--D", type=int)
    p.add_argument("--t-max", type=int)
    p.add_argument("--grid", choices=quantum.GRIDS)
    p.add_argument("--fourier-truncation", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--mp-N", type=int)
    p.add_argument("--mp-s", type=float)
    p.add_argument("--ulam-M", type=int)
    p.add_argument("--n-total", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--output-dir")
    p.add_argument("--cache-dir")
    p.add_argument("--parallelism", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--no-quantum", action="store_true")
    p.add_argument("--no-fourier", action="store_true")
    p.add_argument("--no-momentum-position", action="store_true")
    p.add_argument("--ulam", action="store_true", help="enable the Ulam method")
    p.add_argument("--area", action="store_true", help="enable regular-area estimation")
    p.add_argument("--plots", action="store_true", help="also write SVG figures")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit a saved correlator series")
    p.add_argument("series")
    p.add_argument("--kind", choices=("exponential", "power-law"), default="exponential")
    p.add_argument("--window", type=int, nargs=2, metavar=("T0", "T1"))
    p.add_argument("--t-min-hint", type=int)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="render saved data to SVG")
    p.add_argument("--kind", choices=plots.KINDS, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--window", type=int, nargs=2, metavar=("T0", "T1"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, InvalidArgumentError, ResourceLimitError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericFailure, NoWindowError, NoResonanceError, OtocLabError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
