"""
Decay rate of |O1| against the Fourier resonance at K = 6.6 and 17.

Writes the two series, their decay plots and a summary table to ``--out``.

    python3 scripts/decay_vs_resonance.py --D 1000
"""

import argparse
from pathlib import Path

import numpy as np

from otoclab import pf, plots
from otoclab.fitting import WindowPolicy, detect_exponential_window, fit_exponential
from otoclab.quantum import MapParams, compute_correlators


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=float, nargs="+", default=[6.6, 17.0])
    ap.add_argument("--D", type=int, default=1000)
    ap.add_argument("--t-max", type=int, default=36)
    ap.add_argument("--truncation", type=int, default=30)
    ap.add_argument("--sigma", type=float, default=0.2)
    ap.add_argument("--out", default="out/decay")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(f"{'K':>6} {'window':>9} {'gamma':>7} {'e^-g/2':>7} {'|l1|':>7} {'rel':>6}")
    for K in args.K:
        s = compute_correlators(MapParams(K, args.D), args.t_max)
        s.to_csv(out / f"series_K{K:g}.csv")
        fit = fit_exponential(s, detect_exponential_window(s, WindowPolicy()))
        plots.decay_curve(s, out / f"decay_K{K:g}.svg", fit=fit)
        lam = abs(pf.resonance(pf.build_fourier(K, pf.fourier_cutoff(args.truncation), args.sigma)))
        e = np.exp(-fit.exponent / 2)
        print(f"{K:6g} {str(list(fit.window)):>9} {fit.exponent:7.4f} {e:7.4f} {lam:7.4f} "
              f"{abs(e - lam) / lam:6.3f}")


if __name__ == "__main__":
    main()
