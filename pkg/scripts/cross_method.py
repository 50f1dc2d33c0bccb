"""
Leading resonance by all three transfer-operator approximations.

The momentum-position grid is reported both as ``N`` points per axis and as
a total basis of about ``N`` points (``round(sqrt(N))`` per axis), since the
basis size can be read either way.

    python3 scripts/cross_method.py --K 7 10 17
"""

import argparse
import math

import numpy as np

from otoclab import pf


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=float, nargs="+", default=[6.6, 7.0, 10.0, 17.0])
    ap.add_argument("--N", type=int, default=90)
    ap.add_argument("--s", type=float, default=0.001)
    ap.add_argument("--M", type=int, nargs="+", default=[30, 40, 50])
    args = ap.parse_args()

    n_total = round(math.sqrt(args.N))
    head = f"{'K':>6} {'fourier':>8} {'mp N=' + str(args.N):>9} {'mp N=' + str(n_total):>8}"
    print(head + "".join(f" {'ulam M=' + str(M):>9}" for M in args.M))
    for K in args.K:
        row = [abs(pf.resonance(pf.build_fourier(K)))]
        row.append(abs(pf.resonance(pf.build_momentum_position(K, args.N, args.s))))
        try:
            row.append(abs(pf.resonance(pf.build_momentum_position(K, n_total, args.s))))
        except Exception as exc:  # coarse grids can underflow at small s
            print(f"  N={n_total}: {exc}")
            row.append(np.nan)
        for M in args.M:
            row.append(abs(pf.resonance(pf.build_ulam(K, M, 100, 1 / (2 * np.pi * M)))))
        print(f"{K:6g} " + " ".join(f"{x:8.4f}" for x in row))


if __name__ == "__main__":
    main()
