"""
|lambda_1| of the Fourier-basis operator against truncation, with and without noise.

    python3 scripts/fourier_convergence.py --K 6.6 17
"""

import argparse

from otoclab import pf


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=float, nargs="+", default=[6.6, 17.0])
    ap.add_argument("--sigma", type=float, nargs="+", default=[0.0, 0.2])
    ap.add_argument("--T", type=int, nargs=2, default=[10, 40], metavar=("MIN", "MAX"))
    args = ap.parse_args()

    for K in args.K:
        for sigma in args.sigma:
            print(f"K={K:g} sigma={sigma:g}")
            for T in range(args.T[0], args.T[1] + 1, 2):
                lam = pf.resonance(pf.build_fourier(K, pf.fourier_cutoff(T), sigma))
                print(f"  T={T:3d}  modes={(2 * (T // 2) + 1) ** 2:5d}  |l1|={abs(lam):.5f}")


if __name__ == "__main__":
    main()
