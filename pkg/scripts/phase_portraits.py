"""
Phase portraits of the standard map on the unit torus.

    python3 scripts/phase_portraits.py --K 0.4 6.6 17 18.86
"""

import argparse
from pathlib import Path

from otoclab import classical, plots


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=float, nargs="+", default=[0.4, 0.971635, 6.6, 17.0, 18.86])
    ap.add_argument("--n-ic", type=int, default=300)
    ap.add_argument("--n-steps", type=int, default=1000)
    ap.add_argument("--out", default="out/portraits")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for K in args.K:
        q, p, _ = classical.phase_portrait(K, args.n_ic, args.n_steps, seed=0)
        path = plots.portrait(q, p, out / f"portrait_K{K:g}.svg", K=K)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
