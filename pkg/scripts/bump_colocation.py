"""
Regular-area bumps against momentum-position resonance bumps over K in [8, 20].

    python3 scripts/bump_colocation.py --out out/bumps
"""

import argparse
import csv
import time
from pathlib import Path

from otoclab import classical, pf
from otoclab.config import expand_k_values
from otoclab.sweep import bump_colocation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--start", type=float, default=8.0)
    ap.add_argument("--stop", type=float, default=20.0)
    ap.add_argument("--step", type=float, default=0.25)
    ap.add_argument("--N", type=int, default=90)
    ap.add_argument("--n-total", type=int, default=100_000)
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="out/bumps")
    args = ap.parse_args()

    ks = expand_k_values({"start": args.start, "stop": args.stop, "step": args.step})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lam, area = [], []
    t0 = time.time()
    for K in ks:
        lam.append(abs(pf.resonance(pf.build_momentum_position(K, args.N))))
        area.append(classical.estimate_regular_area(K, args.n_total, args.steps,
                                                    seed=args.seed).area)
        print(f"K={K:6.2f}  |lambda1|={lam[-1]:.4f}  A_reg={area[-1]:.5f}", flush=True)
    with open(out / "bumps.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["K", "lambda1_momentum_position", "a_reg"])
        w.writerows(zip(ks, lam, area))
    for ka, kl, ok in bump_colocation(ks, area, lam):
        print(f"area peak K={ka:g}  nearest resonance peak K={kl}  {'ok' if ok else 'MISS'}")
    print(f"{time.time() - t0:.0f} s")


if __name__ == "__main__":
    main()
