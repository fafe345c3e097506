"""Steady-state MSE and EMSE against the number of taps for each subalgebra."""
import argparse
import csv
from pathlib import Path

from gaaf.algebra import NAMED_MASKS
from gaaf.cli import parse_taps
from gaaf.sim import ExperimentConfig, sweep_taps
from gaaf.theory import db


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--masks", nargs="+", default=list(NAMED_MASKS))
    p.add_argument("--taps", default="1,5,10,20,40", help='e.g. "1-40"')
    p.add_argument("--sigma-v2", type=float, default=1e-3)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--out", type=Path, default=Path("results/taps_sweep.csv"))
    args = p.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mask", "M", "mse_db", "emse_db", "mse_theory_db", "emse_theory_db", "unstable"])
        for name in args.masks:
            base = ExperimentConfig(mask=name, sigma_v2=args.sigma_v2, runs=args.runs, iterations=args.iterations)
            for r in sweep_taps(base, parse_taps(args.taps)):
                w.writerow([name, r.taps, db(r.mse_ss), db(r.emse_ss), db(r.mse_theory), db(r.emse_theory),
                            int(r.unstable)])
                print(f"{name:8s} M={r.taps:3d}  EMSE {db(r.emse_ss):7.2f} dB  theory {db(r.emse_theory):7.2f} dB")
    print(args.out)


if __name__ == "__main__":
    main()
