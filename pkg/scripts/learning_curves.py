"""Learning curves of the full-algebra filter at several noise levels.

Writes one CSV per noise level into --out, with the theory line alongside.
"""
import argparse
import csv
from pathlib import Path

from gaaf.sim import ExperimentConfig, run_experiment, steady_state
from gaaf.theory import db, emse_theory, mse_theory


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--mask", default="full3")
    p.add_argument("--taps", type=int, default=10)
    p.add_argument("--noise", type=float, nargs="+", default=[1e-2, 1e-3, 1e-5])
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("results/learning_curves"))
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for sv in args.noise:
        cfg = ExperimentConfig(mask=args.mask, taps=args.taps, sigma_v2=sv, runs=args.runs,
                               iterations=args.iterations, seed=args.seed)
        curve = run_experiment(cfg)
        t = cfg.theory()
        mse_th, emse_th = mse_theory(t), emse_theory(t)
        path = args.out / f"{args.mask}_M{args.taps}_sv{sv:g}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "mse_db", "emse_db", "mse_theory_db", "emse_theory_db"])
            for i, (m, e) in enumerate(zip(curve.mse, curve.emse)):
                w.writerow([i, db(m), db(e), db(mse_th), db(emse_th)])
        mse_ss, emse_ss = steady_state(curve)
        print(f"{path}: EMSE {db(emse_ss):.2f} dB (theory {db(emse_th):.2f}), "
              f"MSE {db(mse_ss):.2f} dB (theory {db(mse_th):.2f})")


if __name__ == "__main__":
    main()
