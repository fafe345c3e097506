"""Plot the CSVs written by learning_curves.py and taps_sweep.py (needs matplotlib)."""
import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) if k != "mask" else r[k] for r in rows] for k in rows[0]}


def plot_curves(paths, out):
    fig, ax = plt.subplots(figsize=(7, 4))
    for path in paths:
        c = read(path)
        line, = ax.plot(c["iteration"], c["emse_db"], lw=0.8, label=Path(path).stem)
        ax.axhline(c["emse_theory_db"][0], color=line.get_color(), ls="--", lw=1)
    ax.set(xlabel="iteration", ylabel="EMSE (dB)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_sweep(path, out):
    c = read(path)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
    for name in dict.fromkeys(c["mask"]):
        idx = [i for i, m in enumerate(c["mask"]) if m == name and not c["unstable"][i]]
        taps = [c["M"][i] for i in idx]
        for ax, key in zip(axes, ("mse", "emse")):
            line, = ax.plot(taps, [c[f"{key}_db"][i] for i in idx], "o", label=name)
            ax.plot(taps, [c[f"{key}_theory_db"][i] for i in idx], "-", color=line.get_color())
    for ax, key in zip(axes, ("MSE", "EMSE")):
        ax.set(xlabel="taps M", ylabel=f"steady-state {key} (dB)")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--curves", nargs="*", default=sorted(Path("results/learning_curves").glob("*.csv")))
    p.add_argument("--sweep", default="results/taps_sweep.csv")
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args()
    if args.curves:
        plot_curves(args.curves, args.out / "learning_curves.png")
        print(args.out / "learning_curves.png")
    if Path(args.sweep).exists():
        plot_sweep(args.sweep, args.out / "taps_sweep.png")
        print(args.out / "taps_sweep.png")


if __name__ == "__main__":
    main()
