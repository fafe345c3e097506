"""Command-line front end.

    gaaf run   [--config FILE] [flags]   -> learning_curve.csv, summary.csv
    gaaf sweep [--config FILE] [flags]   -> sweep.csv
    gaaf table N                         -> Cayley table of G(R^N) on stdout

Config files hold ``key = value`` lines (``#`` starts a comment) using the
flag names without dashes, e.g. ``sigma-v2 = 1e-3``; flags override the file.
Every run also writes ``manifest.json`` listing the emitted files with their
SHA-256 digests.

Exit codes: 0 success, 1 internal error, 2 configuration error, 3 step size
outside the stability region.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence

from .algebra import MAX_DIM, NAMED_MASKS, format_cayley_table
from .errors import Unstable
from .sim import ExperimentConfig, run_experiment, steady_state, sweep_taps
from .theory import db, emse_theory, mse_theory

EXIT_INTERNAL, EXIT_CONFIG, EXIT_UNSTABLE = 1, 2, 3

# key -> (parser, default)
OPTIONS = {
    "mask": (str, "full3"),
    "taps": (int, 10),
    "mu": (float, 0.005),
    "sigma_v2": (float, 1e-3),
    "sigma_u2": (float, 1.0),
    "runs": (int, 100),
    "iterations": (int, 5000),
    "seed": (int, 0),
    "out": (str, "."),
    "sweep": (str, "1-40"),
    "window": (int, 200),
}


class ConfigError(Exception):
    pass


def num(x: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def read_config(path: str | Path) -> dict[str, str]:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def resolve(args: argparse.Namespace) -> dict:
    """Defaults, then config file, then explicit flags."""
    raw: dict[str, object] = {}
    if args.config:
        raw.update(read_config(args.config))
    for key in OPTIONS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    opts = {}
    for key, (kind, default) in OPTIONS.items():
        value = raw.get(key, default)
        try:
            opts[key] = kind(value)
        except (TypeError, ValueError):
            raise ConfigError(f"invalid value for {key}: {value!r}") from None
    if opts["mask"] not in NAMED_MASKS:
        raise ConfigError(f"unknown mask {opts['mask']!r}; available masks: {', '.join(NAMED_MASKS)}")
    return opts


def parse_taps(text: str) -> list[int]:
    """``"1,5,10"`` or ranges such as ``"1-40"`` (inclusive)."""
    taps = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(s) for s in part.split("-", 1))
                taps.extend(range(lo, hi + 1))
            elif part:
                taps.append(int(part))
    except ValueError:
        raise ConfigError(f"invalid tap list {text!r}") from None
    if not taps or min(taps) < 1:
        raise ConfigError(f"tap list {text!r} must name positive integers")
    return taps


def make_config(opts: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            mask=opts["mask"], taps=opts["taps"], mu=opts["mu"], sigma_v2=opts["sigma_v2"],
            sigma_u2=opts["sigma_u2"], runs=opts["runs"], iterations=opts["iterations"], seed=opts["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_manifest(out: Path, opts: dict, files: Sequence[Path]) -> None:
    entries = [
        {"file": f.name, "sha256": hashlib.sha256(f.read_bytes()).hexdigest()} for f in files
    ]
    manifest = {"config": opts, "out": str(out), "files": entries}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


SUMMARY_HEADER = [
    "mask", "M", "mu", "sigma_u2", "sigma_v2", "runs",
    "mse_ss", "emse_ss", "mse_theory", "emse_theory",
    "mse_ss_db", "emse_ss_db", "mse_theory_db", "emse_theory_db",
]


def cmd_run(opts: dict) -> list[Path]:
    cfg = make_config(opts)
    t = cfg.theory()
    t.check_stable()
    window = min(opts["window"], cfg.iterations)
    curve = run_experiment(cfg)
    mse_ss, emse_ss = steady_state(curve, window)
    mse_th, emse_th = mse_theory(t), emse_theory(t)
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    lc = out / "learning_curve.csv"
    write_csv(
        lc,
        ["iteration", "mse", "emse", "mse_db", "emse_db"],
        [[i, num(m), num(e), num(db(m)), num(db(e))] for i, (m, e) in enumerate(zip(curve.mse, curve.emse))],
    )
    summary = out / "summary.csv"
    write_csv(summary, SUMMARY_HEADER, [[
        cfg.mask.name, cfg.taps, num(cfg.mu), num(cfg.sigma_u2), num(cfg.sigma_v2), cfg.runs,
        num(mse_ss), num(emse_ss), num(mse_th), num(emse_th),
        num(db(mse_ss)), num(db(emse_ss)), num(db(mse_th)), num(db(emse_th)),
    ]])
    files = [lc, summary]
    write_manifest(out, opts, files)
    return files


SWEEP_HEADER = SUMMARY_HEADER + ["unstable"]


def cmd_sweep(opts: dict) -> list[Path]:
    taps = parse_taps(opts["sweep"])
    cfg = make_config({**opts, "taps": taps[0]})
    window = min(opts["window"], cfg.iterations)
    rows = sweep_taps(cfg, taps, window=window)
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    write_csv(path, SWEEP_HEADER, [[
        cfg.mask.name, r.taps, num(cfg.mu), num(cfg.sigma_u2), num(cfg.sigma_v2), cfg.runs,
        num(r.mse_ss), num(r.emse_ss), num(r.mse_theory), num(r.emse_theory),
        num(db(r.mse_ss)), num(db(r.emse_ss)), num(db(r.mse_theory)), num(db(r.emse_theory)),
        int(r.unstable),
    ] for r in rows])
    flagged = [r.taps for r in rows if r.unstable]
    if flagged:
        print(f"unstable (not simulated): M = {', '.join(map(str, flagged))}", file=sys.stderr)
    write_manifest(out, opts, [path])
    return [path]


def cmd_table(n: int) -> str:
    if not 1 <= n <= MAX_DIM:
        raise ConfigError(f"n must lie in [1, {MAX_DIM}], got {n}")
    return format_cayley_table(n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaaf", description="Geometric-algebra LMS experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def experiment_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--mask", help=f"one of {', '.join(NAMED_MASKS)}")
        p.add_argument("--taps", metavar="M")
        p.add_argument("--mu")
        p.add_argument("--sigma-v2", dest="sigma_v2")
        p.add_argument("--sigma-u2", dest="sigma_u2")
        p.add_argument("--runs")
        p.add_argument("--iterations")
        p.add_argument("--seed")
        p.add_argument("--out", metavar="DIR")
        p.add_argument("--window")

    run = sub.add_parser("run", help="simulate one configuration")
    experiment_flags(run)
    sweep = sub.add_parser("sweep", help="steady state versus number of taps")
    experiment_flags(sweep)
    sweep.add_argument("--sweep", metavar="LIST", help='tap counts, e.g. "1,5,10,20,40" or "1-40"')
    table = sub.add_parser("table", help="print the basis-blade multiplication table")
    table.add_argument("n", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "table":
            print(cmd_table(args.n))
            return 0
        opts = resolve(args)
        files = cmd_run(opts) if args.command == "run" else cmd_sweep(opts)
        for f in files:
            print(f)
        return 0
    except ConfigError as exc:
        print(f"gaaf: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Unstable as exc:
        print(f"gaaf: unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except Exception as exc:  # noqa: BLE001
        print(f"gaaf: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
