"""Monte-Carlo system identification with GA-LMS.

Data model per iteration ``i`` of every run::

    u_i  = M fresh taps, each a circular Gaussian multivector on the mask
    d(i) = ~u_i* w_o + v(i)
    e(i) = d(i) - ~u_i* w_{i-1}          (filter error)
    e_a(i) = ~u_i* (w_o - w_{i-1})       (a-priori error)

Random streams
--------------
Run ``r`` of a config with seed ``s`` owns two PCG64 generators seeded by
``SeedSequence(s).spawn(runs)[r].spawn(2)``: child 0 feeds the regressor,
child 1 the noise.  Each iteration consumes ``M * k`` standard normals from
the regressor stream (tap-major, then blades in ascending bitset order) and
``k`` from the noise stream, where ``k`` is the number of blades in the
mask.  Draws are taken in blocks, which does not change the sequence.  Run
``r`` is the same stream no matter how many runs the ensemble has.
"""
from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .algebra import Multivector, Signature, SubalgebraMask, mask_by_name, parse
from .arrays import MultivectorArray, reversed_product_coeffs
from .errors import CurveTooShort, Unstable
from .filters import error_coeffs, update_coeffs
from .theory import AlgebraDims, TheoryInputs, emse_theory, mse_theory

PRESETS = {
    "full3": "0.55 + 0γ1 + 1γ2 + 2γ3 + 0.71γ12 + 1.3γ23 + 4.5γ31 + 3I",
    "rotor3": "0.55 + 0.71γ12 + 1.3γ23 + 4.5γ31",
    "complex": "0.55 + 0.71γ12",
    "real": "0.55",
}

BLOCK = 256


def preset_weights(mask_name: str, taps: int) -> MultivectorArray:
    """Optimal weights used in the experiments: the same entry on every tap."""
    return MultivectorArray.repeat(parse(PRESETS[mask_name]), taps)


@dataclass(frozen=True)
class ExperimentConfig:
    mask: SubalgebraMask = field(default_factory=lambda: mask_by_name("full3"))
    taps: int = 10
    mu: float = 0.005
    sigma_v2: float = 1e-3
    sigma_u2: float = 1.0
    runs: int = 100
    iterations: int = 5000
    seed: int = 0
    w_opt: MultivectorArray | None = None

    def __post_init__(self):
        if isinstance(self.mask, str):
            object.__setattr__(self, "mask", mask_by_name(self.mask))
        if self.taps < 1 or self.runs < 1 or self.iterations < 1:
            raise ValueError("taps, runs and iterations must be positive")
        if self.mu <= 0 or self.sigma_u2 < 0 or self.sigma_v2 < 0:
            raise ValueError("mu must be positive and variances non-negative")
        if self.w_opt is None:
            object.__setattr__(self, "w_opt", preset_weights(self.mask.name, self.taps))
        if len(self.w_opt) != self.taps:
            raise ValueError(f"w_opt has {len(self.w_opt)} taps, config says {self.taps}")
        if not self.mask.contains(self.w_opt.coeffs):
            raise ValueError("w_opt leaves the configured subalgebra")

    @property
    def sig(self) -> Signature:
        return self.w_opt.sig

    def theory(self) -> TheoryInputs:
        return TheoryInputs(self.taps, self.mu, self.sigma_u2, self.sigma_v2, AlgebraDims.of(self.mask))

    def with_(self, **changes) -> ExperimentConfig:
        """Copy with changes; a new tap count re-derives the preset weights."""
        if "taps" in changes and "w_opt" not in changes:
            changes["w_opt"] = None
        return replace(self, **changes)


@dataclass
class LearningCurve:
    mse: np.ndarray
    emse: np.ndarray
    config: ExperimentConfig

    def __len__(self) -> int:
        return len(self.mse)


def run_generators(seed: int, runs: int) -> list[tuple[np.random.Generator, np.random.Generator]]:
    """``(regressor, noise)`` generators per run; see the module docstring."""
    out = []
    for child in np.random.SeedSequence(seed).spawn(runs):
        us, vs = child.spawn(2)
        out.append((np.random.Generator(np.random.PCG64(us)), np.random.Generator(np.random.PCG64(vs))))
    return out


def draw_coeffs(
    rng: np.random.Generator, mask: SubalgebraMask, sigma2: float, shape: tuple[int, ...] = ()
) -> np.ndarray:
    """Gaussian coefficients on the mask blades, exact zeros elsewhere."""
    out = np.zeros((*shape, 1 << mask.n))
    out[..., mask.indices] = np.sqrt(sigma2) * rng.standard_normal((*shape, mask.dim))
    return out


def random_multivector(mask: SubalgebraMask, sigma2: float, rng: np.random.Generator) -> Multivector:
    if sigma2 < 0:
        raise ValueError("variance must be non-negative")
    return Multivector(Signature(mask.n), draw_coeffs(rng, mask, sigma2))


def synthesize_sample(
    w_opt: MultivectorArray,
    mask: SubalgebraMask,
    sigma_u2: float,
    sigma_v2: float,
    rng: np.random.Generator,
    noise_rng: np.random.Generator | None = None,
) -> tuple[MultivectorArray, Multivector, Multivector]:
    """One ``(u, d, v)`` triple of the stationary data model.

    Noise comes from ``noise_rng`` when given, otherwise from ``rng`` after
    the regressor.
    """
    sig = w_opt.sig
    u = MultivectorArray(sig, draw_coeffs(rng, mask, sigma_u2, (len(w_opt),)))
    v = Multivector(sig, draw_coeffs(noise_rng or rng, mask, sigma_v2))
    d = Multivector(sig, reversed_product_coeffs(sig, u.coeffs, w_opt.coeffs) + v.coeffs)
    return u, d, v


StepObserver = Callable[[int, np.ndarray, np.ndarray, np.ndarray], None]


def simulate(cfg: ExperimentConfig, observer: StepObserver | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-run squared errors, each ``(runs, iterations)``: ``|e(i)|²`` and ``|e_a(i)|²``.

    All runs advance together as one batch.  ``observer(i, e, e_a, v)``, if
    given, sees the ``(runs, 2**n)`` errors and noise of every iteration.
    """
    sig, mask = cfg.sig, cfg.mask
    gens = run_generators(cfg.seed, cfg.runs)
    wo = cfg.w_opt.coeffs
    w = np.zeros((cfg.runs, cfg.taps, sig.size))
    mse = np.empty((cfg.runs, cfg.iterations))
    emse = np.empty((cfg.runs, cfg.iterations))
    for start in range(0, cfg.iterations, BLOCK):
        b = min(BLOCK, cfg.iterations - start)
        u_blk = np.stack([draw_coeffs(gu, mask, cfg.sigma_u2, (b, cfg.taps)) for gu, _ in gens])
        v_blk = np.stack([draw_coeffs(gv, mask, cfg.sigma_v2, (b,)) for _, gv in gens])
        d_blk = reversed_product_coeffs(sig, u_blk, wo) + v_blk
        for t in range(b):
            u, d = u_blk[:, t], d_blk[:, t]
            e = error_coeffs(sig, d, u, w)
            ea = reversed_product_coeffs(sig, u, wo - w)
            w = update_coeffs(sig, w, u, e, cfg.mu)
            i = start + t
            mse[:, i] = np.einsum("rk,rk->r", e, e)
            emse[:, i] = np.einsum("rk,rk->r", ea, ea)
            if observer is not None:
                observer(i, e, ea, v_blk[:, t])
    return mse, emse


def run_experiment(cfg: ExperimentConfig, observer: StepObserver | None = None) -> LearningCurve:
    """Ensemble-averaged MSE and EMSE learning curves."""
    try:
        cfg.theory().check_stable()
    except Unstable as exc:
        warnings.warn(f"step size outside the predicted stability region: {exc}", stacklevel=2)
    mse, emse = simulate(cfg, observer)
    return LearningCurve(mse.mean(axis=0), emse.mean(axis=0), cfg)


def steady_state(curve: LearningCurve, window: int = 200) -> tuple[float, float]:
    """Mean of the last ``window`` points of the MSE and EMSE curves."""
    if window < 1 or len(curve) < window:
        raise CurveTooShort(f"curve has {len(curve)} points, window is {window}")
    return float(np.mean(curve.mse[-window:])), float(np.mean(curve.emse[-window:]))


@dataclass(frozen=True)
class SweepRow:
    taps: int
    mse_ss: float
    emse_ss: float
    mse_theory: float
    emse_theory: float
    unstable: bool = False


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("GAAF_THREADS", "1")))
    except ValueError:
        return 1


def sweep_taps(
    base: ExperimentConfig, taps_list: Sequence[int], window: int = 200, workers: int | None = None
) -> list[SweepRow]:
    """Steady-state simulation and theory for each tap count.

    Rows where the theory predicts instability are flagged and not simulated.
    Rows run on up to ``workers`` threads (default ``GAAF_THREADS``); each row
    is computed independently so the result does not depend on scheduling.
    """

    def row(taps: int) -> SweepRow:
        cfg = base.with_(taps=taps)
        t = cfg.theory()
        if t.stability_margin <= 0:
            nan = float("nan")
            return SweepRow(taps, nan, nan, nan, nan, unstable=True)
        mse_ss, emse_ss = steady_state(run_experiment(cfg), window)
        return SweepRow(taps, mse_ss, emse_ss, mse_theory(t), emse_theory(t))

    workers = workers or default_workers()
    if workers == 1:
        return [row(m) for m in taps_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, taps_list))
