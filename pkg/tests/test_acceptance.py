"""End-to-end acceptance checks; each prints a PASS/FAIL line and registers it
for the terminal summary."""
import subprocess
import sys
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE
from oracles import central_difference, complex_lms, quaternion_lms, scalar_lms

from gaaf.algebra import (
    EVEN,
    G3,
    NAMED_MASKS,
    Multivector,
    algebra,
    complex_unmap,
    quaternion_map,
    quaternion_unmap,
)
from gaaf.arrays import MultivectorArray, reversed_product_coeffs
from gaaf.filters import FilterState, compute_error, cost, gradient, lms_step
from gaaf.sim import (
    ExperimentConfig,
    draw_coeffs,
    preset_weights,
    run_experiment,
    run_generators,
    simulate,
    steady_state,
    sweep_taps,
    synthesize_sample,
)
from gaaf.theory import AlgebraDims, db, emse_theory, mse_theory

pytestmark = pytest.mark.slow


def record(name, ok, detail):
    ACCEPTANCE.append((name, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    return ok


# Blade products of G(R3), row times column, transcribed by hand.
EXPECTED_TABLE = [
    ["1", "γ1", "γ2", "γ3", "γ12", "γ23", "γ31", "I"],
    ["γ1", "1", "γ12", "-γ31", "γ2", "I", "-γ3", "γ23"],
    ["γ2", "-γ12", "1", "γ23", "-γ1", "γ3", "I", "γ31"],
    ["γ3", "γ31", "-γ23", "1", "I", "-γ2", "γ1", "γ12"],
    ["γ12", "-γ2", "γ1", "I", "-1", "-γ31", "γ23", "-γ3"],
    ["γ23", "I", "-γ3", "γ2", "γ31", "-1", "-γ12", "-γ1"],
    ["γ31", "γ3", "I", "-γ1", "-γ23", "γ12", "-1", "-γ2"],
    ["I", "γ23", "γ31", "γ12", "-γ3", "-γ1", "-γ2", "-1"],
]
LABELS = ["1", "γ1", "γ2", "γ3", "γ12", "γ23", "γ31", "I"]


def test_1_cayley_table():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "gaaf", "table", "3"], capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    lines = proc.stdout.splitlines()
    header, body = lines[0].split(), [line.split() for line in lines[1:]]
    cells = [row[1:] for row in body]
    matches = sum(a == b for got, want in zip(cells, EXPECTED_TABLE) for a, b in zip(got, want))
    ok = (
        proc.returncode == 0 and header == LABELS and [row[0] for row in body] == LABELS
        and len(cells) == 8 and all(len(r) == 8 for r in cells) and matches == 64 and elapsed < 1.0
    )
    assert record("1 cayley table", ok, f"{matches}/64 cells, {elapsed:.2f}s")


def test_2_emse_noise_levels():
    t0 = time.perf_counter()
    details, ok = [], True
    for sv in (1e-2, 1e-3, 1e-5):
        cfg = ExperimentConfig(mask="full3", taps=10, mu=0.005, sigma_u2=1.0, sigma_v2=sv, runs=100, iterations=5000)
        _, emse_ss = steady_state(run_experiment(cfg), window=200)
        gap = db(emse_ss) - db(emse_theory(cfg.theory()))
        ok &= abs(gap) <= 1.0
        details.append(f"σv²={sv:g}: {gap:+.2f} dB")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    assert record("2 emse vs noise", ok, ", ".join(details) + f", {elapsed:.0f}s")


def test_3_taps_sweep():
    t0 = time.perf_counter()
    worst, ok, points = 0.0, True, 0
    for name in NAMED_MASKS:
        base = ExperimentConfig(mask=name, sigma_v2=1e-3, runs=100, iterations=5000)
        for row in sweep_taps(base, [1, 5, 10, 20, 40], window=200):
            gaps = (db(row.mse_ss) - db(row.mse_theory), db(row.emse_ss) - db(row.emse_theory))
            ok &= not row.unstable and all(abs(g) <= 1.0 for g in gaps)
            worst = max(worst, *map(abs, gaps))
            points += 1
    elapsed = time.perf_counter() - t0
    ok &= points == 20 and elapsed < 600
    assert record("3 taps sweep", ok, f"{points} points, worst |gap| {worst:.2f} dB, {elapsed:.0f}s")


def ga_lms(mask_name, runs, iterations, taps, mu, sigma_u2, sigma_v2, seed):
    """Weights and errors of the object-level GA-LMS on the documented streams."""
    mask = NAMED_MASKS[mask_name]
    w_opt = preset_weights(mask_name, taps)
    W = np.empty((runs, iterations, taps, 8))
    E = np.empty((runs, iterations, 8))
    for r, (gu, gv) in enumerate(run_generators(seed, runs)):
        state = FilterState.initial(G3, taps, mu, mask)
        for i in range(iterations):
            u, d, _ = synthesize_sample(w_opt, mask, sigma_u2, sigma_v2, gu, gv)
            state, e = lms_step(state, u, d)
            W[r, i], E[r, i] = state.w.coeffs, e.coeffs
    return W, E


def rotor_to_quat(row):
    c = np.zeros(8)
    c[EVEN(3).indices] = row
    return quaternion_unmap(Multivector(G3, c))


def test_4_subalgebra_oracles():
    args = dict(runs=2, iterations=1000, taps=10, mu=0.005, sigma_u2=1.0, sigma_v2=1e-3, seed=0)
    gaps = {}

    W, E = ga_lms("real", **args)
    Wr, Er, _ = scalar_lms(args["seed"], args["runs"], args["iterations"], args["taps"], args["mu"],
                           args["sigma_u2"], args["sigma_v2"], 0.55)
    gaps["real"] = max(np.abs(W[..., 0] - Wr).max(), np.abs(E[..., 0] - Er).max(),
                       np.abs(W[..., 1:]).max(), np.abs(E[..., 1:]).max())

    W, E = ga_lms("complex", **args)
    wo = complex_unmap(preset_weights("complex", 1)[0])
    Wc, Ec = complex_lms(args["seed"], args["runs"], args["iterations"], args["taps"], args["mu"],
                         args["sigma_u2"], args["sigma_v2"], wo)
    as_complex = W[..., 0] + 1j * W[..., 3]
    gaps["complex"] = max(np.abs(as_complex - Wc).max(), np.abs(E[..., 0] + 1j * E[..., 3] - Ec).max())

    W, E = ga_lms("rotor3", **args)
    wo = quaternion_unmap(preset_weights("rotor3", 1)[0])
    Wq, Eq = quaternion_lms(args["seed"], args["runs"], args["iterations"], args["taps"], args["mu"],
                            args["sigma_u2"], args["sigma_v2"], wo, rotor_to_quat)
    mapped = np.array([quaternion_map(q).coeffs for q in Wq.reshape(-1, 4)]).reshape(W.shape)
    mapped_e = np.array([quaternion_map(q).coeffs for q in Eq.reshape(-1, 4)]).reshape(E.shape)
    gaps["quaternion"] = max(np.abs(W - mapped).max(), np.abs(E - mapped_e).max())

    ok = all(g <= 1e-12 for g in gaps.values())
    assert record("4 subalgebra oracles", ok, ", ".join(f"{k} {v:.1e}" for k, v in gaps.items()))


def test_5_gradient():
    rng = np.random.default_rng(5)
    worst = 0.0
    for mask in NAMED_MASKS.values():
        for _ in range(100):
            m = int(rng.integers(1, 6))
            u = MultivectorArray(G3, draw_coeffs(rng, mask, 1.0, (m,)))
            w = MultivectorArray(G3, draw_coeffs(rng, mask, 1.0, (m,)))
            d = Multivector(G3, draw_coeffs(rng, mask, 1.0))
            g = gradient(u, compute_error(d, u, w)).coeffs
            # differences over every real coefficient, including blades outside the mask
            fd = central_difference(lambda x: cost(d, u, MultivectorArray(G3, x)), w.coeffs.copy())
            worst = max(worst, np.linalg.norm(fd - g) / np.linalg.norm(g))
    assert record("5 gradient", worst < 1e-6, f"400 instances, worst relative error {worst:.1e}")


def test_6_moments():
    rng = np.random.default_rng(6)
    alg = algebra(G3)
    details, ok = [], True
    sv, su, taps = 1e-3, 1.0, 10
    for name, mask in NAMED_MASKS.items():
        dim = AlgebraDims.of(mask).dim
        v = draw_coeffs(rng, mask, sv, (1_000_000,))
        vv = alg.scalar_product(alg.reverse(v), v).mean() / (dim * sv)
        u = draw_coeffs(rng, mask, su, (100_000, taps))
        uu = reversed_product_coeffs(G3, u, u)[:, 0].mean() / (taps * dim * su)
        ok &= abs(vv - 1) < 0.05 and abs(uu - 1) < 0.05
        details.append(f"{name} {vv:.3f}/{uu:.3f}")
    assert record("6 moments", ok, "ratios " + ", ".join(details))


def rel_gap(lhs, rhs):
    scale = np.maximum(np.abs(lhs).max(axis=-1), np.abs(rhs).max(axis=-1))
    return np.abs(lhs - rhs).max(axis=-1) / np.maximum(scale, 1e-300)


def test_7_algebraic_properties():
    rng = np.random.default_rng(7)
    alg = algebra(G3)
    n = 20_000
    A, B, C = (rng.standard_normal((n, 8)) for _ in range(3))
    gp, rev = alg.gp, alg.reverse
    failures = {}

    def check(name, lhs, rhs):
        failures[name] = int(np.sum(rel_gap(np.atleast_2d(lhs.T).T, np.atleast_2d(rhs.T).T) > 1e-10))

    check("associativity", gp(gp(A, B), C), gp(A, gp(B, C)))
    check("left distributivity", gp(A, B + C), gp(A, B) + gp(A, C))
    check("right distributivity", gp(B + C, A), gp(B, A) + gp(C, A))

    vec = np.zeros((n, 8))
    vec2 = np.zeros((n, 8))
    vec[:, [1, 2, 4]] = rng.standard_normal((n, 3))
    vec2[:, [1, 2, 4]] = rng.standard_normal((n, 3))
    dot = np.zeros((n, 8))
    dot[:, 0] = np.sum(vec * vec2, axis=1)
    check("anticommutation", gp(vec, vec2) + gp(vec2, vec), 2 * dot)
    # the orthogonal part of b anticommutes with a
    perp = vec2 - (dot[:, :1] / np.sum(vec * vec, axis=1, keepdims=True)) * vec
    check("orthogonal anticommute", gp(vec, perp), -gp(perp, vec))

    check("reversion antiautomorphism", rev(gp(A, B)), gp(rev(B), rev(A)))
    check("cyclic scalar part", gp(A, B)[:, :1], gp(B, A)[:, :1])
    check("cyclic triple", gp(gp(A, B), C)[:, :1], gp(gp(C, A), B)[:, :1])

    even = EVEN(3)
    P, Q = (draw_coeffs(rng, even, 1.0, (n,)) for _ in range(2))
    failures["even closure"] = int(np.sum(np.any(gp(P, Q)[:, ~even.flags] != 0, axis=1)))

    R = draw_coeffs(rng, even, 1.0, (n,))
    R /= np.sqrt(alg.scalar_product(rev(R), R))[:, None]
    X = rng.standard_normal((n, 8))
    rotated = gp(gp(R, X), rev(R))
    norm = np.sqrt(alg.scalar_product(rev(X), X))
    norm_rot = np.sqrt(alg.scalar_product(rev(rotated), rotated))
    failures["rotor isometry"] = int(np.sum(np.abs(norm_rot - norm) > 1e-10 * norm))

    total = sum(failures.values())
    detail = f"{len(failures)} properties x {n} cases, failures: {total}"
    assert record("7 algebraic properties", total == 0, detail), failures


def decomposition_residuals():
    stats = {"entries": 0, "bit_equal": 0, "worst": 0.0}

    def observe(i, e, ea, v):
        r = e - ea - v
        stats["entries"] += r.size
        stats["bit_equal"] += int(np.sum(r == 0))
        stats["worst"] = max(stats["worst"], float(np.abs(r).max()))

    simulate(ExperimentConfig(), observe)
    return stats


@pytest.fixture(scope="module")
def residuals():
    return decomposition_residuals()


@pytest.mark.xfail(strict=True, reason="e and e_a round independently in IEEE-754; see decisions ledger")
def test_8_error_decomposition_bit_level(residuals):
    ok = residuals["bit_equal"] == residuals["entries"]
    record("8 error decomposition (bit-level)", ok,
           f"{residuals['bit_equal']}/{residuals['entries']} coefficients bit-equal, "
           f"worst |e - e_a - v| = {residuals['worst']:.1e}")
    assert ok


def test_8_error_decomposition_machine_precision(residuals):
    # |~u* w| stays below ~50 in the default config, so a few hundred ulps of that scale
    ok = residuals["worst"] <= 1e-12
    assert record("8 error decomposition (machine precision)", ok,
                  f"worst |e - e_a - v| = {residuals['worst']:.1e} over {residuals['entries']} coefficients")


def test_theory_reference_values():
    cfg = ExperimentConfig()
    emse, mse = emse_theory(cfg.theory()), mse_theory(cfg.theory())
    ok = abs(emse - 2e-3) < 1e-15 and abs(mse - 1e-2) < 1e-15
    assert record("reference theory values", ok, f"EMSE {db(emse):.2f} dB, MSE {db(mse):.2f} dB")
