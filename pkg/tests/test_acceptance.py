"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v``; a PASSED/FAILED line per
criterion is printed in the terminal summary.
"""
import math
import time
import timeit

import numpy as np
import pytest

from jaynes_qic import (
    SIGMA_X,
    SIGMA_Z,
    ConstraintSet,
    build_projector,
    converse_check,
    decompose_ensemble,
    entropy_scan,
    family_state,
    infer_general,
    infer_one,
    infer_two,
    simulate,
)
from jaynes_qic.cli import main
from jaynes_qic.oracle import oracle_compare

from helpers import random_constraints

S_ONE = 0.811278124459132863909695792039  # H(3/4), 30 digits via mpmath


def best_time(fn, repeat=200):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def test_c1_jaynes_formulas():
    one = infer_one(SIGMA_Z, 0.5)
    assert abs(one.data_view.h11 - 0.75) <= 1e-12
    assert abs(one.data_view.h22 - 0.25) <= 1e-12
    two = infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)
    assert abs(two.data_view.h12.real - 0.2) <= 1e-12
    assert abs(two.family.radius - math.sqrt(0.12)) <= 1e-12
    assert best_time(lambda: infer_one(SIGMA_Z, 0.5)) < 1e-3
    assert best_time(lambda: infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)) < 1e-3


def test_c2_max_entropy_property():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst_scan = worst_route = -math.inf
    for i in range(10_000):
        k = 1 + i % 2
        pairs = random_constraints(rng, k)
        sol = infer_one(*pairs[0]) if k == 1 else infer_two(pairs[0][0], pairs[0][1], pairs[1][0], pairs[1][1])
        gen = infer_general(ConstraintSet.of(*pairs))
        worst_route = max(worst_route, float(np.linalg.norm(sol.rho_j.bloch - gen.rho_j.bloch)))
        h, _ = entropy_scan(sol, 9)
        worst_scan = max(worst_scan, h - sol.entropy_bits)
    elapsed = time.perf_counter() - t0
    print(f"scan excess {worst_scan:.3e}, route distance {worst_route:.3e}, {elapsed:.1f} s")
    assert worst_scan <= 1e-12
    assert worst_route <= 1e-10
    assert elapsed < 30


def test_c3_trace_identity():
    rng = np.random.default_rng(3)
    sols = [infer_one(SIGMA_Z, 0.5), infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)]
    sols += [infer_one(*random_constraints(rng, 1)[0])]
    sols += [infer_two(*(x for pair in random_constraints(rng, 2) for x in pair))]
    t0 = time.perf_counter()
    ident = fast = 0.0
    for j, sol in enumerate(sols):
        for n in range(2, 11):
            rep = oracle_compare(sol, n, 0.1, 200, 1000 * j + n)
            ident = max(ident, rep.max_identity_dev)
            fast = max(fast, rep.max_trace_dev, rep.max_overlap_dev, rep.max_flag_dev)
    elapsed = time.perf_counter() - t0
    print(f"identity {ident:.3e}, fast vs dense {fast:.3e}, {elapsed:.1f} s")
    assert ident <= 1e-10
    assert fast <= 1e-10
    assert elapsed < 120


def test_c4_compression_at_entropy_rate():
    sol = infer_one(SIGMA_Z, 0.5)
    assert abs(sol.entropy_bits - S_ONE) <= 1e-12
    ens = decompose_ensemble(sol.rho_j, "eigen")
    t0 = time.perf_counter()
    rec = {r.n_copies: r for r in simulate(sol, ens, [2000, 10_000], 0.05, 1, 0).records}
    elapsed = time.perf_counter() - t0
    print(f"p_error {rec[2000].p_error_exact:.3e} / {rec[10_000].p_error_exact:.3e}, rate {rec[10_000].rate_bits:.6f}")
    assert rec[2000].p_error_exact < 0.05
    assert rec[10_000].p_error_exact < 1e-3
    assert S_ONE - 0.06 <= rec[10_000].rate_bits <= S_ONE + 0.05
    assert elapsed < 10


def test_c5_fidelity_lemma():
    one = infer_one(SIGMA_Z, 0.5)
    two = infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)
    runs = [
        (one, one.rho_j, "eigen", 0.05),
        (one, one.rho_j, "random-mix", 0.05),
        (two, family_state(two, (0.5 * two.family.radius,)), "random-mix", 0.05),
        (two, family_state(two, (0.0,)), "eigen", 0.1),
    ]
    t0 = time.perf_counter()
    at_2000 = None
    for i, (sol, src, method, delta) in enumerate(runs):
        ens = decompose_ensemble(src, method, 5, i)
        for r in simulate(sol, ens, [200, 1000, 2000], delta, 1000, 10 + i, threads=0).records:
            assert r.fidelity_mc_mean >= 1 - 2 * r.p_error_exact - 3 * r.fidelity_mc_stderr, r
            if i == 1 and r.n_copies == 2000:
                at_2000 = r.fidelity_mc_mean
    elapsed = time.perf_counter() - t0
    print(f"mean fidelity at N=2000 {at_2000:.5f}, {elapsed:.1f} s")
    assert at_2000 > 0.9
    assert elapsed < 300


def test_c6_converse():
    sol = infer_one(SIGMA_Z, 0.5)
    ns = [50, 100, 200, 400]
    t0 = time.perf_counter()
    below = [r.best_retained_trace for r in converse_check(sol, ns, sol.entropy_bits - 0.1).records]
    above = [r.best_retained_trace for r in converse_check(sol, ns, sol.entropy_bits + 0.1).records]
    elapsed = time.perf_counter() - t0
    print(f"below {below}\nabove {above}")
    assert all(a > b for a, b in zip(below, below[1:]))
    assert all(a < b for a, b in zip(above, above[1:]))
    assert above[-1] > 0.999
    assert elapsed < 1


def test_c7_ensemble_independence():
    sol = infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)
    g = sol.family.radius
    e1 = decompose_ensemble(family_state(sol, (0.0,)), "eigen")
    e2 = decompose_ensemble(family_state(sol, (0.9 * g,)), "random-mix", 5, 1)
    t0 = time.perf_counter()
    r1 = simulate(sol, e1, [1000], 0.1, 4000, 1, threads=0).records[0]
    r2 = simulate(sol, e2, [1000], 0.1, 4000, 101, threads=0).records[0]
    elapsed = time.perf_counter() - t0
    se = math.hypot(r1.fidelity_mc_stderr, r2.fidelity_mc_stderr)
    print(f"p_error {r1.p_error_exact!r} vs {r2.p_error_exact!r}; fidelity {r1.fidelity_mc_mean:.6f} vs {r2.fidelity_mc_mean:.6f}, se {se:.2e}")
    assert abs(r1.p_error_exact - r2.p_error_exact) <= 1e-12
    assert abs(r1.fidelity_mc_mean - r2.fidelity_mc_mean) <= 3 * se
    assert elapsed < 600


def test_c8_determinism(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        '{"constraints": [{"matrix": {"h11": 1, "h22": -1}, "mean": 0.6},'
        ' {"matrix": {"h11": 0, "h22": 0, "re12": 1}, "mean": 0.4}],'
        ' "delta": 0.1, "n_list": [50, 300, 1000], "samples": 700, "seed": 17,'
        ' "ensemble": {"method": "random-mix", "members": 5, "family_params": [0.2]}}'
    )
    blobs = []
    for rerun in range(2):
        for threads in (1, 4, 8):
            prefix = tmp_path / f"t{threads}_{rerun}"
            assert main(["simulate", "--config", str(cfg), "--out", str(prefix), "--threads", str(threads)]) == 0
            blobs.append((tmp_path / f"t{threads}_{rerun}_simulate.csv").read_bytes())
    assert len(set(blobs)) == 1
