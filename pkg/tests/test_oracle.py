import math

import numpy as np
import pytest

from jaynes_qic import (
    SIGMA_Z,
    ConstraintSet,
    QubitState,
    TooLarge,
    build_projector,
    flag_string_overlap,
    infer_general,
    infer_one,
    overlap_product_pure,
    trace_against_product,
)
from jaynes_qic.oracle import (
    corrupt_window,
    dense_flag_ket,
    dense_product_ket,
    dense_projector,
    dense_tensor_power,
    dense_trace,
    oracle_compare,
    random_pure_state,
)
from jaynes_qic.qubit import SIGMA_X, SIGMA_Y

from helpers import random_constraints, random_state


def test_tensor_power_mixed():
    np.testing.assert_allclose(dense_tensor_power(QubitState(0, 0, 0), 3), np.eye(8) / 8, atol=1e-15)


def test_tensor_power_pure():
    m = dense_tensor_power(QubitState(0.6, 0, 0.8), 2)
    assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.matrix_rank(m, tol=1e-10) == 1


def test_tensor_power_spectrum(rng):
    s = random_state(rng)
    n = 5
    eig = np.sort(np.linalg.eigvalsh(dense_tensor_power(s, n)))
    lh, ll = s.eigenvalues
    ref = np.sort(np.concatenate([[lh ** (n - k) * ll**k] * math.comb(n, k) for k in range(n + 1)]))
    np.testing.assert_allclose(eig, ref, atol=1e-12)


def test_too_large(sol_one):
    with pytest.raises(TooLarge):
        dense_tensor_power(QubitState(0, 0, 0), 11)
    with pytest.raises(TooLarge):
        oracle_compare(sol_one, 12, 0.1, 1, 0)


@pytest.mark.parametrize("n", [1, 4, 7, 10])
def test_dense_projector_properties(sol_two, n):
    p = build_projector(sol_two, n, 0.2)
    d = dense_projector(p)
    assert np.max(np.abs(d @ d - d)) <= 1e-12
    assert np.max(np.abs(d - d.conj().T)) <= 1e-12
    count = sum(math.comb(n, k) for k in range(p.k_lo, p.k_hi + 1))
    assert np.trace(d).real == pytest.approx(count, abs=1e-9)


def test_dense_projector_edges(sol_one):
    p = build_projector(sol_one, 5, 0.1)
    np.testing.assert_allclose(dense_projector(p.with_window(0, 5)), np.eye(32), atol=1e-12)
    assert np.linalg.matrix_rank(dense_projector(p.with_window(0, 0)), tol=1e-10) == 1


def test_fast_paths_against_dense(rng):
    """1e3 random product states at N <= 10: overlap, flag and trace to 1e-10."""
    worst = 0.0
    sols = [infer_one(*random_constraints(rng, 1)[0]) for _ in range(4)]
    for i in range(1000):
        sol = sols[i % 4]
        n = int(rng.integers(1, 11))
        p = build_projector(sol, n, float(rng.uniform(0.02, 0.4)))
        states = [random_pure_state(rng) for _ in range(n)]
        psi = dense_product_ket(states)
        dense_p = dense_projector(p)
        worst = max(worst, abs(overlap_product_pure(p, states) - np.vdot(psi, dense_p @ psi).real))
        worst = max(worst, abs(flag_string_overlap(p, states) - abs(np.vdot(dense_flag_ket(p), psi)) ** 2))
        s = random_state(rng)
        worst = max(worst, abs(trace_against_product(p, s) - dense_trace(dense_tensor_power(s, n), dense_p)))
    assert worst <= 1e-10


def test_oracle_compare_clean(sol_one, sol_two):
    for sol in (sol_one, sol_two):
        rep = oracle_compare(sol, 8, 0.1, 200, 1)
        assert rep.ok(1e-10), rep


def test_oracle_compare_point_family():
    sol = infer_general(ConstraintSet.of((SIGMA_X, 0.3), (SIGMA_Y, 0.1), (SIGMA_Z, 0.4)))
    rep = oracle_compare(sol, 6, 0.1, 20, 2)
    assert rep.max_identity_dev == 0.0
    assert rep.ok()


def test_oracle_compare_full_window(sol_two):
    rep = oracle_compare(sol_two, 6, 5.0, 20, 3)
    assert rep.window == (0, 6)
    assert rep.max_trace_dev == pytest.approx(0.0, abs=1e-14)


def test_oracle_detects_corruption(sol_two):
    bad = corrupt_window(build_projector(sol_two, 8, 0.1))
    rep = oracle_compare(sol_two, 8, 0.1, 20, 4, fast_projector=bad)
    assert not rep.ok()
