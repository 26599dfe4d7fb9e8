"""Brute-force 2^N x 2^N reference computations, N <= 10.

Everything here is built from explicit Kronecker products so it shares no
code path with the weight-window formulas in ``typical``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import TooLarge
from .inference import JaynesSolution
from .qubit import QubitState
from .typical import (
    TypicalProjector,
    build_projector,
    flag_string_overlap,
    overlap_product_pure,
    trace_against_product,
)

MAX_QUBITS = 10


def _check_size(n: int):
    if n > MAX_QUBITS:
        raise TooLarge(f"dense objects are limited to {MAX_QUBITS} qubits, got {n}")
    if n < 1:
        raise ValueError("n must be >= 1")


def dense_tensor_power(s: QubitState, n: int) -> np.ndarray:
    _check_size(n)
    m = s.matrix()
    return reduce(np.kron, [m] * n)


def _product_basis(p: TypicalProjector) -> np.ndarray:
    """Columns |x1...xN>, x_i = 0 for e_hi and 1 for e_lo, first slot most significant."""
    return reduce(np.kron, [p.frame.unitary()] * p.n_copies)


def _weights(n: int) -> np.ndarray:
    return np.array([bin(x).count("1") for x in range(2**n)])


def dense_projector(p: TypicalProjector) -> np.ndarray:
    _check_size(p.n_copies)
    w = _weights(p.n_copies)
    cols = _product_basis(p)[:, (w >= p.k_lo) & (w <= p.k_hi)]
    return cols @ cols.conj().T


def dense_product_ket(states: Sequence[QubitState]) -> np.ndarray:
    _check_size(len(states))
    return reduce(np.kron, [s.ket() for s in states])


def dense_flag_ket(p: TypicalProjector) -> np.ndarray:
    _check_size(p.n_copies)
    e_hi, e_lo = (np.array(v) for v in p.frame.basis)
    return reduce(np.kron, [e_lo if i < p.k_lo else e_hi for i in range(p.n_copies)])


def dense_trace(rho_n: np.ndarray, proj: np.ndarray) -> float:
    """Tr(rho_n proj) for dense operators."""
    return float(np.real(np.sum(rho_n * proj.T)))


def random_pure_state(rng: np.random.Generator) -> QubitState:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return QubitState.from_ket(v)


def random_family_params(sol: JaynesSolution, rng: np.random.Generator) -> np.ndarray:
    """Uniform point in the family's parameter ball."""
    fam = sol.family
    if fam.dim == 0:
        return np.zeros(0)
    direction = rng.normal(size=fam.dim)
    direction /= np.linalg.norm(direction)
    return direction * fam.radius * rng.uniform() ** (1.0 / fam.dim)


@dataclass(frozen=True)
class OracleReport:
    n: int
    trials: int
    window: tuple[int, int]
    max_trace_dev: float
    max_overlap_dev: float
    max_flag_dev: float
    max_identity_dev: float

    @property
    def max_dev(self) -> float:
        return max(self.max_trace_dev, self.max_overlap_dev, self.max_flag_dev, self.max_identity_dev)

    def ok(self, tol: float = 1e-10) -> bool:
        return self.max_dev <= tol


def oracle_compare(
    sol: JaynesSolution,
    n: int,
    delta: float,
    trials: int,
    seed: int,
    fast_projector: TypicalProjector | None = None,
) -> OracleReport:
    """Fast weight-window results against dense linear algebra.

    ``fast_projector`` replaces the projector handed to the fast routines
    (the dense side always uses the true one); pass a tampered window to
    check that the comparison notices.
    """
    _check_size(n)
    rng = np.random.default_rng(seed)
    proj = build_projector(sol, n, delta)
    fast = fast_projector if fast_projector is not None else proj
    dense_p = dense_projector(proj)
    flag = dense_flag_ket(proj)
    ref = dense_trace(dense_tensor_power(sol.rho_j, n), dense_p)

    dev_trace = abs(trace_against_product(fast, sol.rho_j) - ref)
    dev_identity = dev_overlap = dev_flag = 0.0
    for _ in range(trials):
        member = sol.family.state(random_family_params(sol, rng))
        dense = dense_trace(dense_tensor_power(member, n), dense_p)
        dev_trace = max(dev_trace, abs(trace_against_product(fast, member) - dense))
        dev_identity = max(dev_identity, abs(dense - ref))

        states = [random_pure_state(rng) for _ in range(n)]
        psi = dense_product_ket(states)
        dense_ov = float(np.real(np.vdot(psi, dense_p @ psi)))
        dev_overlap = max(dev_overlap, abs(overlap_product_pure(fast, states) - dense_ov))
        dense_flag = abs(np.vdot(flag, psi)) ** 2
        dev_flag = max(dev_flag, abs(flag_string_overlap(fast, states) - dense_flag))
    return OracleReport(n, trials, proj.window, dev_trace, dev_overlap, dev_flag, dev_identity)


def corrupt_window(p: TypicalProjector) -> TypicalProjector:
    """Widen the window by one weight class (negative control)."""
    if p.k_hi < p.n_copies:
        return p.with_window(p.k_lo, p.k_hi + 1)
    if p.k_lo > 0:
        return p.with_window(p.k_lo - 1, p.k_hi)
    return p.with_window(p.k_lo, p.k_hi - 1) if p.k_hi > 0 else p.with_window(1, 1)


def dense_converse(s: QubitState, n: int, rank: int) -> float:
    """Sum of the ``rank`` largest eigenvalues of s^(x)N."""
    _check_size(n)
    eig = np.linalg.eigvalsh(dense_tensor_power(s, n))
    return float(np.sort(eig)[::-1][: min(rank, eig.size)].sum())


def exact_binomial_tail(n: int, p_lo: float, k_lo: int, k_hi: int, digits: int = 40) -> float:
    """Probability that Bin(n, p_lo) falls outside [k_lo, k_hi], in mpmath precision."""
    import mpmath

    with mpmath.workdps(digits):
        pl = mpmath.mpf(p_lo)
        ph = 1 - pl
        term = ph**n
        total = mpmath.mpf(0)
        for k in range(n + 1):
            if k < k_lo or k > k_hi:
                total += term
            term = term * (n - k) / (k + 1) * pl / ph
        return float(total)
