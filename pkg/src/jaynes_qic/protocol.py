"""Compression, transmission and decompression of i.i.d. qubit sources.

Alice projects the N-copy block onto the typical subspace built from the
Jaynes state; on failure she substitutes a fixed flag string. Bob does
nothing. Per-sequence fidelity for a product of pure messages |Psi> is

    F = <Psi|P|Psi>^2 + (1 - <Psi|P|Psi>) |<flag|Psi>|^2

and is evaluated exactly; the average over messages is estimated by Monte
Carlo in fixed-size chunks, each seeded from (seed, N, chunk index), so
results do not depend on how chunks are spread over threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .errors import InconsistentEnsemble, InvalidBudget, InvalidMethod
from .inference import JaynesSolution, check_consistency
from .qubit import TOL_PURE, QubitState, eig2
from .typical import (
    build_projector,
    error_probability,
    flag_overlap_batch,
    lo_probabilities,
    log2_dimension,
    window_mass_batch,
)

CHUNK = 64


@dataclass(frozen=True, eq=False)
class PureEnsemble:
    probs: tuple[float, ...]
    states: tuple[QubitState, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        states = tuple(self.states)
        if len(probs) != len(states) or not probs:
            raise ValueError("need one probability per state")
        if min(probs) < 0 or abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError("probabilities must be non-negative and sum to 1")
        for s in states:
            if not s.is_pure(TOL_PURE):
                raise ValueError(f"ensemble member with |r| = {s.radius!r} is not pure")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return len(self.probs)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([s.bloch for s in self.states])

    def average(self) -> QubitState:
        return QubitState.from_bloch(np.asarray(self.probs) @ self.bloch)


def decompose_ensemble(s: QubitState, method: str = "eigen", members: int = 2, seed: int = 0) -> PureEnsemble:
    """A pure-state ensemble whose average is s.

    ``"random-mix"`` spreads the spectral decomposition over ``members`` pure
    states with a Haar-random unitary: psi_i = sum_j U_ij sqrt(lambda_j) e_j.
    """
    if method not in ("eigen", "random-mix"):
        raise InvalidMethod(f"unknown decomposition method {method!r}")
    if method == "random-mix" and members < 2:
        raise InvalidMethod("random-mix needs at least 2 members")
    if s.is_pure(TOL_PURE):
        return PureEnsemble((1.0,), (s,))
    frame = eig2(s.as_hermitian())
    lam = s.eigenvalues
    kets = [np.array(e) for e in frame.basis]
    if method == "eigen":
        return PureEnsemble(lam, tuple(QubitState.from_ket(k) for k in kets))

    u = unitary_group.rvs(members, random_state=np.random.default_rng(seed))
    vecs = np.outer(u[:, 0] * math.sqrt(lam[0]), kets[0]) + np.outer(u[:, 1] * math.sqrt(lam[1]), kets[1])
    weights = np.sum(np.abs(vecs) ** 2, axis=1)
    keep = weights > 0
    probs = weights[keep] / weights[keep].sum()
    return PureEnsemble(tuple(probs), tuple(QubitState.from_ket(v) for v in vecs[keep]))


@dataclass(frozen=True)
class SimulationRecord:
    n_copies: int
    rate_bits: float
    p_error_exact: float
    fidelity_mc_mean: float
    fidelity_mc_stderr: float
    fidelity_lower_bound: float
    samples: int
    seed: int


@dataclass
class SimulationReport:
    delta: float
    entropy_bits: float
    records: list[SimulationRecord] = field(default_factory=list)


def sequence_fidelities(
    q_members: np.ndarray, probs: np.ndarray, n: int, k_lo: int, k_hi: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Exact fidelities of ``count`` random message sequences of length n."""
    idx = rng.choice(len(probs), size=(count, n), p=probs)
    q = q_members[idx]
    overlap = window_mass_batch(q, k_lo, k_hi)
    flag = flag_overlap_batch(q, k_lo)
    return np.clip(overlap**2 + (1.0 - overlap) * flag, 0.0, 1.0)


def _resolve_threads(threads: int) -> int:
    if threads == 0:
        return os.cpu_count() or 1
    return max(1, threads)


def simulate(
    sol: JaynesSolution,
    ens: PureEnsemble,
    n_list: Sequence[int],
    delta: float,
    samples: int,
    seed: int,
    threads: int = 1,
) -> SimulationReport:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    avg = ens.average()
    if not check_consistency(avg, sol.constraints):
        raise InconsistentEnsemble("ensemble average does not reproduce the measured means")
    probs = np.asarray(ens.probs)
    report = SimulationReport(float(delta), sol.entropy_bits)
    workers = _resolve_threads(threads)

    for n in n_list:
        proj = build_projector(sol, int(n), delta)
        p_err = error_probability(proj, avg)
        q_members = lo_probabilities(proj, ens.bloch)
        sizes = [min(CHUNK, samples - start) for start in range(0, samples, CHUNK)]

        def run_chunk(i: int, n=int(n), proj=proj, q_members=q_members) -> np.ndarray:
            rng = np.random.default_rng(np.random.SeedSequence([seed, n, i]))
            return sequence_fidelities(q_members, probs, n, proj.k_lo, proj.k_hi, sizes[i], rng)

        if workers == 1:
            chunks = [run_chunk(i) for i in range(len(sizes))]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(run_chunk, range(len(sizes))))
        fids = np.concatenate(chunks)
        stderr = float(fids.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
        report.records.append(
            SimulationRecord(
                n_copies=int(n),
                rate_bits=log2_dimension(proj) / n,
                p_error_exact=p_err,
                fidelity_mc_mean=float(fids.mean()),
                fidelity_mc_stderr=stderr,
                fidelity_lower_bound=1.0 - 2.0 * p_err,
                samples=samples,
                seed=seed,
            )
        )
    return report


@dataclass(frozen=True)
class ConverseRecord:
    n_copies: int
    rank_budget_log2: int
    best_retained_trace: float


@dataclass
class ConverseReport:
    rate_budget_bits: float
    records: list[ConverseRecord] = field(default_factory=list)


def best_retained_trace(n: int, p_hi: float, p_lo: float, rank: int) -> float:
    """max Tr(rho^(x)N Q) over projectors Q of rank <= ``rank``.

    Weight classes are taken in decreasing eigenvalue order with exact integer
    class sizes; the last class is split fractionally.
    """
    terms = []
    remaining = rank
    size = 1  # C(n, k)
    ln_hi = math.log(p_hi)
    ln_lo = math.log(p_lo) if p_lo > 0 else -math.inf
    for k in range(n + 1):
        if p_lo == 0.0 and k > 0:
            break
        ln_eig = (n - k) * ln_hi + (k * ln_lo if k else 0.0)
        if size <= remaining:
            terms.append(math.exp(math.log(size) + ln_eig))
            remaining -= size
        else:
            terms.append(math.exp(math.log(remaining) + ln_eig))
            remaining = 0
        if remaining == 0:
            break
        size = size * (n - k) // (k + 1)
    return min(1.0, math.fsum(terms))


def converse_check(sol: JaynesSolution, n_list: Sequence[int], rate_budget_bits: float) -> ConverseReport:
    """Best achievable retained weight when only 2^floor(N*budget) dimensions are kept."""
    if not (rate_budget_bits > 0 and math.isfinite(rate_budget_bits)):
        raise InvalidBudget(f"rate budget must be positive, got {rate_budget_bits!r}")
    r = min(sol.rho_j.radius, 1.0)
    p_hi, p_lo = 0.5 * (1.0 + r), 0.5 * (1.0 - r)
    report = ConverseReport(float(rate_budget_bits))
    for n in n_list:
        m = min(int(n), math.floor(n * rate_budget_bits))
        val = best_retained_trace(int(n), p_hi, p_lo, 2**m)
        report.records.append(ConverseRecord(int(n), m, val))
    return report
