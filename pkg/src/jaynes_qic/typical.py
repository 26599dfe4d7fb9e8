"""Typical subspace of rho^(x)N as a window of Hamming weights.

In the product eigenbasis of rho every basis string is labelled by its weight
k, the number of slots holding the lower-eigenvalue vector. All strings of
weight k share the eigenvalue p_hi^(N-k) p_lo^k, so the entropy-typical
projector is the span of the weights in [k_lo, k_hi], and every trace or
overlap with a product operator reduces to a sum over k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .errors import InvalidDelta, NotPure
from .inference import JaynesSolution
from .qubit import TOL_PURE, EigenFrame2, QubitState


@dataclass(frozen=True, eq=False)
class TypicalProjector:
    n_copies: int
    delta: float
    frame: EigenFrame2
    p_hi: float
    p_lo: float
    k_lo: int
    k_hi: int

    @property
    def window(self) -> tuple[int, int]:
        return self.k_lo, self.k_hi

    @property
    def is_full(self) -> bool:
        return self.k_lo == 0 and self.k_hi == self.n_copies

    @property
    def entropy_bits(self) -> float:
        h = 0.0
        for x in (self.p_hi, self.p_lo):
            if x > 0:
                h -= x * math.log2(x)
        return h

    def with_window(self, k_lo: int, k_hi: int) -> TypicalProjector:
        return TypicalProjector(self.n_copies, self.delta, self.frame, self.p_hi, self.p_lo, k_lo, k_hi)


def is_typical(k: int, n: int, p_hi: float, p_lo: float, delta: float) -> bool:
    """|-(1/N) log2 P(string of weight k) - S| <= delta."""
    if p_lo == 0.0:
        return k == 0
    return abs(k / n - p_lo) * math.log2(p_hi / p_lo) <= delta


def typical_window(n: int, p_hi: float, p_lo: float, delta: float) -> tuple[int, int]:
    if p_lo == 0.0:
        return 0, 0
    if p_hi == p_lo:
        return 0, n
    half = delta / math.log2(p_hi / p_lo)
    if half >= 1.0:
        return 0, n
    k_lo = max(0, math.ceil(n * (p_lo - half)))
    k_hi = min(n, math.floor(n * (p_lo + half)))
    # settle rounding at the edges against the predicate itself
    while k_lo > 0 and is_typical(k_lo - 1, n, p_hi, p_lo, delta):
        k_lo -= 1
    while k_lo <= k_hi and not is_typical(k_lo, n, p_hi, p_lo, delta):
        k_lo += 1
    while k_hi < n and is_typical(k_hi + 1, n, p_hi, p_lo, delta):
        k_hi += 1
    while k_hi >= k_lo and not is_typical(k_hi, n, p_hi, p_lo, delta):
        k_hi -= 1
    if k_lo > k_hi:
        k = min(n, math.floor(n * p_lo + 0.5))
        return k, k
    return k_lo, k_hi


def build_projector(sol: JaynesSolution, n: int, delta: float) -> TypicalProjector:
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidDelta(f"delta must be a positive finite number, got {delta!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    r = min(sol.rho_j.radius, 1.0)
    p_hi, p_lo = 0.5 * (1.0 + r), 0.5 * (1.0 - r)
    k_lo, k_hi = typical_window(n, p_hi, p_lo, delta)
    return TypicalProjector(n, float(delta), sol.frame, p_hi, p_lo, k_lo, k_hi)


def log_binom(n: int, k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def log2_dimension(p: TypicalProjector) -> float:
    """log2 of the number of basis strings in the window."""
    if p.is_full:
        return float(p.n_copies)
    ks = np.arange(p.k_lo, p.k_hi + 1)
    return float(logsumexp(log_binom(p.n_copies, ks))) / math.log(2)


def _binomial_log_mass(n: int, d_hi: float, d_lo: float, k_from: int, k_to: int) -> float:
    """ln sum_{k_from <= k <= k_to} C(n,k) d_hi^(n-k) d_lo^k, -inf when empty or zero."""
    if k_from > k_to:
        return -math.inf
    ks = np.arange(k_from, k_to + 1)
    with np.errstate(divide="ignore"):
        terms = log_binom(n, ks) + xlogy(n - ks, d_hi) + xlogy(ks, d_lo)
    if d_lo == 0.0:
        terms = np.where(ks == 0, terms, -np.inf)
    if d_hi == 0.0:
        terms = np.where(ks == n, terms, -np.inf)
    return float(logsumexp(terms))


def diagonal_in_frame(p: TypicalProjector, s: QubitState) -> tuple[float, float]:
    """(<e_hi|s|e_hi>, <e_lo|s|e_lo>) for the projector's eigenbasis."""
    c = float(s.bloch @ p.frame.bloch_axes()[2])
    c = min(1.0, max(-1.0, c))
    return 0.5 * (1.0 + c), 0.5 * (1.0 - c)


def trace_against_product(p: TypicalProjector, s: QubitState) -> float:
    """Tr(s^(x)N P)."""
    d_hi, d_lo = diagonal_in_frame(p, s)
    val = math.exp(_binomial_log_mass(p.n_copies, d_hi, d_lo, p.k_lo, p.k_hi))
    return min(1.0, val)


def error_probability(p: TypicalProjector, s: QubitState) -> float:
    """Tr(s^(x)N (I - P)), summed over the complement of the window directly."""
    d_hi, d_lo = diagonal_in_frame(p, s)
    lo = _binomial_log_mass(p.n_copies, d_hi, d_lo, 0, p.k_lo - 1)
    hi = _binomial_log_mass(p.n_copies, d_hi, d_lo, p.k_hi + 1, p.n_copies)
    return min(1.0, math.exp(lo) + math.exp(hi))


def poisson_binomial_pmf(q: Sequence[float]) -> np.ndarray:
    """pmf of a sum of independent Bernoulli(q_i), length len(q) + 1."""
    q = np.asarray(q, dtype=float)
    pmf = np.zeros(q.size + 1)
    pmf[0] = 1.0
    for i, qi in enumerate(q):
        head = pmf[: i + 2].copy()
        pmf[1 : i + 2] = head[1:] * (1.0 - qi) + head[:-1] * qi
        pmf[0] = head[0] * (1.0 - qi)
    return pmf


def window_mass_batch(q: np.ndarray, k_lo: int, k_hi: int) -> np.ndarray:
    """P(k_lo <= K <= k_hi) for each row of q, K the row's Poisson-binomial sum.

    Only weights up to k_hi are tracked; mass above never flows back down.
    """
    q = np.atleast_2d(np.asarray(q, dtype=float))
    rows, n = q.shape
    width = k_hi + 1
    pmf = np.zeros((rows, width))
    pmf[:, 0] = 1.0
    for i in range(n):
        top = min(i + 2, width)
        qi = q[:, i : i + 1]
        head = pmf[:, :top]
        new = head * (1.0 - qi)
        new[:, 1:] += head[:, : top - 1] * qi
        pmf[:, :top] = new
    return np.clip(pmf[:, k_lo:width].sum(axis=1), 0.0, 1.0)


def lo_probabilities(p: TypicalProjector, bloch: np.ndarray) -> np.ndarray:
    """|<e_lo|psi>|^2 for pure states given as rows of Bloch vectors."""
    c = np.asarray(bloch, dtype=float) @ p.frame.bloch_axes()[2]
    return np.clip(0.5 * (1.0 - c), 0.0, 1.0)


def flag_overlap_batch(q: np.ndarray, k_lo: int) -> np.ndarray:
    """|<flag|Psi>|^2 per row; the flag string holds e_lo in its first k_lo slots."""
    q = np.atleast_2d(q)
    factors = np.concatenate([q[:, :k_lo], 1.0 - q[:, k_lo:]], axis=1)
    return np.prod(factors, axis=1)


def _pure_bloch(p: TypicalProjector, qs: Sequence[QubitState]) -> np.ndarray:
    if len(qs) != p.n_copies:
        raise ValueError(f"expected {p.n_copies} states, got {len(qs)}")
    for s in qs:
        if not s.is_pure(TOL_PURE):
            raise NotPure(f"state with |r| = {s.radius!r} is not pure")
    return np.array([s.bloch for s in qs])


def overlap_product_pure(p: TypicalProjector, qs: Sequence[QubitState]) -> float:
    """<Psi|P|Psi> for the product of pure states qs."""
    q = lo_probabilities(p, _pure_bloch(p, qs))
    return float(window_mass_batch(q[None, :], p.k_lo, p.k_hi)[0])


def flag_string_overlap(p: TypicalProjector, qs: Sequence[QubitState]) -> float:
    q = lo_probabilities(p, _pure_bloch(p, qs))
    return float(flag_overlap_batch(q[None, :], p.k_lo)[0])
