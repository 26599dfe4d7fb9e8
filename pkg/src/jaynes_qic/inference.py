"""Maximum-entropy (Jaynes) reconstruction of a qubit from measured means.

Two independent routes are provided. ``infer_one`` and ``infer_two`` work in
the eigenbasis of the first observable and write the state down directly.
``infer_general`` works in Bloch space: every constraint Tr(rho A) = m is the
plane n.r = m - tr(A)/2, and because entropy falls strictly with |r| the
Jaynes state is the point of the constraint set closest to the origin.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateObservable,
    EmptyConstraintSet,
    InconsistentData,
    OutOfFamilyRange,
)
from .qubit import (
    EigenFrame2,
    Hermitian2,
    QubitState,
    binary_entropy,
    eig2,
    entropy_bits,
    expectation,
)

TOL_CONSISTENCY = 1e-9
RANK_THRESHOLD = 1e-10


@dataclass(frozen=True)
class Constraint:
    observable: Hermitian2
    mean: float

    def __post_init__(self):
        object.__setattr__(self, "mean", float(self.mean))
        if not math.isfinite(self.mean):
            raise ValueError("constraint mean must be finite")


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[Constraint, ...]
    tol_consistency: float = TOL_CONSISTENCY

    def __post_init__(self):
        cons = tuple(self.constraints)
        if not cons:
            raise EmptyConstraintSet("at least one constraint is required")
        if len(cons) > 3:
            raise ValueError(f"at most 3 constraints are supported, got {len(cons)}")
        object.__setattr__(self, "constraints", cons)

    @classmethod
    def of(cls, *pairs: tuple[Hermitian2, float], tol: float = TOL_CONSISTENCY) -> ConstraintSet:
        return cls(tuple(Constraint(a, m) for a, m in pairs), tol)

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)


class FamilyKind(str, enum.Enum):
    POINT = "point"
    SEGMENT = "segment"
    DISK = "disk"
    BALL = "ball"


@dataclass(frozen=True, eq=False)
class ConsistentFamily:
    """All states matching the data: anchor + 2 * sum(p_i * axes_i), |p| <= radius.

    Parameters are in matrix-element units: for a segment the parameter is the
    imaginary part added to the off-diagonal of the anchor in the data frame,
    for a disk it is the complex off-diagonal (re, im).
    """

    kind: FamilyKind
    anchor: QubitState
    axes: tuple[np.ndarray, ...] = ()
    radius: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.axes)

    def state(self, params: Sequence[float] = ()) -> QubitState:
        p = [float(x) for x in params]
        if not any(p):
            return self.anchor
        if len(p) != self.dim:
            raise OutOfFamilyRange(f"{self.kind.value} family takes {self.dim} parameters, got {len(p)}")
        norm = math.sqrt(sum(x * x for x in p))
        if norm > self.radius * (1 + 1e-12) + 1e-15:
            raise OutOfFamilyRange(f"|params| = {norm!r} exceeds family radius {self.radius!r}")
        r = self.anchor.bloch.copy()
        for x, u in zip(p, self.axes):
            r += 2.0 * x * u
        return QubitState.from_bloch(r)


@dataclass(frozen=True, eq=False)
class JaynesSolution:
    rho_j: QubitState
    entropy_bits: float
    frame: EigenFrame2
    family: ConsistentFamily
    data_rank: int
    constraints: ConstraintSet
    # basis of the first observable, rephased so the second one's off-diagonal is real >= 0
    data_frame: EigenFrame2 = field(repr=False)

    @property
    def data_view(self) -> Hermitian2:
        """rho_J written in the data frame: (rho11, rho22, d)."""
        return self.data_frame.view(self.rho_j.as_hermitian())

    @property
    def entropy_nats(self) -> float:
        return self.entropy_bits * math.log(2)


def _in_spectrum(mean: float, a1: float, a2: float, tol: float) -> tuple[float, float]:
    if mean > a1 + tol or mean < a2 - tol:
        raise InconsistentData(f"mean {mean!r} outside the spectrum [{a2!r}, {a1!r}]")
    span = a1 - a2
    r11 = min(1.0, max(0.0, (mean - a2) / span))
    r22 = min(1.0, max(0.0, (a1 - mean) / span))
    return r11, r22


def _is_degenerate(f: EigenFrame2) -> bool:
    scale = max(1.0, abs(f.lambda_hi), abs(f.lambda_lo))
    return f.lambda_hi - f.lambda_lo <= 1e-12 * scale


def _point(anchor: QubitState) -> ConsistentFamily:
    return ConsistentFamily(FamilyKind.POINT, anchor)


def infer_one(a: Hermitian2, mean: float, tol: float = TOL_CONSISTENCY) -> JaynesSolution:
    """Jaynes state for a single measured observable.

    The state is the diagonal of any consistent rho in A's eigenbasis; every
    other consistent state differs from it by an off-diagonal z with
    |z|^2 <= rho11 * rho22.
    """
    cs = ConstraintSet.of((a, mean), tol=tol)
    fa = eig2(a)
    if _is_degenerate(fa):
        if abs(mean - fa.lambda_hi) <= tol:
            return infer_general(cs)
        raise InconsistentData(f"A is proportional to I with value {fa.lambda_hi!r}, mean is {mean!r}")
    r11, r22 = _in_spectrum(mean, fa.lambda_hi, fa.lambda_lo, tol)
    axes = fa.bloch_axes()
    rho = QubitState.from_bloch((r11 - r22) * axes[2])
    v, w = fa.basis
    frame = EigenFrame2(r11, r22, (v, w)) if r11 >= r22 else EigenFrame2(r22, r11, (w, v))
    radius = math.sqrt(r11 * r22)
    family = (
        ConsistentFamily(FamilyKind.DISK, rho, (axes[0], -axes[1]), radius) if radius > 0 else _point(rho)
    )
    return JaynesSolution(rho, binary_entropy(r11, r22), frame, family, 1, cs, fa)


def infer_two(
    a: Hermitian2, mean_a: float, b: Hermitian2, mean_b: float, tol: float = TOL_CONSISTENCY
) -> JaynesSolution:
    """Jaynes state for two measured observables.

    In A's eigenbasis, with the phase of |w> chosen so B's off-diagonal c is
    real and non-negative, rho_J = [[rho11, d], [d, rho22]] and the consistent
    states are rho_J + i*gamma*[[0, 1], [-1, 0]] for |gamma| <= g.
    """
    cs = ConstraintSet.of((a, mean_a), (b, mean_b), tol=tol)
    fa = eig2(a)
    if _is_degenerate(fa):
        raise DegenerateObservable("first observable has a degenerate spectrum")
    bv = fa.view(b)
    c = abs(bv.h12)
    if c <= RANK_THRESHOLD * max(math.hypot(*b.bloch), 1e-300):
        # B diagonal in A's basis, possibly a combination of I and A
        return infer_general(cs)
    r11, r22 = _in_spectrum(mean_a, fa.lambda_hi, fa.lambda_lo, tol)
    frame_d = fa.rephased(-cmath.phase(bv.h12))
    b1, b2 = bv.h11, bv.h22
    d = (mean_b - b1 * r11 - b2 * r22) / (2.0 * c)
    bound = math.sqrt(r11 * r22)
    if abs(d) > bound:
        if 2.0 * c * (abs(d) - bound) > tol:
            raise InconsistentData(f"no positive state: d^2 = {d * d!r} > rho11*rho22 = {r11 * r22!r}")
        d = math.copysign(bound, d)
    g = math.sqrt(max(0.0, r11 * r22 - d * d))

    axes = frame_d.bloch_axes()
    rho = QubitState.from_bloch(2.0 * d * axes[0] + (r11 - r22) * axes[2])
    # real symmetric in the data frame, so a real rotation diagonalises it
    fr = eig2(Hermitian2(r11, r22, d))
    u = frame_d.unitary()
    e_hi, e_lo = (tuple(u @ np.array(v)) for v in fr.basis)
    frame = EigenFrame2(fr.lambda_hi, fr.lambda_lo, (e_hi, e_lo))
    family = ConsistentFamily(FamilyKind.SEGMENT, rho, (-axes[1],), g) if g > 0 else _point(rho)
    s_j = binary_entropy(fr.lambda_hi, fr.lambda_lo)
    return JaynesSolution(rho, s_j, frame, family, 2, cs, frame_d)


def _data_frame(normals: list[int], cs: ConstraintSet) -> EigenFrame2:
    if not normals:
        return eig2(Hermitian2(1.0, -1.0))
    fa = eig2(cs.constraints[normals[0]].observable)
    if len(normals) > 1:
        off = fa.view(cs.constraints[normals[1]].observable).h12
        fa = fa.rephased(-cmath.phase(off))
    return fa


def infer_general(cs: ConstraintSet) -> JaynesSolution:
    """Minimum-norm Bloch vector on the affine set cut out by 1-3 constraints.

    Dependent constraints are checked against each other and dropped through
    the rank-revealing SVD; rank 0 (only multiples of I) leaves the whole ball.
    """
    tol = cs.tol_consistency
    n = np.array([c.observable.bloch for c in cs], dtype=float)
    m = np.array([c.mean - c.observable.trace_part for c in cs])
    row_norms = np.linalg.norm(n, axis=1)
    scale = row_norms.max()

    r0 = np.zeros(3)
    rank = 0
    if scale > 0:
        uu, sv, vt = np.linalg.svd(n)
        rank = int(np.sum(sv > RANK_THRESHOLD * sv[0]))
        for i in range(rank):
            r0 += vt[i] * (uu[:, i] @ m) / sv[i]
    if np.any(np.abs(n @ r0 - m) > tol):
        raise InconsistentData("linearly dependent constraints have conflicting means")
    length = float(np.linalg.norm(r0))
    if length > 1.0:
        r0 = r0 / length
        if np.any(np.abs(n @ r0 - m) > tol):
            raise InconsistentData("the constraint set does not meet the Bloch ball")
        length = 1.0
    rho = QubitState.from_bloch(r0)

    # first two linearly independent observables define the data frame
    normals: list[int] = []
    for j, row in enumerate(n):
        if row_norms[j] <= RANK_THRESHOLD * scale or len(normals) == 2:
            continue
        if normals:
            first = n[normals[0]] / row_norms[normals[0]]
            if np.linalg.norm(np.cross(first, row / row_norms[j])) <= RANK_THRESHOLD:
                continue
        normals.append(j)
    fd = _data_frame(normals, cs)
    axes = fd.bloch_axes()

    radius = 0.5 * math.sqrt(max(0.0, (1.0 - length) * (1.0 + length)))
    if rank == 3 or radius == 0.0:
        family = _point(rho)
    elif rank == 2:
        family = ConsistentFamily(FamilyKind.SEGMENT, rho, (-axes[1],), radius)
    elif rank == 1:
        family = ConsistentFamily(FamilyKind.DISK, rho, (axes[0], -axes[1]), radius)
    else:
        family = ConsistentFamily(FamilyKind.BALL, rho, tuple(np.eye(3)), radius)

    frame = eig2(rho.as_hermitian()) if length > 0 else EigenFrame2(0.5, 0.5, fd.basis)
    return JaynesSolution(rho, entropy_bits(rho), frame, family, rank, cs, fd)


def infer(cs: ConstraintSet) -> JaynesSolution:
    """Dispatch to the explicit route where one exists."""
    c = cs.constraints
    if len(c) == 1:
        return infer_one(c[0].observable, c[0].mean, cs.tol_consistency)
    if len(c) == 2 and not _is_degenerate(eig2(c[0].observable)):
        return infer_two(c[0].observable, c[0].mean, c[1].observable, c[1].mean, cs.tol_consistency)
    return infer_general(cs)


def family_state(sol: JaynesSolution, params: Sequence[float] = ()) -> QubitState:
    return sol.family.state(params)


def check_consistency(s: QubitState, cs: ConstraintSet) -> bool:
    return all(abs(expectation(s, c.observable) - c.mean) <= cs.tol_consistency for c in cs)


def _entropy_of_radius(r: np.ndarray) -> np.ndarray:
    r = np.minimum(r, 1.0)
    p, q = 0.5 * (1 + r), 0.5 * (1 - r)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(p * np.log2(p)) - np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return h


def family_grid(sol: JaynesSolution, grid_points: int) -> np.ndarray:
    """In-range parameter points of a uniform grid over the family, shape (k, dim)."""
    fam = sol.family
    if fam.dim == 0:
        return np.zeros((1, 0))
    ticks = np.linspace(-fam.radius, fam.radius, grid_points)
    mesh = np.stack(np.meshgrid(*([ticks] * fam.dim), indexing="ij"), axis=-1).reshape(-1, fam.dim)
    keep = np.linalg.norm(mesh, axis=1) <= fam.radius
    return mesh[keep]


def entropy_scan(sol: JaynesSolution, grid_points: int) -> tuple[float, tuple[float, ...]]:
    """Largest entropy over a grid on the consistent family, and where it occurs."""
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    if sol.family.dim == 0:
        return sol.entropy_bits, ()
    params = family_grid(sol, grid_points)
    fam = sol.family
    pts = fam.anchor.bloch + 2.0 * params @ np.array(fam.axes)
    h = _entropy_of_radius(np.linalg.norm(pts, axis=1))
    i = int(np.argmax(h))
    return float(h[i]), tuple(float(x) for x in params[i])
