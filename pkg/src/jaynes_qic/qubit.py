"""Closed-form algebra for 2x2 Hermitian operators and one-qubit states.

States are stored as Bloch vectors, rho = (I + r.sigma) / 2, so trace and
hermiticity hold by construction. All entropies are in bits.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotDensityMatrix, NotPure

TOL_PSD = 1e-12
TOL_TRACE = 1e-9
TOL_PURE = 1e-9

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class Hermitian2:
    """2x2 Hermitian matrix [[h11, h12], [conj(h12), h22]]."""

    h11: float
    h22: float
    h12: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "h11", float(self.h11))
        object.__setattr__(self, "h22", float(self.h22))
        object.__setattr__(self, "h12", complex(self.h12))
        if not all(math.isfinite(v) for v in (self.h11, self.h22, self.h12.real, self.h12.imag)):
            raise ValueError("Hermitian2 entries must be finite")

    @classmethod
    def from_bloch(cls, a0: float, n) -> Hermitian2:
        """Build a0*I + n.sigma."""
        nx, ny, nz = (float(v) for v in n)
        return cls(a0 + nz, a0 - nz, complex(nx, -ny))

    @property
    def trace_part(self) -> float:
        return 0.5 * (self.h11 + self.h22)

    @property
    def bloch(self) -> tuple[float, float, float]:
        """Traceless part n with H = trace_part*I + n.sigma."""
        return (self.h12.real, -self.h12.imag, 0.5 * (self.h11 - self.h22))

    def matrix(self) -> np.ndarray:
        return np.array([[self.h11, self.h12], [self.h12.conjugate(), self.h22]], dtype=complex)


SIGMA_X = Hermitian2(0.0, 0.0, 1.0)
SIGMA_Y = Hermitian2(0.0, 0.0, -1j)
SIGMA_Z = Hermitian2(1.0, -1.0, 0.0)


@dataclass(frozen=True)
class QubitState:
    """One-qubit density matrix held as its Bloch vector.

    Vectors with |r| in (1, 1 + TOL_PSD] are clipped radially onto the
    sphere; anything longer raises NotDensityMatrix.
    """

    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        rx, ry, rz = float(self.rx), float(self.ry), float(self.rz)
        if not all(math.isfinite(v) for v in (rx, ry, rz)):
            raise NotDensityMatrix("Bloch components must be finite")
        norm = math.sqrt(rx * rx + ry * ry + rz * rz)
        if norm > 1.0 + TOL_PSD:
            raise NotDensityMatrix(f"Bloch vector length {norm!r} exceeds 1")
        if norm > 1.0:
            rx, ry, rz = rx / norm, ry / norm, rz / norm
        object.__setattr__(self, "rx", rx)
        object.__setattr__(self, "ry", ry)
        object.__setattr__(self, "rz", rz)

    @classmethod
    def from_bloch(cls, r) -> QubitState:
        x, y, z = (float(v) for v in r)
        return cls(x, y, z)

    @classmethod
    def maximally_mixed(cls) -> QubitState:
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_ket(cls, psi) -> QubitState:
        """Pure state |psi><psi| for a (not necessarily normalised) 2-vector."""
        a, b = complex(psi[0]), complex(psi[1])
        nrm = abs(a) ** 2 + abs(b) ** 2
        if nrm == 0:
            raise ValueError("zero vector")
        ab = a.conjugate() * b / nrm
        return cls(2 * ab.real, 2 * ab.imag, (abs(a) ** 2 - abs(b) ** 2) / nrm)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz])

    @property
    def radius(self) -> float:
        return math.sqrt(self.rx * self.rx + self.ry * self.ry + self.rz * self.rz)

    @property
    def h11(self) -> float:
        return 0.5 * (1.0 + self.rz)

    @property
    def h22(self) -> float:
        return 0.5 * (1.0 - self.rz)

    @property
    def h12(self) -> complex:
        return complex(0.5 * self.rx, -0.5 * self.ry)

    def as_hermitian(self) -> Hermitian2:
        return Hermitian2(self.h11, self.h22, self.h12)

    def matrix(self) -> np.ndarray:
        return self.as_hermitian().matrix()

    @property
    def eigenvalues(self) -> tuple[float, float]:
        r = self.radius
        return 0.5 * (1.0 + r), 0.5 * (1.0 - r)

    def is_pure(self, tol: float = TOL_PURE) -> bool:
        return abs(self.radius - 1.0) <= tol

    def ket(self) -> np.ndarray:
        """State vector of a pure state (phase per the eig2 convention)."""
        if not self.is_pure():
            raise NotPure(f"state with |r| = {self.radius!r} is not pure")
        e_hi = eig2(Hermitian2.from_bloch(0.0, self.bloch)).basis[0]
        return np.array(e_hi, dtype=complex)


@dataclass(frozen=True)
class EigenFrame2:
    """Eigenvalues (descending) and matching orthonormal eigenvectors."""

    lambda_hi: float
    lambda_lo: float
    basis: tuple[tuple[complex, complex], tuple[complex, complex]] = field(repr=False)

    def unitary(self) -> np.ndarray:
        """Matrix whose columns are e_hi, e_lo."""
        return np.array(self.basis, dtype=complex).T

    def bloch_axes(self) -> np.ndarray:
        """Rows: lab Bloch vectors of the frame's sigma_x', sigma_y', sigma_z'.

        z' points along |e_hi>; the rows form a proper rotation.
        """
        (a1, b1), (a2, b2) = self.basis
        # <e_lo| sigma_k |e_hi> for k = x, y, z
        cx = a2.conjugate() * b1 + b2.conjugate() * a1
        cy = -1j * a2.conjugate() * b1 + 1j * b2.conjugate() * a1
        cz = a2.conjugate() * a1 - b2.conjugate() * b1
        xa = [cx.real, cy.real, cz.real]
        ya = [cx.imag, cy.imag, cz.imag]
        hi = a1.conjugate() * b1
        za = [2 * hi.real, 2 * hi.imag, abs(a1) ** 2 - abs(b1) ** 2]
        return np.array([xa, ya, za])

    def rephased(self, alpha: float) -> EigenFrame2:
        """Same frame with e_lo multiplied by exp(i alpha)."""
        ph = cmath.exp(1j * alpha)
        e_lo = tuple(ph * c for c in self.basis[1])
        return EigenFrame2(self.lambda_hi, self.lambda_lo, (self.basis[0], e_lo))

    def view(self, m: Hermitian2) -> Hermitian2:
        """Matrix elements of m in this basis."""
        u = self.unitary()
        h = u.conj().T @ m.matrix() @ u
        return Hermitian2(h[0, 0].real, h[1, 1].real, h[0, 1])

    def reconstruct(self) -> np.ndarray:
        u = self.unitary()
        return u @ np.diag([self.lambda_hi, self.lambda_lo]) @ u.conj().T


def _phase_fix(v0: complex, v1: complex) -> tuple[complex, complex]:
    if v0 != 0:
        return complex(abs(v0)), v1 * (v0.conjugate() / abs(v0))
    return 0j, complex(abs(v1))


def eig2(m: Hermitian2) -> EigenFrame2:
    """Analytic eigen-decomposition of a 2x2 Hermitian matrix.

    Eigenvectors have their first nonzero component real and positive.
    A degenerate matrix gets the canonical basis.
    """
    a0 = m.trace_part
    nx, ny, nz = m.bloch
    r = math.sqrt(nx * nx + ny * ny + nz * nz)
    if r == 0.0:
        return EigenFrame2(a0, a0, ((1 + 0j, 0j), (0j, 1 + 0j)))
    # +r eigenvector of n.sigma; pick the form without cancellation
    if nz >= 0:
        v0, v1 = complex(r + nz), complex(nx, ny)
    else:
        v0, v1 = complex(nx, -ny), complex(r - nz)
    s = math.sqrt(abs(v0) ** 2 + abs(v1) ** 2)
    v0, v1 = _phase_fix(v0 / s, v1 / s)
    w0, w1 = _phase_fix(-v1.conjugate(), v0.conjugate())
    return EigenFrame2(a0 + r, a0 - r, ((v0, v1), (w0, w1)))


def state_from_matrix(h11: float, h22: float, h12: complex) -> QubitState:
    """Validate a density matrix and return its Bloch form."""
    h12 = complex(h12)
    if abs(h11 + h22 - 1.0) > TOL_TRACE:
        raise NotDensityMatrix(f"trace {h11 + h22!r} != 1")
    rz = h11 - h22
    rx, ry = 2 * h12.real, -2 * h12.imag
    if math.sqrt(rx * rx + ry * ry + rz * rz) > 1.0 + TOL_PSD:
        raise NotDensityMatrix("matrix has a negative eigenvalue")
    return QubitState(rx, ry, rz)


def binary_entropy(p: float, q: float | None = None) -> float:
    """H(p) in bits; pass q = 1 - p explicitly when it is known more accurately."""
    if q is None:
        q = 1.0 - p
    h = 0.0
    for x in (p, q):
        if x > 0:
            h -= x * math.log2(x)
    return h


def entropy_bits(s: QubitState) -> float:
    r = min(s.radius, 1.0)
    return binary_entropy(0.5 * (1.0 + r), 0.5 * (1.0 - r))


def expectation(s: QubitState, a: Hermitian2) -> float:
    """Tr(rho A)."""
    nx, ny, nz = a.bloch
    return a.trace_part + nx * s.rx + ny * s.ry + nz * s.rz


def fidelity(rho: QubitState, sigma: QubitState) -> float:
    """Uhlmann fidelity, squared convention, via the qubit closed form."""
    r, s = rho.bloch, sigma.bloch
    rr, ss = rho.radius, sigma.radius
    # sqrt(det) is ill-conditioned at the sphere: snap last-ulp deficits to pure
    rr = 1.0 if 1.0 - rr < 1e-15 else rr
    ss = 1.0 if 1.0 - ss < 1e-15 else ss
    det_term = max(0.0, (1 - rr) * (1 + rr) * (1 - ss) * (1 + ss))
    f = 0.5 * (1.0 + float(r @ s) + math.sqrt(det_term))
    return min(1.0, max(0.0, f))
