"""Exact two-qubit state algebra.

Pauli decomposition and reconstruction, partial transpose/trace, local-unitary
canonicalization of the correlation tensor, and the Wootters concurrence.
Basis order everywhere is |00>, |01>, |10>, |11>.  All functions are pure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DegenerateFrame, InvalidState

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

I2 = np.eye(2)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

# |beta_1..4| = (|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>), normalized
BELL_VECTORS = np.array(
    [
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
    ],
    dtype=complex,
) / np.sqrt(2)

BELL_STATES = [np.outer(v, v.conj()) for v in BELL_VECTORS]


@dataclass(frozen=True)
class PauliForm:
    """Bloch vectors and full 3x3 correlation tensor of a two-qubit matrix."""

    r: np.ndarray
    s: np.ndarray
    g: np.ndarray


@dataclass(frozen=True)
class DiagonalPauliForm:
    """Pauli form with the correlation tensor reduced to its diagonal."""

    r: np.ndarray
    s: np.ndarray
    q: np.ndarray

    def as_pauli(self) -> PauliForm:
        return PauliForm(self.r, self.s, np.diag(self.q))


@dataclass(frozen=True)
class LocalUnitary:
    """A product unitary U_A (x) U_B acting on the two qubits."""

    u_a: np.ndarray
    u_b: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.kron(self.u_a, self.u_b)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        u = self.matrix()
        return u @ rho @ u.conj().T

    def inverse(self) -> "LocalUnitary":
        return LocalUnitary(self.u_a.conj().T, self.u_b.conj().T)

    def compose(self, other: "LocalUnitary") -> "LocalUnitary":
        """The unitary acting as `self` after `other`."""
        return LocalUnitary(self.u_a @ other.u_a, self.u_b @ other.u_b)


def validate_density_matrix(rho: np.ndarray, psd_tol: float = PSD_TOL) -> None:
    """Raise InvalidState on the first violated density-matrix invariant."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidState("shape 4x4", float(np.prod(rho.shape)))
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise InvalidState("Hermiticity", herm)
    tr = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    if tr > TRACE_TOL:
        raise InvalidState("unit trace", tr)
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    if lam_min < -psd_tol:
        raise InvalidState("positive semidefiniteness", -lam_min)


def is_valid_density_matrix(rho: np.ndarray, psd_tol: float = PSD_TOL) -> bool:
    try:
        validate_density_matrix(rho, psd_tol)
    except InvalidState:
        return False
    return True


def partial_trace(rho: np.ndarray, keep: int) -> np.ndarray:
    """Trace out one qubit; keep=0 returns rho_A, keep=1 returns rho_B."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ikjk->ij", r)
    return np.einsum("kikj->ij", r)


def to_pauli(rho: np.ndarray) -> PauliForm:
    """Bloch vectors r, s and correlation tensor g_ij = tr(rho sigma_i x sigma_j)."""
    rho = np.asarray(rho, dtype=complex)
    rho_a = partial_trace(rho, 0)
    rho_b = partial_trace(rho, 1)
    r = np.array([np.trace(rho_a @ p).real for p in PAULI])
    s = np.array([np.trace(rho_b @ p).real for p in PAULI])
    g = np.array(
        [[np.trace(rho @ np.kron(pi, pj)).real for pj in PAULI] for pi in PAULI]
    )
    return PauliForm(r, s, g)


def from_pauli(p: PauliForm) -> np.ndarray:
    """Reconstruct the 4x4 matrix; Hermitian and unit trace, not necessarily PSD."""
    m = np.kron(I2, I2).astype(complex)
    for i in range(3):
        m += p.r[i] * np.kron(PAULI[i], I2)
        m += p.s[i] * np.kron(I2, PAULI[i])
        for j in range(3):
            m += p.g[i, j] * np.kron(PAULI[i], PAULI[j])
    return m / 4.0


def from_diagonal_pauli(r, s, q) -> np.ndarray:
    """Reconstruction for a diagonal correlation tensor; r, s, q are 3-vectors."""
    return from_pauli(PauliForm(np.asarray(r, float), np.asarray(s, float), np.diag(q)))


def bell_diagonal(t) -> np.ndarray:
    """Bell-diagonal state with correlation vector t (zero Bloch vectors)."""
    return from_diagonal_pauli(np.zeros(3), np.zeros(3), t)


def min_eigenvalue(rho: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(rho)[0])


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose on the second qubit."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def min_pt_eigenvalue(rho: np.ndarray) -> float:
    return min_eigenvalue(partial_transpose(rho))


def is_ppt(rho: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Peres-Horodecki test; for two qubits PPT is equivalent to separability."""
    return min_pt_eigenvalue(rho) >= -tol


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence; zero exactly on the separable set."""
    rho = np.asarray(rho, dtype=complex)
    yy = np.kron(SY, SY)
    rho_tilde = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ rho_tilde).real
    ev = np.sqrt(np.clip(ev, 0.0, None))
    ev.sort()
    return float(max(0.0, ev[3] - ev[2] - ev[1] - ev[0]))


def su2_from_rotation(rot: np.ndarray) -> np.ndarray:
    """Lift an SO(3) matrix R to U in SU(2) with U (v.sigma) U^dag = (Rv).sigma."""
    x, y, z, w = Rotation.from_matrix(rot).as_quat()
    return w * I2 - 1j * (x * SX + y * SY + z * SZ)


def rotation_from_su2(u: np.ndarray) -> np.ndarray:
    """The SO(3) action of conjugation by a single-qubit unitary."""
    return np.array(
        [[0.5 * np.trace(PAULI[i] @ u @ PAULI[j] @ u.conj().T).real for j in range(3)]
         for i in range(3)]
    )


def _signed_permutation(perm, signs) -> np.ndarray:
    """3x3 matrix P with (P v)_i = signs[i] * v[perm[i]]."""
    m = np.zeros((3, 3))
    for i in range(3):
        m[i, perm[i]] = signs[i]
    return m


def signed_permutation_frames():
    """All SO(3) signed-permutation pairs (P_A, P_B) preserving diagonality.

    Both factors carry the same index permutation; determinant-one sign
    patterns on each side.  Yields (P_A, P_B) as 3x3 matrices.
    """
    sign_patterns = [np.array(s) for s in
                     [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1),
                      (-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)]]
    for perm in permutations(range(3)):
        det_p = np.linalg.det(_signed_permutation(perm, (1, 1, 1)))
        for d1 in sign_patterns:
            if np.prod(d1) * det_p < 0:
                continue
            for d2 in sign_patterns:
                if np.prod(d2) * det_p < 0:
                    continue
                yield _signed_permutation(perm, d1), _signed_permutation(perm, d2)


def canonicalize(rho: np.ndarray, degeneracy_tol: float = 1e-8):
    """Diagonalize the correlation tensor by a local unitary.

    Returns (DiagonalPauliForm, LocalUnitary) where the unitary maps rho to
    the diagonal-frame state.  The frame is fixed by sorting |q| descending
    with q1, q2 >= 0 and the sign of the product q1*q2*q3 carried by q3.
    Warns DegenerateFrame when singular values of g coincide, in which case
    any valid frame is acceptable.
    """
    p = to_pauli(rho)
    o1, sv, o2t = np.linalg.svd(p.g)
    o2 = o2t.T
    q = sv.copy()
    if np.linalg.det(o1) < 0:
        o1 = o1.copy()
        o1[:, 2] *= -1
        q[2] *= -1
    if np.linalg.det(o2) < 0:
        o2 = o2.copy()
        o2[:, 2] *= -1
        q[2] *= -1
    if np.min(np.abs(np.diff(np.sort(sv)))) < degeneracy_tol:
        warnings.warn("correlation tensor has (near-)degenerate singular values; "
                      "diagonal frame is not unique", DegenerateFrame, stacklevel=2)

    r_a, r_b = o1.T, o2.T  # g -> r_a g r_b^T = diag(q)

    # sort |q| descending with the same permutation on both sides (q signs
    # unchanged; an odd permutation is repaired by a matching sign on each side)
    order = tuple(np.argsort(-np.abs(q)))
    fix = (1, 1, 1) if np.linalg.det(_signed_permutation(order, (1, 1, 1))) > 0 \
        else (-1, 1, 1)
    pa = _signed_permutation(order, fix)
    r_a = pa @ r_a
    r_b = pa @ r_b
    q = q[list(order)]

    # pair sign flips (det-one diagonals on the A side) to make q1, q2 >= 0;
    # the sign of the product q1*q2*q3 is a local-unitary invariant and lands on q3
    if q[0] < 0 and q[1] < 0:
        d1 = np.diag([-1.0, -1.0, 1.0])
    elif q[0] < 0:
        d1 = np.diag([-1.0, 1.0, -1.0])
    elif q[1] < 0:
        d1 = np.diag([1.0, -1.0, -1.0])
    else:
        d1 = np.eye(3)
    r_a = d1 @ r_a
    q = np.diag(d1) * q

    lu = LocalUnitary(su2_from_rotation(r_a), su2_from_rotation(r_b))
    dpf = DiagonalPauliForm(r_a @ p.r, r_b @ p.s, q)
    return dpf, lu
