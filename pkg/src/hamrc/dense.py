"""Dense matrix backend: building operators, exponentials, norms, distances.

Qubit 0 is always the leftmost Kronecker factor.  Exponentials go through
a Hermitian eigendecomposition so the result is unitary to machine
precision; the operator norm is the largest singular value, which is the
metric every error bound in this package is stated in.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, NotHermitian
from .pauli import HamExpansion, PauliString

HERMITIAN_TOL = 1e-10
#: largest register built densely unless the caller raises the cap
DEFAULT_DENSE_CAP = 10

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_all(factors) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def dense_of_pauli(term: PauliString) -> np.ndarray:
    """Dense matrix of a Pauli string, qubit 0 leftmost."""
    return kron_all(PAULI_MATS[o] for o in term.ops)


def dense_of_expansion(ham: HamExpansion) -> np.ndarray:
    """Dense Hermitian matrix of a real Pauli expansion."""
    dim = 2**ham.n
    out = np.zeros((dim, dim), dtype=complex)
    for p, c in ham.items():
        out += c * dense_of_pauli(p)
    return out


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value (spectral norm)."""
    return float(np.linalg.norm(a, 2))


def expm_hermitian(a: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i*t*a) for Hermitian ``a`` via spectral decomposition.

    Raises :class:`NotHermitian` when the Hermiticity defect exceeds
    1e-10 in operator norm.
    """
    defect = operator_norm(a - a.conj().T)
    if defect > HERMITIAN_TOL:
        raise NotHermitian(f"Hermiticity defect {defect:.3e}")
    evals, vecs = np.linalg.eigh(a)
    return (vecs * np.exp(-1j * t * evals)) @ vecs.conj().T


def phase_match(w: np.ndarray, w_prime: np.ndarray) -> complex:
    """Unit phase aligning ``w_prime`` to ``w`` via the trace overlap.

    Returns exp(i*arg(tr(w^dag w_prime))) conjugated so that multiplying
    ``w_prime`` by it cancels the relative global phase; falls back to 1
    when the overlap vanishes.
    """
    overlap = np.trace(w.conj().T @ w_prime)
    if abs(overlap) == 0.0:
        return 1.0 + 0.0j
    return complex(overlap / abs(overlap)).conjugate()


def distance(w: np.ndarray, w_prime: np.ndarray, phase_align: bool = True) -> float:
    """Operator-norm distance between two (usually unitary) matrices.

    With ``phase_align`` the comparison quotients out a global phase:
    the second operator is rotated by the unit phase of the trace
    overlap before subtracting.
    """
    if w.shape != w_prime.shape:
        raise DimMismatch(f"shapes {w.shape} and {w_prime.shape}")
    if phase_align:
        w_prime = phase_match(w, w_prime) * w_prime
    return operator_norm(w - w_prime)
