"""Small dense complex linear algebra.

Everything here operates on plain ``numpy`` arrays. The eigensolver is a
cyclic complex Jacobi method: the matrices we meet are at most 64 x 64, and a
fixed rotation order plus a fixed eigenvector phase convention makes the
output bit-reproducible for identical input.
"""
from typing import NamedTuple

import numpy as np

from .errors import NotHermitian, NotPSD, NotSquare

HERMITIAN_RTOL = 1e-8
JACOBI_RTOL = 1e-14
MAX_SWEEPS = 60


class HermitianEigenResult(NamedTuple):
    eigenvalues: np.ndarray  # real, nondecreasing
    eigenvectors: np.ndarray  # columns, unitary


def _as_square(H) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ValueError("matrix has non-finite entries")
    return H


def hermitian_part(H, tol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``(H + H^dag)/2`` after checking ``H`` is Hermitian to ``tol``."""
    H = _as_square(H)
    scale = max(1.0, np.linalg.norm(H))
    defect = np.linalg.norm(H - H.conj().T)
    if defect > tol * scale:
        raise NotHermitian(f"||H - H^dag|| = {defect:.3e} exceeds {tol:.0e} * {scale:.3e}")
    return 0.5 * (H + H.conj().T)


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # largest-modulus entry of each column made real and nonnegative
    idx = np.argmax(np.abs(V), axis=0)
    lead = V[idx, np.arange(V.shape[1])]
    phase = np.ones_like(lead)
    nz = np.abs(lead) > 0
    phase[nz] = lead[nz].conj() / np.abs(lead[nz])
    V = V * phase[None, :]
    V[idx, np.arange(V.shape[1])] = np.abs(V[idx, np.arange(V.shape[1])])
    return V


def hermitian_eig(H) -> HermitianEigenResult:
    """Eigen-decompose a complex Hermitian matrix by cyclic Jacobi sweeps.

    Each rotation first strips the phase of the pivot ``H[p, q]`` with a
    diagonal unitary, then applies the real symmetric Jacobi rotation that
    annihilates it. Sweeps visit pivots in row-major order and stop once the
    off-diagonal Frobenius mass drops below ``1e-14 * ||H||``.

    Raises
    ------
    NotSquare, NotHermitian
    """
    A = hermitian_part(H).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    target = JACOBI_RTOL * scale

    for _ in range(MAX_SWEEPS):
        if _off_norm(A) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                b = abs(apq)
                if b == 0.0:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * b)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ph = apq / b
                G = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]])
                cols = [p, q]
                A[:, cols] = A[:, cols] @ G
                A[cols, :] = G.conj().T @ A[cols, :]
                V[:, cols] = V[:, cols] @ G
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    else:
        # sweep cap hit; still acceptable if reconstruction contract holds
        if _off_norm(A) > 1e-10 * max(scale, 1e-300):
            raise ArithmeticError("Jacobi eigensolver failed to converge")

    w = np.real(np.diag(A)).copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigenResult(w[order], _fix_phases(V[:, order]))


def psd_sqrt(A, tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-tol * ||A||, 0)`` are treated as rounding and clamped.
    """
    w, U = hermitian_eig(A)
    scale = max(float(np.max(np.abs(w))) if w.size else 0.0, 1e-300)
    if w.size and w[0] < -tol * scale:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative")
    root = np.sqrt(np.clip(w, 0.0, None))
    B = (U * root[None, :]) @ U.conj().T
    return 0.5 * (B + B.conj().T)


def kron(A, B) -> np.ndarray:
    """Kronecker product; composite index ``(i, j) -> i * B.shape[0] + j``."""
    return np.kron(np.asarray(A), np.asarray(B))
