"""Bipartite density operators, rank-2 eigenframes and Bloch-ball coordinates.

A rank-2 state lives in the two-dimensional span of its eigenvectors
``v1, v2``. Inside that span every state is a 2 x 2 matrix
``omega = (I + r . sigma) / 2`` with ``|r| <= 1``; ``r = (0, 0, 1)`` is ``v1``.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (BadDims, NotPSD, OutsideBall, OutsideSupport,
                     RankExceeded, TraceNotOne)
from .linalg import hermitian_eig, hermitian_part

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

STATE_TOL = 1e-8
RANK_TOL = 1e-8
BALL_TOL = 1e-9


class BipartiteDims(NamedTuple):
    d_a: int
    d_b: int

    @property
    def total(self) -> int:
        return self.d_a * self.d_b


def as_dims(dims) -> BipartiteDims:
    d_a, d_b = (int(d) for d in dims)
    if d_a < 2 or d_b < 2:
        raise BadDims(f"subsystem dimensions must be >= 2, got ({d_a}, {d_b})")
    return BipartiteDims(d_a, d_b)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: BipartiteDims

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class Rank2Eigenbasis:
    """``rho = p |v1><v1| + (1 - p) |v2><v2|`` with ``p >= 1/2``."""
    p: float
    v1: np.ndarray
    v2: np.ndarray
    dims: BipartiteDims

    @property
    def frame(self) -> np.ndarray:
        """The ``n x 2`` matrix with columns ``v1, v2``."""
        return np.column_stack([self.v1, self.v2])


@dataclass
class DecompositionResult:
    """Pure-state decomposition ``rho = sum_i weights[i] |states[i]><states[i]|``."""
    weights: np.ndarray
    states: np.ndarray  # one normalized state vector per row
    achieved: float
    dims: BipartiteDims
    converged: bool = True

    def reconstruct(self) -> np.ndarray:
        return np.einsum("i,ia,ib->ab", self.weights, self.states, self.states.conj())


def validate_density(M, dims) -> DensityMatrix:
    """Check ``M`` is a density operator on ``C^{d_A} x C^{d_B}``.

    The Hermitian part ``(M + M^dag)/2`` is what gets stored.
    """
    dims = as_dims(dims)
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape != (dims.total, dims.total):
        raise BadDims(f"matrix shape {M.shape} does not match dims {tuple(dims)}")
    H = hermitian_part(M, STATE_TOL)
    w = hermitian_eig(H).eigenvalues
    if w[0] < -STATE_TOL:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} < -{STATE_TOL:.0e}")
    tr = np.trace(H).real
    if abs(tr - 1.0) > STATE_TOL:
        raise TraceNotOne(f"trace {tr!r} differs from 1")
    return DensityMatrix(H, dims)


def partial_trace_op(X, dims, keep: str = "A") -> np.ndarray:
    """Partial trace of an arbitrary operator ``X``; ``keep`` names the survivor."""
    d_a, d_b = dims
    T = np.asarray(X).reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", T)
    if keep == "B":
        return np.einsum("ijil->jl", T)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def partial_trace(rho: DensityMatrix, keep: str = "A") -> np.ndarray:
    """Reduced state: ``keep='A'`` traces out B and returns ``rho_A``."""
    return partial_trace_op(rho.matrix, rho.dims, keep)


def swap_subsystems(rho: DensityMatrix) -> DensityMatrix:
    d_a, d_b = rho.dims
    T = rho.matrix.reshape(d_a, d_b, d_a, d_b).transpose(1, 0, 3, 2)
    return DensityMatrix(T.reshape(d_a * d_b, d_a * d_b), BipartiteDims(d_b, d_a))


def _complete(v: np.ndarray) -> np.ndarray:
    # first computational basis vector with a sizeable component orthogonal to v
    for k in range(v.size):
        if 1.0 - abs(v[k]) ** 2 >= 0.5:
            e = np.zeros_like(v)
            e[k] = 1.0
            w = e - v * np.vdot(v, e)
            return w / np.linalg.norm(w)
    raise AssertionError("unreachable for normalized v of length >= 2")


def rank2_eigenbasis(rho: DensityMatrix, rank_tol: float = RANK_TOL) -> Rank2Eigenbasis:
    """Eigenframe of a state with at most two nonzero eigenvalues.

    A rank-1 state gets ``p = 1`` and a deterministic ``v2``: the first
    computational basis vector, orthogonalized against ``v1``, whose overlap
    with ``v1`` is at most one half.
    """
    w, U = hermitian_eig(rho.matrix)
    if w.size > 2 and w[-3] >= rank_tol:
        raise RankExceeded(f"third eigenvalue {w[-3]:.3e} >= rank tolerance {rank_tol:.0e}")
    lam1, lam2 = w[-1], max(w[-2], 0.0)
    v1 = U[:, -1]
    if lam2 < rank_tol:
        return Rank2Eigenbasis(1.0, v1, _complete(v1), rho.dims)
    return Rank2Eigenbasis(float(lam1 / (lam1 + lam2)), v1, U[:, -2], rho.dims)


def project_rank2(rho: DensityMatrix) -> DensityMatrix:
    """Keep the two largest spectral components and renormalize."""
    w, U = hermitian_eig(rho.matrix)
    lam = np.clip(w[-2:], 0.0, None)
    V = U[:, -2:]
    M = (V * (lam / lam.sum())[None, :]) @ V.conj().T
    return DensityMatrix(0.5 * (M + M.conj().T), rho.dims)


def omega_to_bloch(omega: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ab,jba->j", omega, PAULI))


def bloch_to_omega(r) -> np.ndarray:
    return 0.5 * (np.eye(2) + np.einsum("j,jab->ab", np.asarray(r, dtype=float), PAULI))


def _check_ball(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    if r @ r > 1.0 + BALL_TOL:
        raise OutsideBall(f"|r|^2 = {r @ r:.12f} > 1")
    return r


def bloch_to_density(r, basis: Rank2Eigenbasis) -> DensityMatrix:
    r = _check_ball(r)
    V = basis.frame
    return DensityMatrix(V @ bloch_to_omega(r) @ V.conj().T, basis.dims)


def bloch_to_coefficients(r) -> np.ndarray:
    """Coefficients ``(c1, c2)`` in the ``v1, v2`` frame of the pure state at ``r``.

    ``r`` is normalized onto the sphere first. Vectorized over leading axes.
    """
    r = np.asarray(r, dtype=float)
    r = r / np.linalg.norm(r, axis=-1, keepdims=True)
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    north = z >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.sqrt((1 + z) / 2)
        c_n = np.stack([a + 0j, (x + 1j * y) / (2 * a)], axis=-1)
        b = np.sqrt((1 - z) / 2)
        c_s = np.stack([(x - 1j * y) / (2 * b), b + 0j], axis=-1)
    return np.where(north[..., None], c_n, c_s)


def bloch_to_pure(r, basis: Rank2Eigenbasis) -> np.ndarray:
    """State vector on the sphere at direction ``r`` (global phase arbitrary)."""
    return basis.frame @ bloch_to_coefficients(r)


def density_to_omega(rho: DensityMatrix, basis: Rank2Eigenbasis) -> np.ndarray:
    V = basis.frame
    omega = V.conj().T @ rho.matrix @ V
    leak = np.linalg.norm(rho.matrix - V @ omega @ V.conj().T)
    if leak > STATE_TOL:
        raise OutsideSupport(f"state has weight {leak:.3e} outside span(v1, v2)")
    return omega


def density_to_bloch(rho: DensityMatrix, basis: Rank2Eigenbasis) -> np.ndarray:
    return omega_to_bloch(density_to_omega(rho, basis))


def random_pure(dims, seed=None) -> np.ndarray:
    """Haar-random unit vector: complex Gaussian components, normalized."""
    dims = as_dims(dims)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(dims.total) + 1j * rng.standard_normal(dims.total)
    return z / np.linalg.norm(z)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-random ``n x n`` unitary via QR of a Ginibre matrix."""
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]


def random_rank2(dims, seed=None) -> DensityMatrix:
    """Seeded random rank-2 state ``p|v1><v1| + (1-p)|v2><v2|``.

    ``seed`` is an int (PCG64 stream) or a ``numpy.random.Generator``. Draw
    order from the stream: real then imaginary parts of the first vector,
    real then imaginary parts of the second, then ``p ~ U[0, 1]``. The second
    vector is Gram-Schmidt orthogonalized against the first.
    """
    dims = as_dims(dims)
    rng = np.random.default_rng(seed)
    n = dims.total
    z1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    z2 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    p = rng.uniform()
    v1 = z1 / np.linalg.norm(z1)
    z2 = z2 - v1 * np.vdot(v1, z2)
    v2 = z2 / np.linalg.norm(z2)
    M = p * np.outer(v1, v1.conj()) + (1 - p) * np.outer(v2, v2.conj())
    return DensityMatrix(0.5 * (M + M.conj().T), dims)


def pure_density(psi, dims) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()), as_dims(dims))
