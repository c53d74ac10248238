"""Universal state inverter and its two-qubit-subspace decomposition.

For an operator ``X`` on ``C^{d_A} x C^{d_B}``::

    X~ = tr(X^dag) I - X_A^dag x I - I x X_B^dag + X^dag

The same map is a sum of two-qubit spin flips, one for every choice of a
basis pair ``i < i'`` on A and ``j < j'`` on B. On such a pair ``|i>`` plays
the role of ``|0>`` and ``|i'>`` of ``|1>``.
"""
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import BadDims, BadSubspace
from .states import BipartiteDims, Rank2Eigenbasis, as_dims, partial_trace_op

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SYY = np.kron(SIGMA_Y, SIGMA_Y)


class SubspacePair(NamedTuple):
    i: int
    i2: int
    j: int
    j2: int


def _check_operator(X, dims: BipartiteDims) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (dims.total, dims.total):
        raise BadDims(f"operator shape {X.shape} does not match dims {tuple(dims)}")
    return X


def state_invert(X, dims) -> np.ndarray:
    """Apply the universal state inverter to an arbitrary operator."""
    dims = as_dims(dims)
    X = _check_operator(X, dims)
    Xd = X.conj().T
    d_a, d_b = dims
    return (np.trace(Xd) * np.eye(dims.total)
            - np.kron(partial_trace_op(Xd, dims, "A"), np.eye(d_b))
            - np.kron(np.eye(d_a), partial_trace_op(Xd, dims, "B"))
            + Xd)


def spin_flip_pure_2q(psi) -> np.ndarray:
    """``sigma_y x sigma_y`` applied to the computational-basis conjugate of ``psi``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise BadDims("two-qubit spin flip needs a length-4 state vector")
    return SYY @ psi.conj()


def enumerate_subspaces(dims) -> list[SubspacePair]:
    dims = as_dims(dims)
    return [SubspacePair(i, i2, j, j2)
            for i, i2 in combinations(range(dims.d_a), 2)
            for j, j2 in combinations(range(dims.d_b), 2)]


def _check_alpha(alpha, dims: BipartiteDims) -> SubspacePair:
    alpha = SubspacePair(*alpha)
    if not (0 <= alpha.i < alpha.i2 < dims.d_a and 0 <= alpha.j < alpha.j2 < dims.d_b):
        raise BadSubspace(f"{tuple(alpha)} is not a valid pair for dims {tuple(dims)}")
    return alpha


def theta_alpha_apply(phi, alpha, dims) -> np.ndarray:
    """Antilinear subspace spin flip ``theta_alpha |phi>``.

    Projects onto ``span{|ij>, |i'j>, |ij'>, |i'j'>}``, conjugates, and applies
    the embedded ``sigma_y x sigma_y``. Trailing axes of ``phi`` beyond the
    first are carried along, so a matrix of column vectors works too.
    """
    dims = as_dims(dims)
    a = _check_alpha(alpha, dims)
    phi = np.asarray(phi, dtype=complex)
    shaped = phi.reshape((dims.d_a, dims.d_b) + phi.shape[1:])
    rows, cols = [a.i, a.i2], [a.j, a.j2]
    block = shaped[np.ix_(rows, cols)].conj()
    # (sigma_y x sigma_y) vec(c) == sigma_y c sigma_y^T
    flipped = np.einsum("ab,bc...,dc->ad...", SIGMA_Y, block, SIGMA_Y)
    out = np.zeros_like(shaped)
    out[np.ix_(rows, cols)] = flipped
    return out.reshape(phi.shape)


def _subspace_flip_matrix(alpha: SubspacePair, dims: BipartiteDims) -> np.ndarray:
    # S_alpha with theta_alpha |phi> = S_alpha conj(phi)
    return theta_alpha_apply(np.eye(dims.total), alpha, dims)


def invert_via_subspaces(X, dims) -> np.ndarray:
    """``sum_alpha theta_alpha X theta_alpha``, summed in index order."""
    dims = as_dims(dims)
    X = _check_operator(X, dims)
    out = np.zeros_like(X)
    for alpha in enumerate_subspaces(dims):
        S = _subspace_flip_matrix(alpha, dims)
        out += S @ X.conj() @ S.conj().T
    return out


def zeta_matrices(basis: Rank2Eigenbasis) -> list[tuple[SubspacePair, np.ndarray]]:
    """``zeta^alpha_ij = <v_i| theta_alpha |v_j>`` for every subspace pair."""
    V = basis.frame
    return [(alpha, V.conj().T @ theta_alpha_apply(V, alpha, basis.dims))
            for alpha in enumerate_subspaces(basis.dims)]


def pure_tangle(psi, dims) -> float:
    """``<psi| (|psi><psi|)~ |psi>`` for a normalized state vector."""
    psi = np.asarray(psi, dtype=complex)
    flipped = state_invert(np.outer(psi, psi.conj()), dims)
    return float(np.real(np.vdot(psi, flipped @ psi)))


def weighted_tangles(W, dims) -> np.ndarray:
    """``||w||^2 * tau(w / ||w||)`` for each row ``w`` of ``W``.

    The four inverter terms are expanded for ``X = |w><w|`` and evaluated for
    all rows at once; zero rows contribute zero.
    """
    d_a, d_b = dims
    W = np.asarray(W, dtype=complex)
    psi = W.reshape(-1, d_a, d_b)
    psi_h = psi.conj().transpose(0, 2, 1)
    norm2 = np.sum(psi.real ** 2 + psi.imag ** 2, axis=(1, 2))
    rho_a = psi @ psi_h
    rho_b = psi_h @ psi
    # tr(X^2) = sum |X_ij|^2 for Hermitian X
    term_a = np.sum(rho_a.real ** 2 + rho_a.imag ** 2, axis=(1, 2))
    term_b = np.sum(rho_b.real ** 2 + rho_b.imag ** 2, axis=(1, 2))
    expect = norm2 * norm2 - term_a - term_b + norm2 * norm2
    out = np.zeros_like(norm2)
    nz = norm2 > 0
    out[nz] = expect[nz] / norm2[nz]
    return out.reshape(W.shape[:-1])
