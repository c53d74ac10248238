"""Closed-form I-tangle of rank-2 bipartite states.

Work in the eigenframe ``rho = p|v1><v1| + (1-p)|v2><v2|``. Every state in
``span{v1, v2}`` has a Bloch vector ``r`` and the pure-state tangle, extended
linearly in ``omega``, is a quadratic form ``f(r)`` on the ball. Subtracting
``lam_min * (|r|^2 - 1)``, with ``lam_min`` the smallest eigenvalue of the
quadratic part, gives a form ``g`` that agrees with ``f`` on the sphere and is
flat along one direction. ``g`` is the convex roof, so::

    tau(rho) = tr(rho rho~) + 2 lam_min (1 - tr rho^2)

Sign convention: the quadratic part below is assembled from the T tensor in
the frame where the Bloch ``y`` component is ``-tr(omega sigma_y)``; it is
reflected into the ``r_j = tr(omega sigma_j)`` frame used everywhere else.
The reflection is orthogonal so ``lam_min`` does not care.
"""
from dataclasses import dataclass

import numpy as np

from .errors import BadDims, NotReal
from .inverter import pure_tangle, state_invert, zeta_matrices
from .linalg import hermitian_eig
from .states import (BALL_TOL, PAULI, DecompositionResult, DensityMatrix,
                     Rank2Eigenbasis, _check_ball, bloch_to_omega,
                     bloch_to_pure, density_to_bloch, rank2_eigenbasis,
                     swap_subsystems)
from .wootters import eof_from_tangle

REAL_TOL = 1e-8
DEGENERACY_TOL = 1e-10
CLAMP_TOL = 1e-10

# maps r into the reflected frame the M matrix is assembled in
Y_FLIP = np.diag([1.0, -1.0, 1.0])


@dataclass(frozen=True)
class MMatrix:
    matrix: np.ndarray  # 3x3 real symmetric
    imag_residue: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return hermitian_eig(self.matrix).eigenvalues

    @property
    def lam_min(self) -> float:
        return float(self.eigenvalues[0])


@dataclass(frozen=True)
class QuadraticForm:
    """``constant + linear . r + r . quadratic . r``."""
    constant: float
    linear: np.ndarray
    quadratic: np.ndarray

    def __call__(self, r) -> float:
        r = np.asarray(r, dtype=float)
        return float(self.constant + self.linear @ r + r @ self.quadratic @ r)


def t_tensor(basis: Rank2Eigenbasis) -> np.ndarray:
    """``T[i, j, k, l] = tr(gamma_ij gamma~_kl)`` with ``gamma_ij = |v_i><v_j|``.

    Indices run over ``0, 1`` for ``v1, v2``.
    """
    V = basis.frame
    T = np.empty((2, 2, 2, 2), dtype=complex)
    flipped = {(k, l): state_invert(np.outer(V[:, k], V[:, l].conj()), basis.dims)
               for k in range(2) for l in range(2)}
    for i in range(2):
        for j in range(2):
            # tr(|v_i><v_j| X) = <v_j| X |v_i>
            for (k, l), X in flipped.items():
                T[i, j, k, l] = np.vdot(V[:, j], X @ V[:, i])
    return T


def m_matrix(T: np.ndarray) -> MMatrix:
    """Assemble the real symmetric 3x3 matrix from the six independent T combinations."""
    def t(code: str) -> complex:
        return T[tuple(int(ch) - 1 for ch in code)]

    M = np.empty((3, 3), dtype=complex)
    M[0, 0] = t("1221") / 4 + t("1122") / 2 + t("2112") / 4
    M[0, 1] = 1j / 4 * t("1221") - 1j / 4 * t("2112")
    M[0, 2] = (t("1121") - t("2122") + t("1112") - t("1222")) / 4
    M[1, 1] = -t("1221") / 4 + t("1122") / 2 - t("2112") / 4
    M[1, 2] = 1j / 4 * (t("1121") - t("1112") + t("2122") - t("1222"))
    M[2, 2] = t("1111") / 4 - t("1122") / 2 + t("2222") / 4
    M[1, 0], M[2, 0], M[2, 1] = M[0, 1], M[0, 2], M[1, 2]

    residue = float(np.max(np.abs(M.imag)))
    scale = max(1.0, float(np.max(np.abs(M))))
    if residue > REAL_TOL * scale:
        raise NotReal(f"M has imaginary residue {residue:.3e}")
    return MMatrix(M.real.copy(), residue)


def m_from_basis(basis: Rank2Eigenbasis) -> MMatrix:
    return m_matrix(t_tensor(basis))


def i_tangle_rank2(rho: DensityMatrix, rank_tol: float = 1e-8) -> float:
    """I-tangle of a state with at most two nonzero eigenvalues.

    Raises ``RankExceeded`` when a third eigenvalue reaches ``rank_tol``.
    """
    basis = rank2_eigenbasis(rho, rank_tol)
    lam_min = m_from_basis(basis).lam_min
    flipped = state_invert(rho.matrix, rho.dims)
    overlap = float(np.real(np.trace(rho.matrix @ flipped)))
    tau = overlap + 2.0 * lam_min * (1.0 - rho.purity())
    if -CLAMP_TOL <= tau < 0.0:
        tau = 0.0
    return tau


def f_form(basis: Rank2Eigenbasis) -> QuadraticForm:
    """Linear extension of the pure-state tangle over the Bloch ball of ``basis``."""
    zetas = [z for _, z in zeta_matrices(basis)]
    upsilon = sum(z.conj() @ z for z in zetas)
    linear_reflected = 0.5 * np.real(np.einsum("jab,ba->j", PAULI, upsilon))
    M = m_from_basis(basis).matrix
    return QuadraticForm(
        constant=0.25 * float(np.real(np.trace(upsilon))),
        linear=Y_FLIP @ linear_reflected,
        quadratic=Y_FLIP @ M @ Y_FLIP,
    )


def g_form(basis: Rank2Eigenbasis) -> QuadraticForm:
    f = f_form(basis)
    lam_min = float(hermitian_eig(f.quadratic).eigenvalues[0])
    return QuadraticForm(f.constant + lam_min, f.linear, f.quadratic - lam_min * np.eye(3))


def f_direct(r, basis: Rank2Eigenbasis) -> float:
    """``sum_alpha tr(conj(omega) conj(zeta) omega zeta)`` evaluated without the quadratic form."""
    omega = bloch_to_omega(_check_ball(r))
    total = sum(np.trace(omega.conj() @ z.conj() @ omega @ z) for _, z in zeta_matrices(basis))
    return float(np.real(total))


def f_eval(r, basis: Rank2Eigenbasis) -> float:
    return f_form(basis)(_check_ball(r))


def g_eval(r, basis: Rank2Eigenbasis) -> float:
    return g_form(basis)(_check_ball(r))


def _orient(u: np.ndarray) -> np.ndarray:
    for x in u:
        if abs(x) > 1e-12:
            return u if x > 0 else -u
    return u


def null_direction(quadratic: np.ndarray) -> np.ndarray:
    """Unit eigenvector for the smallest eigenvalue of a real symmetric 3x3 matrix.

    For a degenerate smallest eigenvalue the choice is the normalized
    projection of the coordinate axis with the largest component in the
    eigenspace (lowest index on ties).
    """
    w, U = hermitian_eig(quadratic)
    mult = int(np.sum(w - w[0] <= DEGENERACY_TOL * max(1.0, abs(w[-1]))))
    if mult == 1:
        u = np.real(U[:, 0])
    else:
        B = np.real(U[:, :mult])
        P = B @ B.T
        k = int(np.argmax(np.round(np.linalg.norm(P, axis=0), 12)))
        u = P[:, k]
    return _orient(u / np.linalg.norm(u))


def chord_endpoints(r: np.ndarray, u: np.ndarray) -> tuple[float, float]:
    """Roots ``t+ > 0 > t-`` of ``|r + t u|^2 = 1`` for unit ``u`` and ``|r| < 1``."""
    ru = float(r @ u)
    disc = np.sqrt(ru * ru + 1.0 - float(r @ r))
    return -ru + disc, -ru - disc


def optimal_decomposition(rho: DensityMatrix, rank_tol: float = 1e-8) -> DecompositionResult:
    """Two pure states whose mixture is ``rho`` and whose average tangle is ``tau(rho)``.

    They sit where the line through ``rho`` along the flat direction of ``g``
    meets the Bloch sphere.
    """
    basis = rank2_eigenbasis(rho, rank_tol)
    r = density_to_bloch(rho, basis)
    dims = rho.dims
    if r @ r >= (1.0 - BALL_TOL) ** 2:
        psi = bloch_to_pure(r, basis)
        return DecompositionResult(np.array([1.0]), psi[None, :], pure_tangle(psi, dims), dims)

    u = null_direction(g_form(basis).quadratic)
    t_plus, t_minus = chord_endpoints(r, u)
    weights = np.array([-t_minus, t_plus]) / (t_plus - t_minus)
    states = np.stack([bloch_to_pure(r + t_plus * u, basis),
                       bloch_to_pure(r + t_minus * u, basis)])
    achieved = float(sum(q * pure_tangle(s, dims) for q, s in zip(weights, states)))
    return DecompositionResult(weights, states, achieved, dims)


def eof_upper_bound(rho: DensityMatrix, swap: bool = False, rank_tol: float = 1e-8) -> float:
    """Upper bound on the entanglement of formation of a rank-2 qubit-qudit state.

    ``swap=True`` relabels the subsystems first, for states whose qubit is B.
    """
    if swap:
        rho = swap_subsystems(rho)
    if rho.dims.d_a != 2:
        raise BadDims(f"eof-bound requires a qubit on side A, got dims {tuple(rho.dims)}")
    tau = i_tangle_rank2(rho, rank_tol)
    return eof_from_tangle(min(max(tau, 0.0), 1.0))
