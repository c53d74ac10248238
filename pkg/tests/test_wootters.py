import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanglekit import (BadDims, OutOfRange, binary_entropy, concurrence_2q, eof_exact_2q,
                       eof_from_tangle, i_tangle_rank2, random_rank2, spin_flip_pure_2q,
                       tangle_2q, validate_density)
from tanglekit.states import random_pure, random_unitary
from tanglekit.wootters import concurrence_spectrum

S2 = 1 / np.sqrt(2)
PHI_P = np.array([S2, 0, 0, S2])
PHI_M = np.array([S2, 0, 0, -S2])
PSI_M = np.array([0, S2, -S2, 0])


def proj(psi):
    return np.outer(psi, np.conj(psi))


def state(M, dims=(2, 2)):
    return validate_density(M, dims)


def bell_mixture(p):
    return state(p * proj(PHI_P) + (1 - p) * proj(PHI_M))


def test_concurrence_examples():
    assert abs(concurrence_2q(state(proj(PSI_M))) - 1) < 1e-14
    assert concurrence_2q(state(np.eye(4) / 4)) < 1e-14
    assert abs(concurrence_2q(bell_mixture(0.8)) - 0.6) < 1e-14


def test_concurrence_spectrum_bell_mixture():
    # eigenvalues of rho rho~ are p^2 and (1 - p)^2
    lam = concurrence_spectrum(bell_mixture(0.8))
    assert np.allclose(lam, [0.8, 0.2, 0, 0], atol=1e-14)
    assert np.all(np.diff(lam) <= 0)


def test_concurrence_spectrum_matches_product_eigenvalues():
    syy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    rng = np.random.default_rng(0)
    for _ in range(20):
        X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = state(X @ X.conj().T / np.trace(X @ X.conj().T).real)
        ev = np.linalg.eigvals(rho.matrix @ syy @ rho.matrix.conj() @ syy)
        expected = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
        assert np.allclose(concurrence_spectrum(rho), expected, atol=1e-7)


def test_tangle_examples():
    assert abs(tangle_2q(state(proj(PSI_M))) - 1) < 1e-14
    assert tangle_2q(state(proj(np.eye(4)[1]))) < 1e-14
    assert abs(tangle_2q(bell_mixture(0.8)) - 0.36) < 1e-14


def test_requires_two_qubits():
    rho = random_rank2((2, 3), seed=0)
    for fn in (concurrence_2q, tangle_2q, eof_exact_2q):
        with pytest.raises(BadDims, match="requires 2x2"):
            fn(rho)


def test_binary_entropy_examples():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    x = 0.11
    # 30-digit evaluation of the formula
    assert abs(binary_entropy(x) - 0.49991595816452800) < 1e-15
    # series-free check with natural logs
    assert abs(binary_entropy(x) - (-(x * np.log(x) + (1 - x) * np.log1p(-x)) / np.log(2))) < 1e-15
    for bad in (-0.1, 1.5):
        with pytest.raises(OutOfRange):
            binary_entropy(bad)


def test_eof_from_tangle_examples():
    assert eof_from_tangle(0.0) == 0.0
    assert abs(eof_from_tangle(1.0) - 1.0) < 1e-15
    assert abs(eof_from_tangle(0.36) - binary_entropy(0.9)) < 1e-15
    assert abs(eof_from_tangle(0.36) - 0.46900) < 1e-5
    with pytest.raises(OutOfRange):
        eof_from_tangle(1.2)


def test_eof_from_tangle_monotone():
    taus = np.linspace(0, 1, 201)
    vals = [eof_from_tangle(t) for t in taus]
    assert np.all(np.diff(vals) > 0)


def test_eof_exact_examples():
    assert abs(eof_exact_2q(state(proj(PSI_M))) - 1) < 1e-14
    assert eof_exact_2q(state(np.kron(np.diag([0.3, 0.7]), np.diag([0.5, 0.5])))) == 0.0
    assert abs(eof_exact_2q(bell_mixture(0.8)) - 0.46900) < 1e-5


def test_two_qubit_reduction():
    for seed in range(100):
        rho = random_rank2((2, 2), seed)
        assert abs(i_tangle_rank2(rho) - concurrence_2q(rho) ** 2) <= 1e-9


def test_local_unitary_invariance():
    rng = np.random.default_rng(12)
    for seed in range(30):
        rho = random_rank2((2, 2), seed)
        U = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        moved = state(U @ rho.matrix @ U.conj().T)
        assert abs(concurrence_2q(moved) - concurrence_2q(rho)) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_pure_concurrence_overlap(seed):
    psi = random_pure((2, 2), seed)
    overlap = abs(np.vdot(psi, spin_flip_pure_2q(psi)))
    assert abs(concurrence_2q(state(proj(psi))) - overlap) <= 1e-10
