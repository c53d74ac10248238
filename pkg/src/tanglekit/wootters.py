"""Two-qubit concurrence, tangle and entanglement of formation."""
import numpy as np

from .errors import BadDims, OutOfRange
from .inverter import SYY
from .linalg import hermitian_eig, psd_sqrt
from .states import DensityMatrix


def _require_two_qubits(rho: DensityMatrix) -> None:
    if tuple(rho.dims) != (2, 2):
        raise BadDims(f"requires 2x2 dims, got {tuple(rho.dims)}")


def concurrence_spectrum(rho: DensityMatrix) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho rho~``, largest first.

    These are the singular values of ``X = sqrt(rho) (sy x sy) conj(sqrt(rho))``
    because ``X X^dag = sqrt(rho) rho~ sqrt(rho)``. They are read off as the
    nonnegative eigenvalues of the Hermitian dilation ``[[0, X], [X^dag, 0]]``,
    which keeps absolute accuracy near zero instead of taking square roots of
    rounding noise.
    """
    _require_two_qubits(rho)
    s = psd_sqrt(rho.matrix)
    X = s @ SYY @ s.conj()
    zero = np.zeros_like(X)
    dilation = np.block([[zero, X], [X.conj().T, zero]])
    w = hermitian_eig(dilation).eigenvalues
    return np.clip(w[::-1][:4], 0.0, None)


def concurrence_2q(rho: DensityMatrix) -> float:
    lam = concurrence_spectrum(rho)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def tangle_2q(rho: DensityMatrix) -> float:
    return concurrence_2q(rho) ** 2


def binary_entropy(x: float) -> float:
    """Base-2 binary entropy with ``H(0) = H(1) = 0``."""
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"binary entropy needs x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def eof_from_tangle(tau: float) -> float:
    """``H(1/2 + sqrt(1 - tau)/2)``: pure-state EoF of a qubit-qudit as a function of tangle."""
    if not 0.0 <= tau <= 1.0:
        raise OutOfRange(f"tangle must lie in [0, 1], got {tau!r}")
    return binary_entropy(0.5 + 0.5 * np.sqrt(1.0 - tau))


def eof_exact_2q(rho: DensityMatrix) -> float:
    return eof_from_tangle(tangle_2q(rho))
