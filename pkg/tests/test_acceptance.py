"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
import numpy as np
import pytest

from tanglekit import (DecompSearchConfig, VerifyConfig, concurrence_2q, decomposition_minimize,
                       eof_exact_2q, eof_upper_bound, invert_via_subspaces, i_tangle_rank2,
                       optimal_decomposition, pure_tangle, random_pure, random_rank2,
                       rank2_eigenbasis, state_invert, zeta_matrices)
from tanglekit.cli import main
from tanglekit.oracle import summarize, verify_state
from tanglekit.rank2 import f_eval, g_form, m_from_basis, null_direction
from tanglekit.states import (DensityMatrix, as_dims, density_to_bloch, partial_trace_op)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

DIMS = [(2, 2), (2, 3), (3, 3), (2, 4)]


def report(number, title, passed, detail):
    line = f"criterion {number} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def states(dims, count, seed):
    rng = np.random.default_rng(seed)
    return [random_rank2(dims, rng) for _ in range(count)]


@pytest.mark.slow
def test_criterion_1_closed_form_vs_oracles():
    cfg = VerifyConfig(eof_runs=())
    parts, ok = [], True
    for dims in DIMS:
        rows = [verify_state(rho, i, 1, cfg) for i, rho in enumerate(states(dims, 100, 1))]
        s = summarize(rows, 1e-6)
        ok &= s.passed
        parts.append(f"{dims[0]}x{dims[1]} max_gap={s.max_gap:.1e} min_margin={s.min_margin:.1e}")
    report(1, "closed form vs oracles (tol 1e-6)", ok, "; ".join(parts))


def test_criterion_2_two_qubit_reduction():
    worst = max(abs(i_tangle_rank2(rho) - concurrence_2q(rho) ** 2)
                for rho in states((2, 2), 500, 2))
    report(2, "I-tangle equals squared concurrence (tol 1e-9)", worst <= 1e-9,
           f"500 states, max |diff|={worst:.1e}")


def test_criterion_3_inverter_equivalence():
    rng = np.random.default_rng(3)
    worst = 0.0
    for dims in [(2, 2), (2, 3), (3, 3), (3, 4)]:
        n = dims[0] * dims[1]
        for _ in range(100):
            X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            diff = np.linalg.norm(state_invert(X, dims) - invert_via_subspaces(X, dims))
            worst = max(worst, diff / np.linalg.norm(X))
    report(3, "inverter forms agree (tol 1e-12 relative)", worst <= 1e-12,
           f"400 operators, max relative diff={worst:.1e}")


def test_criterion_4_m_matrix_structure():
    residue = 0.0
    for dims in DIMS:
        for rho in states(dims, 50, 4):
            residue = max(residue, m_from_basis(rank2_eigenbasis(rho)).imag_residue)
    spectrum = 0.0
    for rho in states((2, 2), 100, 40):
        b = rank2_eigenbasis(rho)
        (_, z), = zeta_matrices(b)
        det = abs(np.linalg.det(z))
        expected = np.sort([-det / 2, det / 2, np.trace(z.conj() @ z).real / 4])
        spectrum = max(spectrum, np.abs(m_from_basis(b).eigenvalues - expected).max())
    report(4, "M real (1e-10) with two-qubit spectrum (1e-9)",
           residue <= 1e-10 and spectrum <= 1e-9,
           f"max imag residue={residue:.1e}, max spectrum diff={spectrum:.1e}")


def test_criterion_5_optimal_decomposition():
    recon = exact = 0.0
    for dims in DIMS:
        for rho in states(dims, 100, 5):
            res = optimal_decomposition(rho)
            taus = np.array([pure_tangle(s, dims) for s in res.states])
            recon = max(recon, np.abs(res.reconstruct() - rho.matrix).max())
            exact = max(exact, abs(res.weights @ taus - i_tangle_rank2(rho)))
    report(5, "optimal decomposition (recon 1e-8, exactness 1e-9)",
           recon <= 1e-8 and exact <= 1e-9,
           f"400 states, max recon={recon:.1e}, max |sum q tau - tau|={exact:.1e}")


@pytest.mark.slow
def test_criterion_6_eof_bound():
    gaps = []
    for i, rho in enumerate(states((2, 3), 100, 6)):
        oracle = min(decomposition_minimize(rho, DecompSearchConfig(n, r, tol=1e-10, seed=i),
                                            "entropy")[0]
                     for n, r in ((2, 4), (3, 1)))
        gaps.append(eof_upper_bound(rho) - oracle)
    gaps = np.array(gaps)
    exact = max(abs(eof_upper_bound(rho) - eof_exact_2q(rho)) for rho in states((2, 2), 100, 60))
    ok = gaps.min() >= -1e-6 and np.median(gaps) < 1e-2 and exact <= 1e-9
    report(6, "EoF bound (oracle <= bound + 1e-6, median gap < 1e-2, 2x2 exact 1e-9)", ok,
           f"2x3 gap min={gaps.min():.1e} median={np.median(gaps):.1e} max={gaps.max():.1e}; "
           f"2x2 max |bound - exact|={exact:.1e}")


def test_criterion_7_geometry():
    purity = overlap = flat = 0.0
    for dims in DIMS:
        for rho in states(dims, 50, 7):
            b = rank2_eigenbasis(rho)
            r = density_to_bloch(rho, b)
            purity = max(purity, abs((1 - r @ r) - 2 * (1 - rho.purity())))
            tr = np.trace(rho.matrix @ state_invert(rho.matrix, dims)).real
            overlap = max(overlap, abs(f_eval(r, b) - tr))
            g = g_form(b)
            u = null_direction(g.quadratic)
            s = np.linspace(-0.5, 0.5, 5)
            flat = max(flat, abs(np.polyfit(s, [g(r + t * u) for t in s], 2)[0]))
    ok = purity <= 1e-10 and overlap <= 1e-10 and flat <= 1e-10
    report(7, "geometry identities (tol 1e-10)", ok,
           f"purity={purity:.1e}, f(r)-tr(rho rho~)={overlap:.1e}, g curvature along u={flat:.1e}")


def test_criterion_8_pure_states():
    rng = np.random.default_rng(8)
    worst = 0.0
    for dims in DIMS + [(3, 4)]:
        for _ in range(100):
            psi = random_pure(dims, rng)
            rho_a = partial_trace_op(np.outer(psi, psi.conj()), dims, "A")
            worst = max(worst, abs(pure_tangle(psi, dims) - 2 * (1 - np.trace(rho_a @ rho_a).real)))
    maxent = 0.0
    for d in (2, 3, 4, 5):
        psi = np.eye(d).reshape(-1) / np.sqrt(d)
        maxent = max(maxent, abs(pure_tangle(psi, (d, d)) - 2 * (d - 1) / d))
        rho = DensityMatrix(np.outer(psi, psi), as_dims((d, d)))
        maxent = max(maxent, abs(i_tangle_rank2(rho) - 2 * (d - 1) / d))
    report(8, "pure-state identity (tol 1e-12)", worst <= 1e-12 and maxent <= 1e-12,
           f"max |tau - 2(1 - tr rho_A^2)|={worst:.1e}, max entangled d=2..5 diff={maxent:.1e}")


def test_criterion_9_determinism(tmp_path):
    same = True
    for run in "ab":
        assert main(["random", "--dims", "2", "3", "--count", "5", "--seed", "42",
                     "--outdir", str(tmp_path / run)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    same &= files == sorted(p.name for p in (tmp_path / "b").iterdir()) and len(files) == 5
    same &= all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
                for f in files)
    for threads in ("1", "2"):
        outs = []
        for run in "ab":
            out = tmp_path / f"verify_{threads}_{run}.csv"
            main(["verify", "--dims", "2", "3", "--count", "3", "--seed", "7",
                  "--threads", threads, "--out", str(out)])
            outs.append(out.read_bytes())
        same &= outs[0] == outs[1]
    report(9, "byte-identical random and verify output", same,
           "random (2x3, 5 files) and verify (2x3, 3 rows, 1 and 2 workers) repeated")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
