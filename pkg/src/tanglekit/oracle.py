"""Brute-force convex-roof minimizers used to check the closed form.

Two families that share nothing above the pure-state tangle:

* ``chord_minimize`` scans chords of the Bloch ball through ``rho`` and
  scores the two sphere endpoints with the pure-state tangle.
* ``decomposition_minimize`` searches n-term decompositions
  ``w_i = sum_j V_ij sqrt(lam_j) v_j`` over isometries ``V`` by sweeping
  two-row unitaries, with random restarts.
"""
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import TangleKitError, RankExceeded
from .inverter import pure_tangle, weighted_tangles
from .rank2 import eof_upper_bound, i_tangle_rank2
from .states import (BALL_TOL, DecompositionResult, DensityMatrix,
                     bloch_to_coefficients, density_to_bloch, random_rank2,
                     rank2_eigenbasis)


@dataclass(frozen=True)
class ChordSearchConfig:
    polar: int = 16
    azimuthal: int = 32
    rounds: int = 16
    shrink: float = 0.3
    candidates: int = 3

    def __post_init__(self):
        if self.polar < 8 or self.azimuthal < 8:
            raise ValueError("chord grid counts must be >= 8")
        if self.rounds < 1:
            raise ValueError("need at least one refinement round")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink factor must lie in (0, 1)")


@dataclass(frozen=True)
class DecompSearchConfig:
    n_terms: int = 2
    restarts: int = 4
    max_iter: int = 200
    tol: float = 1e-13
    seed: int = 0
    grid: int = 8
    rounds: int = 14
    shrink: float = 0.3

    def __post_init__(self):
        if not 2 <= self.n_terms <= 8:
            raise ValueError("n_terms must lie in [2, 8]")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.restarts < 1 or self.max_iter < 1:
            raise ValueError("restarts and max_iter must be >= 1")


def _pattern_search(fun, x0, f0, step, rounds, shrink, reach=2):
    """Minimize ``fun`` (batched over rows of a (k, 2) array) from ``x0``.

    Each round scores the ``(2 reach + 1)^2 - 1`` stencil points around the
    incumbent, moves to the best one if it improves and otherwise shrinks the
    step. Stops after ``rounds`` shrinks.
    """
    span = range(-reach, reach + 1)
    offsets = np.array([(a, b) for a in span for b in span if (a, b) != (0, 0)], float)
    x, fx = np.asarray(x0, float), float(f0)
    h = np.asarray(step, float).copy()
    shrinks = moves = 0
    while shrinks < rounds:
        cand = x + offsets * h
        vals = fun(cand)
        k = int(np.argmin(vals))
        if vals[k] < fx and moves < 20 * rounds:
            x, fx = cand[k], float(vals[k])
            moves += 1
        else:
            h *= shrink
            shrinks += 1
    return x, fx


# ---------------------------------------------------------------- chord search

def _chord_parts(r, angles):
    th, ph = angles[:, 0], angles[:, 1]
    u = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1)
    ru = u @ r
    disc = np.sqrt(ru * ru + 1.0 - r @ r)
    t_plus, t_minus = -ru + disc, -ru - disc
    q = np.stack([-t_minus, t_plus], axis=1) / (t_plus - t_minus)[:, None]
    ends = np.stack([r + t_plus[:, None] * u, r + t_minus[:, None] * u], axis=1)
    return q, ends


def chord_minimize(rho: DensityMatrix, cfg: ChordSearchConfig = ChordSearchConfig(),
                   rank_tol: float = 1e-8) -> tuple[float, DecompositionResult]:
    """Best two-term decomposition along a chord of the Bloch ball through ``rho``."""
    basis = rank2_eigenbasis(rho, rank_tol)
    dims = rho.dims
    r = density_to_bloch(rho, basis)
    if r @ r >= (1.0 - BALL_TOL) ** 2:
        psi = basis.frame @ bloch_to_coefficients(r)
        tau = pure_tangle(psi, dims)
        return tau, DecompositionResult(np.array([1.0]), psi[None, :], tau, dims)

    frame_t = basis.frame.T

    def objective(angles):
        q, ends = _chord_parts(r, angles)
        coeffs = bloch_to_coefficients(ends)          # (k, 2, 2)
        states = coeffs @ frame_t                     # (k, 2, n)
        return np.sum(q * weighted_tangles(states, dims), axis=1)

    thetas = (np.arange(cfg.polar) + 0.5) * np.pi / cfg.polar
    phis = np.arange(cfg.azimuthal) * 2 * np.pi / cfg.azimuthal
    grid = np.array([(t, p) for t in thetas for p in phis])
    vals = objective(grid)
    step = np.array([np.pi / cfg.polar, 2 * np.pi / cfg.azimuthal])
    best_x, best_f = None, np.inf
    for k in np.argsort(vals, kind="stable")[:cfg.candidates]:
        x, fx = _pattern_search(objective, grid[k], vals[k], step, cfg.rounds, cfg.shrink)
        if fx < best_f:
            best_x, best_f = x, fx

    q, ends = _chord_parts(r, best_x[None, :])
    states = bloch_to_coefficients(ends[0]) @ frame_t
    achieved = float(sum(qi * pure_tangle(s, dims) for qi, s in zip(q[0], states)))
    return achieved, DecompositionResult(q[0], states, achieved, dims)


# -------------------------------------------------------- isometry search

def entropy_terms(W, dims) -> np.ndarray:
    """``||w||^2 * S(tr_B |w><w| / ||w||^2)`` per row, entropy in bits."""
    d_a, d_b = dims
    W = np.asarray(W, dtype=complex)
    psi = W.reshape(-1, d_a, d_b)
    norm2 = np.einsum("kab,kab->k", psi.conj(), psi).real
    s = np.linalg.svd(psi, compute_uv=False) ** 2
    out = np.zeros_like(norm2)
    nz = norm2 > 0
    prob = s[nz] / norm2[nz, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(prob > 0, prob * np.log2(prob), 0.0)
    out[nz] = -norm2[nz] * plogp.sum(axis=1)
    return out.reshape(W.shape[:-1])


def concurrence_terms(W, dims) -> np.ndarray:
    """``||w||^2 * sqrt(tau(w / ||w||))`` per row (I-concurrence integrand)."""
    W = np.asarray(W, dtype=complex)
    norm = np.sqrt(np.einsum("...a,...a->...", W.conj(), W).real)
    return norm * np.sqrt(np.clip(weighted_tangles(W, dims), 0.0, None))


OBJECTIVES = {"tangle": weighted_tangles, "entropy": entropy_terms,
              "concurrence": concurrence_terms}


def _pair_unitaries(angles):
    th, ph = angles[:, 0], angles[:, 1]
    c, s, e = np.cos(th), np.sin(th), np.exp(1j * ph)
    U = np.empty((len(th), 2, 2), dtype=complex)
    U[:, 0, 0], U[:, 0, 1] = c, -e * s
    U[:, 1, 0], U[:, 1, 1] = s / e, c
    return U


def _random_isometry(n: int, rng) -> np.ndarray:
    Z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))[None, :]


def decomposition_minimize(rho: DensityMatrix, cfg: DecompSearchConfig = DecompSearchConfig(),
                           objective: str = "tangle",
                           rank_tol: float = 1e-8) -> tuple[float, DecompositionResult]:
    """Minimize the average of a pure-state measure over n-term decompositions.

    ``objective`` is ``"tangle"`` (I-tangle), ``"concurrence"`` (I-concurrence)
    or ``"entropy"`` (entanglement of formation, entropy of the reduced state). Reconstruction of ``rho`` holds
    for every candidate because ``V`` stays an isometry. The result carries
    ``converged=False`` if a restart hit ``max_iter`` sweeps.
    """
    term = OBJECTIVES[objective]
    basis = rank2_eigenbasis(rho, rank_tol)
    dims = rho.dims
    lam = np.array([basis.p, 1.0 - basis.p])
    base_t = (basis.frame * np.sqrt(lam)[None, :]).T   # rows sqrt(lam_j) v_j
    rng = np.random.default_rng(cfg.seed)
    pairs = list(combinations(range(cfg.n_terms), 2))
    thetas = np.arange(cfg.grid) * np.pi / cfg.grid
    phis = np.arange(cfg.grid) * 2 * np.pi / cfg.grid
    grid = np.array([(t, p) for t in thetas for p in phis])
    step = np.array([np.pi / cfg.grid, 2 * np.pi / cfg.grid])

    best_val, best_V, all_converged = np.inf, None, True
    for _ in range(cfg.restarts):
        V = _random_isometry(cfg.n_terms, rng)
        current = float(term(V @ base_t, dims).sum())
        converged = False
        for _ in range(cfg.max_iter):
            start = current
            for a, b in pairs:
                rows = V[[a, b]]
                others = current - float(term(rows @ base_t, dims).sum())

                def pair_value(angles, rows=rows):
                    W = _pair_unitaries(angles) @ rows @ base_t
                    return term(W, dims).sum(axis=1)

                vals = pair_value(grid)
                k = int(np.argmin(vals))
                x, fx = _pattern_search(pair_value, grid[k], vals[k], step, cfg.rounds, cfg.shrink)
                if others + fx < current:
                    V[[a, b]] = _pair_unitaries(x[None, :])[0] @ rows
                    current = float(term(V @ base_t, dims).sum())
            if start - current < cfg.tol:
                converged = True
                break
        all_converged &= converged
        if current < best_val:
            best_val, best_V = current, V.copy()

    W = best_V @ base_t
    weights = np.einsum("ka,ka->k", W.conj(), W).real
    keep = weights > 0
    states = W[keep] / np.sqrt(weights[keep])[:, None]
    return best_val, DecompositionResult(weights[keep], states, best_val, dims, all_converged)


# ----------------------------------------------------------- batch verification

@dataclass
class ReportRow:
    id: int
    tau_closed: float | None = None
    tau_chord: float | None = None
    tau_decomp: float | None = None
    gap_chord: float | None = None
    gap_decomp: float | None = None
    eof_bound: float | None = None
    eof_oracle: float | None = None
    eof_gap: float | None = None
    status: str = "ok"

    @property
    def tau_oracle(self) -> float | None:
        vals = [v for v in (self.tau_chord, self.tau_decomp) if v is not None]
        return min(vals) if vals else None

    @property
    def gap(self) -> float | None:
        if self.tau_closed is None or self.tau_oracle is None:
            return None
        return abs(self.tau_closed - self.tau_oracle)


@dataclass(frozen=True)
class VerifyConfig:
    """Oracle budget per verified state.

    ``decomp_runs`` and ``eof_runs`` list ``(n_terms, restarts)`` pairs; the
    reported oracle value is the minimum over the runs. An empty ``eof_runs``
    skips the entanglement-of-formation columns.
    """
    chord: ChordSearchConfig = field(default_factory=ChordSearchConfig)
    decomp_runs: tuple[tuple[int, int], ...] = ((2, 4), (3, 1))
    eof_runs: tuple[tuple[int, int], ...] = ((2, 4), (3, 1))
    sweep_tol: float = 1e-10
    rank_tol: float = 1e-8


def _best_of_runs(rho, runs, objective, seed, idx, tag, cfg: VerifyConfig):
    best, converged = np.inf, True
    for n, restarts in runs:
        sub_seed = int(np.random.SeedSequence([seed, idx, tag, n]).generate_state(1)[0])
        dcfg = DecompSearchConfig(n_terms=n, restarts=restarts, tol=cfg.sweep_tol, seed=sub_seed)
        val, res = decomposition_minimize(rho, dcfg, objective, cfg.rank_tol)
        best, converged = min(best, val), converged and res.converged
    return best, converged


def verify_state(rho: DensityMatrix, idx: int, seed: int,
                 cfg: VerifyConfig = VerifyConfig()) -> ReportRow:
    """Closed form against both oracles for one state; errors become a row status."""
    row = ReportRow(idx)
    try:
        row.tau_closed = i_tangle_rank2(rho, cfg.rank_tol)
        row.tau_chord, _ = chord_minimize(rho, cfg.chord, cfg.rank_tol)
        row.tau_decomp, converged = _best_of_runs(rho, cfg.decomp_runs, "tangle", seed, idx, 0, cfg)
        row.gap_chord = abs(row.tau_closed - row.tau_chord)
        row.gap_decomp = abs(row.tau_closed - row.tau_decomp)
        if rho.dims.d_a == 2 and cfg.eof_runs:
            row.eof_bound = eof_upper_bound(rho, rank_tol=cfg.rank_tol)
            row.eof_oracle, eof_ok = _best_of_runs(rho, cfg.eof_runs, "entropy", seed, idx, 1, cfg)
            row.eof_gap = row.eof_bound - row.eof_oracle
            converged = converged and eof_ok
        if not converged:
            row.status = "non_convergence"
    except RankExceeded:
        row.status = "rank_exceeded"
    except TangleKitError:
        row.status = "invalid"
    return row


def _verify_job(args):
    return verify_state(*args)


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("TANGLEKIT_THREADS", "0") or 0)
    return threads if threads > 0 else (os.cpu_count() or 1)


def verify_batch(dims, count: int, seed: int, cfg: VerifyConfig = VerifyConfig(),
                 extra_states=(), threads: int | None = 1) -> list[ReportRow]:
    """Verify ``count`` seeded random rank-2 states plus any ``extra_states``.

    States are drawn in order from one PCG64 stream seeded with ``seed``; the
    oracle restarts for row ``i`` are seeded from ``(seed, i)`` so rows do not
    depend on evaluation order. Rows come back in index order.
    """
    rng = np.random.default_rng(seed)
    states = [random_rank2(dims, rng) for _ in range(count)] + list(extra_states)
    jobs = [(rho, i, seed, cfg) for i, rho in enumerate(states)]
    workers = resolve_threads(threads)
    if workers <= 1 or len(jobs) <= 1:
        return [_verify_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_verify_job, jobs))


@dataclass(frozen=True)
class BatchSummary:
    rows: int
    ok_rows: int
    max_gap: float
    mean_gap: float
    min_margin: float  # min over rows of tau_oracle - tau_closed
    passed: bool


def summarize(rows: list[ReportRow], tol: float) -> BatchSummary:
    ok = [r for r in rows if r.status == "ok"]
    gaps = np.array([r.gap for r in ok], dtype=float)
    margins = np.array([r.tau_oracle - r.tau_closed for r in ok], dtype=float)
    max_gap = float(gaps.max()) if gaps.size else 0.0
    mean_gap = float(gaps.mean()) if gaps.size else 0.0
    min_margin = float(margins.min()) if margins.size else 0.0
    passed = len(ok) == len(rows) and max_gap <= tol and min_margin >= -tol
    return BatchSummary(len(rows), len(ok), max_gap, mean_gap, min_margin, passed)
