"""Recovery of pulse locations and amplitudes from spectral measurements.

The measurements are a 2-D sum of weighted complex exponentials. Per-axis
pole estimates come from a matrix pencil on stacked Hankel matrices (one per
row/column, weighted by row energy); the axes are then paired through the
least-squares amplitude matrix over all pole combinations, and amplitudes are
refit on the paired model. A classical annihilating-filter solver is included
as an independent cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigurationError, DegenerateSignalError, InsufficientDataError

__all__ = [
    "matrix_pencil_1d",
    "prony_oracle",
    "EstimationResult",
    "estimate_2d",
    "amplitudes_ls",
    "wrap_location",
    "pair_locations",
]

_RANK_TOL = 1e-12


def _hankel(seq, rows):
    cols = seq.size - rows + 1
    idx = np.arange(rows)[:, None] + np.arange(cols)[None, :]
    return seq[idx]


def _stacked_pencil(seqs, L, pencil_param, rank_tol=_RANK_TOL):
    """Pole estimates shared by several exponential-sum sequences.

    Builds one Hankel block per sequence (scaled by the sequence norm),
    stacks them, and reads the poles from the shift structure of the top
    right-singular vectors. Returns (poles, effective_rank).
    """
    n = seqs[0].size
    if any(s.size != n for s in seqs):
        raise ConfigurationError("all sequences must share one length")
    if n < 2 * L:
        raise InsufficientDataError(
            f"{n} samples cannot support {L} poles (need at least {2 * L})"
        )
    if pencil_param is None:
        q = min(max(int(np.floor(n / 2)), L), n - L)
    else:
        q = int(pencil_param)
        if not (L <= q <= n - L):
            raise ConfigurationError(
                f"pencil parameter {q} outside [{L}, {n - L}] for length {n}"
            )
    norms = np.array([np.linalg.norm(s) for s in seqs])
    ref = norms.max()
    if ref == 0.0:
        raise DegenerateSignalError("all sequences are zero")
    blocks = [
        (w / ref) * _hankel(s, n - q) for w, s in zip(norms, seqs) if w > 0.0
    ]
    Y = np.vstack(blocks)  # columns: q+1 consecutive shifts
    _, svals, vh = np.linalg.svd(Y, full_matrices=False)
    if svals[0] == 0.0:
        raise DegenerateSignalError("rank-zero data")
    rank = int(np.sum(svals >= rank_tol * svals[0]))
    rank = min(rank, L)
    if rank == 0:
        raise DegenerateSignalError("rank-zero data")
    # rows of vh conjugate the pole Vandermonde structure, so the plain
    # transpose (not the Hermitian one) spans the pole subspace
    v = vh[:rank, :].T  # (q+1, rank)
    v_up = v[:-1, :]
    v_dn = v[1:, :]
    poles = np.linalg.eigvals(np.linalg.pinv(v_up) @ v_dn)
    return poles, rank


def matrix_pencil_1d(sequence, L, pencil_param=None):
    """Estimate L exponential poles from one uniformly indexed sequence.

    Raises InsufficientDataError for fewer than 2L samples and
    DegenerateSignalError when the data's numerical rank is below L
    (singular-value ratio under 1e-12).
    """
    seq = np.asarray(sequence, dtype=complex).ravel()
    poles, rank = _stacked_pencil([seq], L, pencil_param)
    if rank < L:
        raise DegenerateSignalError(
            f"data rank {rank} below the requested model order {L}"
        )
    return poles


def prony_oracle(sequence, L):
    """Classical annihilating-filter pole solver (cross-check oracle).

    Solves the linear prediction system for the filter taps, then returns the
    roots of the annihilating polynomial.
    """
    seq = np.asarray(sequence, dtype=complex).ravel()
    n = seq.size
    if n < 2 * L:
        raise InsufficientDataError(
            f"{n} samples cannot support {L} poles (need at least {2 * L})"
        )
    rows = n - L
    A = np.empty((rows, L), dtype=complex)
    for m in range(L):
        A[:, m] = seq[L - 1 - m : n - 1 - m]
    b = -seq[L:]
    svals = np.linalg.svd(A, compute_uv=False)
    if svals[0] == 0.0 or svals[-1] < _RANK_TOL * svals[0]:
        raise DegenerateSignalError("singular annihilation system")
    taps, *_ = np.linalg.lstsq(A, b, rcond=None)
    return np.roots(np.concatenate(([1.0 + 0.0j], taps)))


def wrap_location(value, period):
    """Map a location estimate into [0, period)."""
    return np.mod(value, period)


def _vandermonde_2d(grid, xs, ys):
    """Model matrix: columns exp(-j(k1*w0x*x + k2*w0y*y)) flattened over the lattice."""
    e1 = np.exp(-1j * np.outer(grid.k1 * grid.omega0x, np.asarray(xs, dtype=float)))
    e2 = np.exp(-1j * np.outer(grid.k2 * grid.omega0y, np.asarray(ys, dtype=float)))
    return (e1[:, None, :] * e2[None, :, :]).reshape(-1, np.asarray(xs).size)


def amplitudes_ls(P, xs, ys):
    """Least-squares amplitudes for known locations.

    Returns (amplitudes, relative residual). Raises DegenerateSignalError when
    the location set yields a rank-deficient model (duplicate locations).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    V = _vandermonde_2d(P.grid, xs, ys)
    svals = np.linalg.svd(V, compute_uv=False)
    if svals[0] == 0.0 or svals[-1] < 1e-10 * svals[0]:
        raise DegenerateSignalError(
            "rank-deficient location model (duplicate or near-duplicate locations)"
        )
    b = P.values.ravel()
    amps, *_ = np.linalg.lstsq(V, b, rcond=None)
    resid = np.linalg.norm(V @ amps - b) / max(np.linalg.norm(b), np.finfo(float).tiny)
    return amps, float(resid)


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """Recovered pulse parameters plus fit diagnostics.

    locations are wrapped into [0, T0x) x [0, T0y); pairing_matrix holds the
    |amplitude| association scores between x- and y-poles; diagnostics
    records ambiguity flags and effective per-axis ranks.
    """

    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)
    residual: float
    pairing_matrix: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)

    @property
    def locations(self):
        return np.column_stack([self.xs, self.ys])


def estimate_2d(P, L, pencil_param=None):
    """Recover L pulses from 2-D weighted-exponential measurements.

    Per-axis poles come from the stacked matrix pencil; the cross-axis
    pairing maximizes total |amplitude| over one-to-one assignments (when an
    axis shows rank below L, the L strongest amplitude entries are taken so a
    shared pole can serve several pulses). Amplitudes are refit on the paired
    model and the relative model residual is reported.
    """
    if L < 1:
        raise ConfigurationError(f"model order must be >= 1, got {L}")
    grid = P.grid
    if grid.size1 < 2 * L + 1 or grid.size2 < 2 * L + 1:
        raise InsufficientDataError(
            f"lattice {grid.size1}x{grid.size2} too small for L={L} "
            f"(need at least {2 * L + 1} per axis)"
        )
    vals = P.values
    seqs_x = [vals[:, j] for j in range(vals.shape[1])]
    seqs_y = [vals[i, :] for i in range(vals.shape[0])]
    poles_x, rank_x = _stacked_pencil(seqs_x, L, pencil_param)
    poles_y, rank_y = _stacked_pencil(seqs_y, L, pencil_param)

    e1 = poles_x[None, :] ** grid.k1[:, None]
    e2 = poles_y[None, :] ** grid.k2[:, None]
    M = (e1[:, None, :, None] * e2[None, :, None, :]).reshape(
        grid.size1 * grid.size2, poles_x.size * poles_y.size
    )
    C_flat, *_ = np.linalg.lstsq(M, vals.ravel(), rcond=None)
    C = C_flat.reshape(poles_x.size, poles_y.size)
    score = np.abs(C)

    if rank_x >= L and rank_y >= L:
        rows, cols = linear_sum_assignment(-score)
        order = np.argsort(-score[rows, cols], kind="stable")
        pairs = list(zip(rows[order], cols[order]))[:L]
    else:
        if poles_x.size * poles_y.size < L:
            raise DegenerateSignalError(
                f"only {poles_x.size * poles_y.size} pole combinations for L={L}"
            )
        flat = sorted(
            ((-score[a, b], a, b) for a in range(score.shape[0]) for b in range(score.shape[1]))
        )
        pairs = [(a, b) for _, a, b in flat[:L]]

    ambiguous = []
    for a in {a for a, _ in pairs}:
        row = np.sort(score[a, :])[::-1]
        if row.size > 1 and row[1] > (1.0 - 1e-3) * row[0]:
            ambiguous.append(int(a))

    ux = poles_x[[a for a, _ in pairs]]
    vy = poles_y[[b for _, b in pairs]]
    xs = wrap_location(-np.angle(ux) / grid.omega0x, grid.t0x)
    ys = wrap_location(-np.angle(vy) / grid.omega0y, grid.t0y)
    amps, resid = amplitudes_ls(SwceLike(vals, grid), xs, ys)
    return EstimationResult(
        xs=xs,
        ys=ys,
        amplitudes=amps,
        residual=resid,
        pairing_matrix=score,
        diagnostics={
            "rank_x": rank_x,
            "rank_y": rank_y,
            "ambiguous_rows": ambiguous,
            "pole_moduli_x": np.abs(poles_x).tolist(),
            "pole_moduli_y": np.abs(poles_y).tolist(),
        },
    )


class SwceLike:
    """Minimal measurements view for amplitudes_ls (avoids re-validation)."""

    __slots__ = ("values", "grid")

    def __init__(self, values, grid):
        self.values = values
        self.grid = grid


def pair_locations(est_xy, true_xy):
    """Optimal one-to-one matching of estimated to true locations.

    Returns (perm, squared_errors) where perm[i] is the estimate index
    assigned to truth i and squared_errors[i] = |est - true|^2 for that pair.
    """
    est = np.asarray(est_xy, dtype=float)
    tru = np.asarray(true_xy, dtype=float)
    d2 = ((tru[:, None, :] - est[None, :, :]) ** 2).sum(axis=2)
    rows, cols = linear_sum_assignment(d2)
    perm = np.empty(tru.shape[0], dtype=int)
    perm[rows] = cols
    return perm, d2[rows, cols]
