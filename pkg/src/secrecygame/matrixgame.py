"""Uniform discretization of the reduced game and exact zero-sum LP solves.

The discrete value of a matrix game is found with a dense tableau simplex on
the column player's LP (max 1'w s.t. Aw <= 1, w >= 0), whose slack basis is
immediately feasible once the payoff matrix is shifted positive. The row
player's optimal mixture falls out of the duals. The final basis is re-solved
against the original data so accumulated pivot error does not leak into the
reported certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LpFailureError, ResolutionError
from . import regions
from .reduction import ReducedGame

SQRT2 = float(np.sqrt(2.0))

_ENTER_EPS = 1e-9   # reduced cost must beat this to enter the basis
_PIVOT_EPS = 1e-10  # smallest acceptable pivot element
_GAP_GUARD = 1e-6   # production guard on the primal/dual certificate gap


@dataclass(frozen=True, eq=False)
class MatrixGame:
    """Finite zero-sum game: rows = source rates, columns = relay rates."""

    payoff: np.ndarray
    row_labels: np.ndarray
    col_labels: np.ndarray


@dataclass(frozen=True, eq=False)
class LpSolution:
    """Exact value and optimal mixtures of a matrix game."""

    value: float
    row_mixture: np.ndarray
    col_mixture: np.ndarray
    iterations: int


def discretize(rg: ReducedGame, T: int) -> MatrixGame:
    """Sample the reduced rectangle on a uniform (T+1) x (T+1) grid.

    Grid rates include both endpoints of each interval; entries are the
    payoff surface evaluated exactly at the grid rate pairs.
    """
    if T < 2:
        raise ResolutionError(f"discretization needs T >= 2, got {T}")
    xi = np.linspace(rg.xi_lo, rg.xi_hi, T + 1)
    eta = np.linspace(rg.eta_lo, rg.eta_hi, T + 1)
    payoff = regions.payoff(rg.corners, xi[:, None], eta[None, :])
    return MatrixGame(payoff=payoff, row_labels=xi, col_labels=eta)


def error_bound(rg: ReducedGame, T: int) -> float:
    """Certified gap between the discrete and continuous game values.

    Scales as 2*sqrt(2)*L/T with L the rectangle edge; the longest edge is
    used for non-square rectangles, which is conservative.
    """
    if T < 2:
        raise ResolutionError(f"error bound needs T >= 2, got {T}")
    edge = max(rg.xi_hi - rg.xi_lo, rg.eta_hi - rg.eta_lo)
    return 2.0 * SQRT2 * edge / T


def _simplex_max(A: np.ndarray, max_iter: int) -> tuple:
    """Tableau simplex for max 1'w s.t. Aw <= 1, w >= 0 (requires A > 0).

    Entering rule is steepest reduced cost, demoted permanently to Bland's
    rule if the objective stalls, so termination is guaranteed. Ratio-test
    ties break on the smallest basis label. Returns (basis, iterations).
    """
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = 1.0
    T[m, :n] = -1.0  # reduced costs of the structural variables
    basis = np.arange(n, n + m)

    bland = False
    stall = 0
    last_obj = 0.0
    iterations = 0
    while True:
        red = T[m, :-1]
        if bland:
            neg = np.nonzero(red < -_ENTER_EPS)[0]
            if neg.size == 0:
                break
            j = int(neg[0])
        else:
            j = int(np.argmin(red))
            if red[j] >= -_ENTER_EPS:
                break
        col = T[:m, j]
        rows = np.nonzero(col > _PIVOT_EPS)[0]
        if rows.size == 0:
            raise LpFailureError("LP unbounded; payoff matrix not positive?")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12]
        r = int(tied[np.argmin(basis[tied])])

        piv = T[r, j]
        T[r, :] /= piv
        colvals = T[:, j].copy()
        colvals[r] = 0.0
        T -= np.outer(colvals, T[r, :])
        basis[r] = j
        iterations += 1

        obj = T[m, -1]
        if obj <= last_obj + 1e-15:
            stall += 1
            if stall > 2 * m and not bland:
                bland = True
        else:
            stall = 0
        last_obj = obj
        if iterations > max_iter:
            raise LpFailureError(f"simplex exceeded {max_iter} pivots")
    return basis, iterations


def solve_lp(game) -> LpSolution:
    """Solve a zero-sum matrix game exactly by linear programming.

    Accepts a MatrixGame or a raw payoff array. The returned value is the
    midpoint of the primal/dual payoff certificates recomputed on the
    original matrix; the certificate gap is guarded, so a successful return
    carries mixtures that are optimal to ~1e-9.
    """
    A0 = np.asarray(game.payoff if isinstance(game, MatrixGame) else game, dtype=float)
    if A0.ndim != 2 or A0.size == 0:
        raise LpFailureError("payoff matrix must be 2-D and nonempty")
    if not np.all(np.isfinite(A0)):
        raise LpFailureError("payoff matrix has non-finite entries")
    m, n = A0.shape

    lowest = A0.min()
    shift = 0.0 if lowest > 0.0 else 1.0 - lowest
    A = A0 + shift

    basis, iterations = _simplex_max(A, max_iter=50 * (m + n) + 1000)

    # Fresh solve against the original constraint data for the final basis.
    ext = np.hstack([A, np.eye(m)])
    cost = np.concatenate([np.ones(n), np.zeros(m)])
    B = ext[:, basis]
    xB = np.linalg.solve(B, np.ones(m))
    w = np.zeros(n + m)
    w[basis] = xB
    w = np.clip(w[:n], 0.0, None)
    y = np.clip(np.linalg.solve(B.T, cost[basis]), 0.0, None)

    sw, sy = w.sum(), y.sum()
    if sw <= 0.0 or sy <= 0.0:
        raise LpFailureError("degenerate LP solution (zero mixture mass)")
    col_mixture = w / sw
    row_mixture = y / sy

    lo = float((row_mixture @ A0).min())
    hi = float((A0 @ col_mixture).max())
    if hi - lo > _GAP_GUARD:
        raise LpFailureError(f"certificate gap {hi - lo:.3e} exceeds guard")
    return LpSolution(
        value=0.5 * (lo + hi),
        row_mixture=row_mixture,
        col_mixture=col_mixture,
        iterations=iterations,
    )


def game_to_csv(game: MatrixGame, path) -> None:
    """Dump the payoff matrix with rate labels (debugging aid)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# schema: matrix-v1\n")
        fh.write("xi/eta," + ",".join(f"{c:.12g}" for c in game.col_labels) + "\n")
        for label, row in zip(game.row_labels, game.payoff):
            fh.write(f"{label:.12g}," + ",".join(f"{v:.12g}" for v in row) + "\n")
