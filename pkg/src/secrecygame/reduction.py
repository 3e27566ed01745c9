"""Iterated elimination of dominated strategies and the reduced-game kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import regions
from .errors import WrongCaseError
from .regions import CornerPoints


@dataclass(frozen=True)
class ReducedGame:
    """Game restricted to the rectangle that survives elimination.

    For the diagonal-spanning geometry (cases A and D) the rectangle is the
    square [Omega_S, Omega_S+L] x [delta_R, delta_R+L] with edge
    L = Omega_R - delta_R, and `a` = (delta_S - Omega_S)/L locates where the
    eavesdropper diagonal cuts the bottom edge (a < 0 when it misses the
    square entirely). For other geometries the rectangle may be non-square
    and `a` is not meaningful.
    """

    xi_lo: float
    xi_hi: float
    eta_lo: float
    eta_hi: float
    L: float
    a: float
    corners: CornerPoints

    def kernel(self, xi, eta):
        """Payoff restricted to the rectangle (same surface as regions.payoff)."""
        return regions.payoff(self.corners, xi, eta)


def reduce_game(cp: CornerPoints) -> ReducedGame:
    """Apply the elimination passes and package the surviving rectangle.

    Raises EmptyReductionError (via require_nonempty) when called on case-N
    geometry, where the value is zero and no reduction is meaningful.
    """
    label = regions.classify(cp)
    xi_lo, xi_hi, eta_lo, eta_hi = regions.require_nonempty(label)
    L = eta_hi - eta_lo
    a = (cp.delta_S - cp.Omega_S) / L if L > 0.0 else 0.0
    return ReducedGame(xi_lo, xi_hi, eta_lo, eta_hi, L, a, cp)


def reduced_kernel(rg: ReducedGame, xi, eta):
    """Closed-form kernel on the reduced square.

    Equals xi + eta - Omega_S - delta_R - a*L on the band
    Omega_S + delta_R + a*L < xi + eta <= Omega_S + delta_R + L and zero
    elsewhere; the lower diagonal belongs to the zero set, the upper one to
    the positive band. Agrees pointwise with regions.payoff on the rectangle
    whenever the eavesdropper diagonal spans the relay interval (cases A/D).
    """
    xi_arr = np.asarray(xi, dtype=float)
    eta_arr = np.asarray(eta, dtype=float)
    eps = 1e-12
    if np.any(xi_arr < rg.xi_lo - eps) or np.any(xi_arr > rg.xi_hi + eps):
        raise WrongCaseError("xi outside the reduced rectangle")
    if np.any(eta_arr < rg.eta_lo - eps) or np.any(eta_arr > rg.eta_hi + eps):
        raise WrongCaseError("eta outside the reduced rectangle")
    s = xi_arr + eta_arr - (rg.xi_lo + rg.eta_lo)
    band = (s > rg.a * rg.L) & (s <= rg.L)
    out = np.where(band, s - rg.a * rg.L, 0.0)
    if np.ndim(xi) == 0 and np.ndim(eta) == 0:
        return float(out)
    return out
