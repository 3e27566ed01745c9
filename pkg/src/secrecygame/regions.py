"""Decodability regions, the secrecy-rate payoff surface, and case routing.

The source picks an information rate xi, the relay picks a dummy-codeword
rate eta. Each receiver decodes the source iff (xi, eta) falls inside its
region: a MAC-style triple of inequalities unioned with the treat-as-noise
strip. The payoff is the horizontal distance from the eavesdropper boundary
when only the destination can decode, and zero otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SnrSet
from .errors import EmptyReductionError

# Two corner rates within this absolute tolerance are treated as equal, so
# classification does not chatter between adjacent geometries.
RATE_TOL = 1e-9

CASE_A = "A"
CASE_D = "D"
CASE_E = "E"
CASE_L = "L"
CASE_M = "M"
CASE_N = "N"
CASE_GENERIC = "generic-reduced"


@dataclass(frozen=True)
class CornerPoints:
    """Corner rates of the destination and eavesdropper regions.

    (Delta_S, Delta_R) and (Omega_S, Omega_R) are the corners of the
    destination region boundary; the lowercase pairs are the eavesdropper's.
    S_D and S_E are the sum rates carried by the diagonal segments.
    """

    Delta_S: float
    Delta_R: float
    Omega_S: float
    Omega_R: float
    delta_S: float
    delta_R: float
    omega_S: float
    omega_R: float
    S_D: float
    S_E: float


@dataclass(frozen=True)
class CaseLabel:
    """Geometric case tag plus the rectangle of surviving strategies."""

    tag: str
    reduced_rect: tuple | None  # (xi_lo, xi_hi, eta_lo, eta_hi), None for case N


def corner_points(snr: SnrSet) -> CornerPoints:
    """Corner rates (bits/channel use) from the received SNRs."""
    gsd, grd = snr.gamma_SD, snr.gamma_RD
    gse, gre = snr.gamma_SE, snr.gamma_RE
    return CornerPoints(
        Delta_S=math.log2(1.0 + gsd),
        Delta_R=math.log2(1.0 + grd / (1.0 + gsd)),
        Omega_S=math.log2(1.0 + gsd / (1.0 + grd)),
        Omega_R=math.log2(1.0 + grd),
        delta_S=math.log2(1.0 + gse),
        delta_R=math.log2(1.0 + gre / (1.0 + gse)),
        omega_S=math.log2(1.0 + gse / (1.0 + gre)),
        omega_R=math.log2(1.0 + gre),
        S_D=math.log2(1.0 + gsd + grd),
        S_E=math.log2(1.0 + gse + gre),
    )


def _boundary(flat_hi, kink_lo, kink_hi, sum_rate, flat_lo, eta):
    """Largest decodable source rate as a function of eta (vectorized)."""
    eta_arr = np.asarray(eta, dtype=float)
    out = np.where(
        eta_arr <= kink_lo,
        flat_hi,
        np.where(eta_arr <= kink_hi, sum_rate - eta_arr, flat_lo),
    )
    if np.ndim(eta) == 0:
        return float(out)
    return out


def eaves_boundary(cp: CornerPoints, eta):
    """sup{xi : (xi, eta) decodable by the eavesdropper}; non-increasing in eta."""
    return _boundary(cp.delta_S, cp.delta_R, cp.omega_R, cp.S_E, cp.omega_S, eta)


def dest_boundary(cp: CornerPoints, eta):
    """sup{xi : (xi, eta) decodable by the destination}."""
    return _boundary(cp.Delta_S, cp.Delta_R, cp.Omega_R, cp.S_D, cp.Omega_S, eta)


def payoff(cp: CornerPoints, xi, eta):
    """Secrecy rate at rate pair (xi, eta).

    Zero when the eavesdropper can decode (xi <= eaves boundary, ties
    resolved into the zero set) or the destination cannot (xi > dest
    boundary); otherwise the excess of xi over the eavesdropper boundary.
    """
    xi_arr = np.asarray(xi, dtype=float)
    b_e = np.asarray(eaves_boundary(cp, eta))
    b_d = np.asarray(dest_boundary(cp, eta))
    out = np.where((xi_arr > b_e) & (xi_arr <= b_d), xi_arr - b_e, 0.0)
    if np.ndim(xi) == 0 and np.ndim(eta) == 0:
        return float(out)
    return out


def boundary_separation(cp: CornerPoints) -> float:
    """Minimum of dest_boundary - eaves_boundary over all eta.

    Both boundaries are piecewise linear with kinks at the four corner
    rates, so the minimum over [0, inf) is attained at a kink (or at eta=0).
    A non-positive separation means the boundaries touch/cross or the
    destination region is contained in the eavesdropper's.
    """
    kinks = np.array([0.0, cp.Delta_R, cp.delta_R, cp.Omega_R, cp.omega_R])
    gaps = dest_boundary(cp, kinks) - eaves_boundary(cp, kinks)
    return float(np.min(gaps))


def survivor_rectangle(cp: CornerPoints) -> tuple:
    """Rectangle of strategies surviving iterated elimination.

    Elimination passes: source rates below Omega_S are dominated by Omega_S
    and rates above Delta_S earn zero always; relay rates above Omega_R are
    inferior to Omega_R and rates below delta_R inferior to delta_R; finally
    source rates above S_D - eta_lo earn zero against every surviving relay
    rate. When Omega_R <= delta_R the two relay passes meet: every rate in
    [Omega_R, delta_R] yields the same payoff function, and the canonical
    survivor is Omega_R (the rectangle degenerates to a point).
    """
    eta_hi = cp.Omega_R
    eta_lo = min(cp.delta_R, cp.Omega_R)
    xi_lo = cp.Omega_S
    xi_hi = max(xi_lo, min(cp.Delta_S, cp.S_D - eta_lo))
    return (xi_lo, xi_hi, eta_lo, eta_hi)


def classify(cp: CornerPoints, tol: float = RATE_TOL) -> CaseLabel:
    """Route corner geometry to a solution case.

    N: boundaries touch/cross or the destination region is contained (zero
    value). E: the relay interval collapses to a point (pure saddle). A/D:
    the eavesdropper diagonal spans the whole relay interval, split on the
    sign of delta_S - Omega_S. L/M: the eavesdropper region lies entirely
    under the destination's flat top (omega_R <= Delta_R), which collapses
    the game to two rates per player, split the same way. Anything else is
    solved numerically on the surviving rectangle.
    """
    if boundary_separation(cp) <= tol:
        return CaseLabel(CASE_N, None)
    rect = survivor_rectangle(cp)
    if cp.Omega_R <= cp.delta_R + tol:
        return CaseLabel(CASE_E, rect)
    if cp.Delta_R <= cp.delta_R + tol and cp.Omega_R <= cp.omega_R + tol:
        tag = CASE_A if cp.Omega_S <= cp.delta_S + tol else CASE_D
        return CaseLabel(tag, rect)
    if cp.omega_R <= cp.Delta_R + tol:
        tag = CASE_L if cp.Omega_S <= cp.delta_S + tol else CASE_M
        return CaseLabel(tag, rect)
    return CaseLabel(CASE_GENERIC, rect)


def require_nonempty(label: CaseLabel) -> tuple:
    """Return the surviving rectangle, rejecting case-N misroutes."""
    if label.tag == CASE_N or label.reduced_rect is None:
        raise EmptyReductionError(
            "no strategies survive elimination (case N geometry)"
        )
    return label.reduced_rect
