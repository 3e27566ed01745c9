"""Closed-form equilibria and the mixed-strategy representation.

Strategies over rates are an atom list plus piecewise closed-form cdf
segments of the shape F(x) = (A + B*u)*exp(u/s) + C with u = (x-x0)/span,
which covers every distribution produced here: the equalizing cdfs are a
jump at the low edge of the support followed by one or two exponential
pieces, and discrete (LP) strategies are atoms only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import matrixgame, regions
from .errors import DegenerateGeometryError, WrongCaseError
from .reduction import ReducedGame, reduce_game
from .regions import CornerPoints, RATE_TOL

#: Game values within this absolute distance of zero are clamped to exactly
#: 0.0 so that "(x)^+" outputs are bit-stable in CSV/reports.
ZERO_CLAMP = 1e-9

METHOD_K0 = "analytic-k0"
METHOD_CASE_D = "analytic-caseD"
METHOD_CASE_E = "pure-caseE"
METHOD_2X2_L = "matrix-2x2-L"
METHOD_2X2_M = "matrix-2x2-M"
METHOD_CASE_N = "zero-caseN"
METHOD_LP = "lp-discrete"
METHOD_NO_CODEBOOK = "unknown-codebook"


@dataclass(frozen=True)
class CdfSegment:
    """Closed-form cdf piece (A + B*u) * exp(u/s) + C on [lo, hi], u=(x-x0)/span."""

    lo: float
    hi: float
    x0: float
    span: float
    s: float
    A: float
    B: float
    C: float = 0.0

    def cdf(self, x):
        u = (np.asarray(x, dtype=float) - self.x0) / self.span
        return (self.A + self.B * u) * np.exp(u / self.s) + self.C

    def pdf(self, x):
        u = (np.asarray(x, dtype=float) - self.x0) / self.span
        return np.exp(u / self.s) * (self.B + (self.A + self.B * u) / self.s) / self.span


@dataclass(frozen=True)
class MixedStrategy:
    """One-dimensional distribution over rates: atoms plus smooth cdf pieces.

    The cdf is evaluated in increment form, so atoms may sit at segment
    endpoints: F(x) = sum of atom masses at locations <= x, plus each
    segment's cdf increase from its left endpoint up to x.
    """

    support_lo: float
    support_hi: float
    atoms: tuple = ()
    segments: tuple = ()

    @classmethod
    def point_mass(cls, loc: float) -> "MixedStrategy":
        return cls(support_lo=loc, support_hi=loc, atoms=((loc, 1.0),))

    @classmethod
    def from_weights(cls, locations, weights) -> "MixedStrategy":
        """Discrete strategy from parallel location/probability arrays."""
        locs = np.asarray(locations, dtype=float)
        probs = np.asarray(weights, dtype=float)
        keep = probs > 0.0
        locs, probs = locs[keep], probs[keep]
        order = np.argsort(locs)
        atoms = tuple((float(l), float(p)) for l, p in zip(locs[order], probs[order]))
        if not atoms:
            raise ValueError("discrete strategy needs at least one positive weight")
        return cls(support_lo=atoms[0][0], support_hi=atoms[-1][0], atoms=atoms)

    def cdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        out = np.zeros_like(x_arr)
        for loc, mass in self.atoms:
            out = out + mass * (x_arr >= loc)
        for seg in self.segments:
            inside = np.clip(x_arr, seg.lo, seg.hi)
            out = out + np.where(x_arr < seg.lo, 0.0, seg.cdf(inside) - seg.cdf(seg.lo))
        if np.ndim(x) == 0:
            return float(out)
        return out

    def density(self, x):
        """Density of the smooth part (atoms excluded)."""
        x_arr = np.asarray(x, dtype=float)
        out = np.zeros_like(x_arr)
        for seg in self.segments:
            mask = (x_arr >= seg.lo) & (x_arr <= seg.hi)
            if np.any(mask):
                out = out + np.where(mask, seg.pdf(np.clip(x_arr, seg.lo, seg.hi)), 0.0)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def atom_mass(self) -> float:
        return sum(m for _, m in self.atoms)

    def total_mass(self) -> float:
        return float(self.cdf(self.support_hi))

    def quantile(self, u):
        """Generalized inverse cdf, inf{x : F(x) >= u}, to ~1e-12 rate accuracy."""
        u_arr = np.asarray(u, dtype=float)
        lo = np.full_like(u_arr, self.support_lo)
        hi = np.full_like(u_arr, self.support_hi)
        at_lo = u_arr <= self.cdf(self.support_lo)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            ge = self.cdf(mid) >= u_arr
            hi = np.where(ge, mid, hi)
            lo = np.where(ge, lo, mid)
        out = np.where(at_lo, self.support_lo, hi)
        if np.ndim(u) == 0:
            return float(out)
        return out

    def validate(self, tol: float = 1e-9) -> None:
        """Check normalization and monotonicity; raises ValueError on failure."""
        if any(m < -tol for _, m in self.atoms):
            raise ValueError("negative atom mass")
        total = self.total_mass()
        if abs(total - 1.0) > tol:
            raise ValueError(f"strategy mass {total!r} not 1 within {tol}")
        grid = np.linspace(self.support_lo, self.support_hi, 1001)
        values = self.cdf(grid)
        if np.any(np.diff(values) < -tol):
            raise ValueError("cdf is not non-decreasing")


@dataclass(frozen=True)
class EquilibriumReport:
    """Game value, both optimal strategies, and how they were obtained."""

    value: float
    source_strategy: MixedStrategy
    jammer_strategy: MixedStrategy
    method: str
    error_bound: float
    case: str = ""
    notes: tuple = field(default_factory=tuple)


def _clamp_zero(v: float) -> float:
    return 0.0 if abs(v) < ZERO_CLAMP else float(v)


def g0(a: float) -> float:
    """Equalizing atom mass for diagonal offsets 0 <= a <= 1/2."""
    return math.exp(-1.0 / (1.0 - a)) / (1.0 - (a / (1.0 - a)) * math.exp(-1.0))


def _alpha(a: float) -> float:
    # For a <= 0 the second cdf piece is empty and normalization alone
    # fixes the atom mass.
    return g0(a) if a > 0.0 else math.exp(-1.0 / (1.0 - a))


def equalizer_strategy(lo: float, L: float, a: float) -> MixedStrategy:
    """Optimal cdf on [lo, lo+L] for diagonal offset a <= 1/2.

    Jump of the equalizing mass at lo, an exponential piece up to
    lo + L(1-a), and (for a > 0) a second piece bending the cdf to reach 1
    at lo + L. The relay's optimal cdf has the same shape anchored at its
    own interval.
    """
    al = _alpha(a)
    s = 1.0 - a
    junction = lo + L * min(s, 1.0)
    segments = [CdfSegment(lo=lo, hi=junction, x0=lo, span=L, s=s, A=al, B=0.0)]
    if junction < lo + L - 1e-15:
        segments.append(
            CdfSegment(
                lo=junction,
                hi=lo + L,
                x0=lo,
                span=L,
                s=s,
                A=al * (1.0 + math.exp(-1.0)),
                B=-al * math.exp(-1.0) / s,
            )
        )
    return MixedStrategy(
        support_lo=lo,
        support_hi=lo + L,
        atoms=((lo, al),),
        segments=tuple(segments),
    )


def _require_square(rg: ReducedGame) -> None:
    if rg.L <= 0.0 or abs((rg.xi_hi - rg.xi_lo) - rg.L) > 1e-9:
        raise WrongCaseError("reduced game is not the diagonal-spanning square")


def solve_case_a_k0(rg: ReducedGame) -> EquilibriumReport:
    """Closed-form equilibrium on the reduced square for a <= 1/2.

    Value L*alpha*(1-a); both players mix an atom at the low edge of their
    interval with the exponential density of equalizer_strategy. Raises
    WrongCaseError for a > 1/2, where no closed form is implemented and the
    LP path must be used.
    """
    _require_square(rg)
    if rg.a > 0.5 + RATE_TOL:
        raise WrongCaseError(f"offset a={rg.a:.6f} > 1/2; use the LP path")
    a = min(rg.a, 0.5)
    value = _clamp_zero(rg.L * _alpha(a) * (1.0 - a))
    return EquilibriumReport(
        value=value,
        source_strategy=equalizer_strategy(rg.xi_lo, rg.L, a),
        jammer_strategy=equalizer_strategy(rg.eta_lo, rg.L, a),
        method=METHOD_K0 if a >= 0.0 else METHOD_CASE_D,
        error_bound=0.0,
        case=regions.CASE_A if a >= 0.0 else regions.CASE_D,
    )


def lp_report(rg: ReducedGame, T: int, case: str) -> EquilibriumReport:
    """Discretize the reduced rectangle and solve exactly by LP."""
    game = matrixgame.discretize(rg, T)
    sol = matrixgame.solve_lp(game)
    return EquilibriumReport(
        value=_clamp_zero(sol.value),
        source_strategy=MixedStrategy.from_weights(game.row_labels, sol.row_mixture),
        jammer_strategy=MixedStrategy.from_weights(game.col_labels, sol.col_mixture),
        method=METHOD_LP,
        error_bound=matrixgame.error_bound(rg, T),
        case=case,
        notes=(f"grid T={T}",),
    )


def solve_case_a_general(rg: ReducedGame, T: int = 400) -> EquilibriumReport:
    """Case A at any offset: closed form for a <= 1/2, certified LP beyond."""
    _require_square(rg)
    if rg.a <= 0.5:
        return solve_case_a_k0(rg)
    return lp_report(rg, T, case=regions.CASE_A)


def solve_case_d(cp: CornerPoints) -> EquilibriumReport:
    """Case D: the eavesdropper diagonal misses the square (delta_S <= Omega_S).

    Same equalizing construction as case A continued to a <= 0, where the
    single exponential piece forces alpha = e^{-1/(1-a)}; the value is still
    L*alpha*(1-a), continuous with case A at a = 0.
    """
    if cp.delta_S > cp.Omega_S + RATE_TOL:
        raise WrongCaseError("case D requires delta_S <= Omega_S")
    rg = reduce_game(cp)
    report = solve_case_a_k0(rg)
    return replace(report, method=METHOD_CASE_D, case=regions.CASE_D)


def solve_case_e(cp: CornerPoints) -> EquilibriumReport:
    """Case E pure saddle: play (Omega_S, Omega_R), value Omega_S - delta_S."""
    label = regions.classify(cp)
    if label.tag != regions.CASE_E:
        raise WrongCaseError(f"case E solver called on case {label.tag}")
    return EquilibriumReport(
        value=_clamp_zero(cp.Omega_S - cp.delta_S),
        source_strategy=MixedStrategy.point_mass(cp.Omega_S),
        jammer_strategy=MixedStrategy.point_mass(cp.Omega_R),
        method=METHOD_CASE_E,
        error_bound=0.0,
        case=regions.CASE_E,
    )


def solve_2x2(cp: CornerPoints, variant: str) -> EquilibriumReport:
    """Cases L and M: the game collapses to two rates per player.

    Source mixes {Omega_S, Delta_S}, relay mixes {delta_R, Omega_R}. With
    gaps b = (Omega_S - delta_S)^+ (zero in variant L), c = Omega_S -
    omega_S, d = Delta_S - delta_S, the payoff matrix is [[b, c], [d, 0]]
    and the equalizing mix gives value c*d/(c + d - b).
    """
    if variant not in ("L", "M"):
        raise WrongCaseError(f"unknown 2x2 variant {variant!r}")
    label = regions.classify(cp)
    if label.tag != variant:
        raise WrongCaseError(f"2x2 variant {variant} called on case {label.tag}")
    b = cp.Omega_S - cp.delta_S if variant == "M" else 0.0
    c = cp.Omega_S - cp.omega_S
    d = cp.Delta_S - cp.delta_S
    if min(b, c, d) < -RATE_TOL:
        raise WrongCaseError("2x2 payoff entries must be non-negative")
    den = c + d - b
    if den <= RATE_TOL:
        raise WrongCaseError("degenerate 2x2 game (zero equalizing denominator)")
    p = d / den  # source probability on Omega_S
    q = c / den  # relay probability on delta_R
    return EquilibriumReport(
        value=_clamp_zero(c * d / den),
        source_strategy=MixedStrategy.from_weights([cp.Omega_S, cp.Delta_S], [p, 1.0 - p]),
        jammer_strategy=MixedStrategy.from_weights([cp.delta_R, cp.Omega_R], [q, 1.0 - q]),
        method=METHOD_2X2_L if variant == "L" else METHOD_2X2_M,
        error_bound=0.0,
        case=variant,
    )


def solve_case_n(cp: CornerPoints) -> EquilibriumReport:
    """Case N: boundaries touch/cross or the destination region is contained.

    Value zero. Any relay rate where the boundary separation is non-positive
    zeroes the payoff for every source rate, so the first such kink is the
    canonical pure equilibrium representative.
    """
    label = regions.classify(cp)
    if label.tag != regions.CASE_N:
        raise WrongCaseError(f"case N solver called on case {label.tag}")
    kinks = sorted([0.0, cp.Delta_R, cp.delta_R, cp.Omega_R, cp.omega_R])
    eta_star = next(
        k
        for k in kinks
        if regions.dest_boundary(cp, k) - regions.eaves_boundary(cp, k) <= RATE_TOL
    )
    return EquilibriumReport(
        value=0.0,
        source_strategy=MixedStrategy.point_mass(cp.Omega_S),
        jammer_strategy=MixedStrategy.point_mass(eta_star),
        method=METHOD_CASE_N,
        error_bound=0.0,
        case=regions.CASE_N,
    )


def solve_unknown_codebook(cp: CornerPoints) -> EquilibriumReport:
    """Equilibrium when the destination never decodes the relay codeword.

    The destination region shrinks to the strip xi <= Omega_S, giving value
    (Omega_S - delta_S)^+. For a positive value the equilibria form the
    family (Omega_S, eta), eta in [0, delta_R]; eta = delta_R is reported as
    the canonical representative. Otherwise the unique equilibrium is the
    strip/diagonal intersection, undefined when omega_S = delta_S.
    """
    value = _clamp_zero(max(0.0, cp.Omega_S - cp.delta_S))
    if value > 0.0:
        return EquilibriumReport(
            value=value,
            source_strategy=MixedStrategy.point_mass(cp.Omega_S),
            jammer_strategy=MixedStrategy.point_mass(cp.delta_R),
            method=METHOD_NO_CODEBOOK,
            error_bound=0.0,
            case="nocodebook-positive",
            notes=(
                "equilibria form the family (Omega_S, eta) with eta in "
                "[0, delta_R]; canonical representative eta = delta_R",
            ),
        )
    if abs(cp.omega_S - cp.delta_S) <= RATE_TOL:
        raise DegenerateGeometryError(
            "intersection point undefined: omega_S equals delta_S"
        )
    eta_star = (
        (cp.omega_R - cp.delta_R) * cp.Omega_S
        + cp.omega_S * cp.delta_R
        - cp.omega_R * cp.delta_S
    ) / (cp.omega_S - cp.delta_S)
    return EquilibriumReport(
        value=0.0,
        source_strategy=MixedStrategy.point_mass(cp.Omega_S),
        jammer_strategy=MixedStrategy.point_mass(eta_star),
        method=METHOD_NO_CODEBOOK,
        error_bound=0.0,
        case="nocodebook-zero",
    )


def solve_problem1(cp: CornerPoints, T: int = 400) -> EquilibriumReport:
    """Classify the corner geometry and dispatch to the matching solver."""
    label = regions.classify(cp)
    if label.tag == regions.CASE_N:
        return solve_case_n(cp)
    if label.tag == regions.CASE_E:
        return solve_case_e(cp)
    if label.tag == regions.CASE_A:
        return solve_case_a_general(reduce_game(cp), T)
    if label.tag == regions.CASE_D:
        return solve_case_d(cp)
    if label.tag in (regions.CASE_L, regions.CASE_M):
        return solve_2x2(cp, label.tag)
    return lp_report(reduce_game(cp), T, case=label.tag)
