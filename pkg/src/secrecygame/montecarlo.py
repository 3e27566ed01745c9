"""Repeated-play simulation and deviation audits of claimed equilibria.

Block play follows the variable-rate picture: each block the source and the
relay independently draw rates from their cdfs and the realized secrecy rate
is the payoff surface at the drawn pair. Deviation audits integrate the
payoff against one player's cdf (atoms summed exactly, smooth pieces by
panel-doubling Gauss-Legendre quadrature split at payoff breakpoints) and
compare the worst probed pure deviation against the pair value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import regions
from .analytic import MixedStrategy
from .regions import CornerPoints

#: Counter-based generator used for all sampling; recorded in outputs so
#: runs are replicable across implementations.
RNG_ALGORITHM = "philox4x64-10"

_CHUNK = 1 << 17
_QUAD_TOL = 1e-11


@dataclass(frozen=True)
class PlayStats:
    """Empirical payoff statistics over B simulated blocks."""

    blocks: int
    empirical_mean: float
    std_error: float
    deviation_gap_source: float | None = None
    deviation_gap_jammer: float | None = None
    rng_algorithm: str = RNG_ALGORITHM


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for a seed, jumped to an independent stream."""
    bg = np.random.Philox(key=seed)
    if stream:
        bg = bg.jumped(stream)
    return np.random.Generator(bg)


def sample_rates(strategy: MixedStrategy, n: int, gen: np.random.Generator) -> np.ndarray:
    """Inverse-transform sample n rates from the strategy."""
    u = gen.random(n)
    if not strategy.segments:
        locs = np.array([loc for loc, _ in strategy.atoms])
        cum = np.cumsum([mass for _, mass in strategy.atoms])
        idx = np.minimum(np.searchsorted(cum, u, side="left"), locs.size - 1)
        return locs[idx]
    x = strategy.quantile(u)
    # Snap to atom locations so payoff jumps are evaluated at the exact rate.
    for loc, _ in strategy.atoms:
        x = np.where(np.abs(x - loc) <= 1e-9, loc, x)
    return x


def sample_strategy(strategy: MixedStrategy, seed: int) -> float:
    """Draw a single rate (deterministic given the seed)."""
    return float(sample_rates(strategy, 1, generator(seed))[0])


def play(
    cp: CornerPoints,
    src: MixedStrategy,
    jam: MixedStrategy,
    blocks: int,
    seed: int,
) -> PlayStats:
    """Simulate `blocks` independent plays and average the realized payoff.

    Blocks are drawn in fixed-size chunks on jumped Philox streams, so the
    result is bit-reproducible for a given seed and independent of chunking
    concurrency.
    """
    if blocks < 1:
        raise ValueError(f"blocks must be >= 1, got {blocks}")
    total = 0.0
    total_sq = 0.0
    done = 0
    stream = 0
    while done < blocks:
        n = min(_CHUNK, blocks - done)
        gen = generator(seed, stream)
        xi = sample_rates(src, n, gen)
        eta = sample_rates(jam, n, gen)
        p = regions.payoff(cp, xi, eta)
        total += float(np.sum(p))
        total_sq += float(np.sum(p * p))
        done += n
        stream += 1
    mean = total / blocks
    if blocks > 1:
        var = max(0.0, (total_sq - blocks * mean * mean) / (blocks - 1))
        std_error = math.sqrt(var / blocks)
    else:
        std_error = 0.0
    return PlayStats(blocks=blocks, empirical_mean=mean, std_error=std_error)


_GL_CACHE: dict = {}


def _gl(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _integrate_smooth(f, lo: float, hi: float) -> float:
    """Gauss-Legendre with panel doubling until the estimate is stable."""
    if hi - lo <= 1e-14:
        return 0.0
    prev = None
    for n in (32, 64, 128, 256, 512):
        nodes, weights = _gl(n)
        x = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        est = 0.5 * (hi - lo) * float(np.sum(weights * f(x)))
        if prev is not None and abs(est - prev) <= _QUAD_TOL * max(1.0, abs(est)):
            return est
        prev = est
    return est


def _split_points(lo: float, hi: float, candidates) -> list:
    pts = sorted({lo, hi, *(float(c) for c in candidates if lo < c < hi)})
    return pts


def expected_payoff_vs_jammer(cp: CornerPoints, src: MixedStrategy, eta0: float) -> float:
    """Source-side integral of the payoff against a pure relay rate."""
    total = sum(mass * regions.payoff(cp, loc, eta0) for loc, mass in src.atoms)
    if not src.segments:
        return total
    breaks = (regions.eaves_boundary(cp, eta0), regions.dest_boundary(cp, eta0))
    for seg in src.segments:
        pts = _split_points(seg.lo, seg.hi, breaks)
        for a, b in zip(pts[:-1], pts[1:]):
            total += _integrate_smooth(
                lambda x: regions.payoff(cp, x, eta0) * seg.pdf(x), a, b
            )
    return total


def expected_payoff_vs_source(cp: CornerPoints, jam: MixedStrategy, xi0: float) -> float:
    """Jammer-side integral of the payoff against a pure source rate."""
    total = sum(mass * regions.payoff(cp, xi0, loc) for loc, mass in jam.atoms)
    if not jam.segments:
        return total
    breaks = (cp.Delta_R, cp.delta_R, cp.Omega_R, cp.omega_R, cp.S_D - xi0, cp.S_E - xi0)
    for seg in jam.segments:
        pts = _split_points(seg.lo, seg.hi, breaks)
        for a, b in zip(pts[:-1], pts[1:]):
            total += _integrate_smooth(
                lambda y: regions.payoff(cp, xi0, y) * seg.pdf(y), a, b
            )
    return total


def pair_value(cp: CornerPoints, src: MixedStrategy, jam: MixedStrategy) -> float:
    """Bilinear expected payoff of the strategy pair."""
    total = sum(
        mass * expected_payoff_vs_jammer(cp, src, loc) for loc, mass in jam.atoms
    )
    inner_bounds = [src.support_lo, src.support_hi]
    inner_bounds += [seg.hi for seg in src.segments]
    for seg in jam.segments:
        candidates = [cp.Delta_R, cp.delta_R, cp.Omega_R, cp.omega_R]
        candidates += [cp.S_D - b for b in inner_bounds]
        candidates += [cp.S_E - b for b in inner_bounds]
        pts = _split_points(seg.lo, seg.hi, candidates)

        def outer(y_arr, seg=seg):
            inner = [expected_payoff_vs_jammer(cp, src, float(y)) for y in y_arr]
            return np.asarray(inner) * seg.pdf(y_arr)

        for a, b in zip(pts[:-1], pts[1:]):
            total += _integrate_smooth(outer, a, b)
    return total


def audit_deviations(
    cp: CornerPoints,
    src: MixedStrategy,
    jam: MixedStrategy,
    probe_count: int = 1000,
    seed: int = 0,
) -> tuple:
    """Worst-case payoff gaps against probed pure deviations.

    gap_source = pair value minus the smallest source-side integral across
    probed relay rates (positive means some relay deviation beats the
    claimed equilibrium); gap_jammer mirrors it on the other side. Probes
    cover each support densely (endpoints, region kinks, and seeded uniform
    draws).
    """
    if probe_count < 2:
        raise ValueError(f"probe_count must be >= 2, got {probe_count}")
    gen = generator(seed)
    kinks = [cp.Delta_R, cp.delta_R, cp.Omega_R, cp.omega_R]

    def probes(lo, hi, extra):
        pts = [lo, hi] + [e for e in extra if lo <= e <= hi]
        if hi > lo:
            pts += list(lo + (hi - lo) * gen.random(probe_count))
            pts += list(np.linspace(lo, hi, min(probe_count, 64)))
        return sorted(set(pts))

    value = pair_value(cp, src, jam)
    g_min = min(
        expected_payoff_vs_jammer(cp, src, e)
        for e in probes(jam.support_lo, jam.support_hi, kinks)
    )
    xi_kinks = [cp.S_D - k for k in kinks] + [cp.S_E - k for k in kinks]
    h_max = max(
        expected_payoff_vs_source(cp, jam, x)
        for x in probes(src.support_lo, src.support_hi, xi_kinks)
    )
    return value - g_min, h_max - value
