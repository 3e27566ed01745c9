"""Correlated-jamming policies when the relay knows the source signal.

The relay transmits rho*X_S + Z under the power budget |rho|^2 P_S + N_Z <=
P_R. Z is either Gaussian noise (hurts both receivers) or a structured dummy
codeword that the eavesdropper can decode and cancel whenever its rate bound
is positive. The relay minimizes the resulting wiretap secrecy rate; the
surface is non-convex, so beyond the closed-form special cases the optimum
is located by exhaustive grid search over (|rho|, angle, N_Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import NetworkConfig
from .errors import ConfigError, ResolutionError

GAUSSIAN_NOISE = "gaussian-noise"
STRUCTURED_CODEWORD = "structured-codeword"
_Z_KINDS = (GAUSSIAN_NOISE, STRUCTURED_CODEWORD)

#: |h_SD + h_RD*rho|^2 below this is treated as exact cancellation (the
#: receiver's effective noise is infinite and its rate zero).
CANCEL_EPS = 1e-15

_POWER_SLACK = 1e-9


@dataclass(frozen=True)
class JammerPolicy:
    """Correlated-jamming parameters: X_R = rho*X_S + Z, Z ~ CN(0, N_Z)."""

    rho: complex
    N_Z: float
    z_kind: str = GAUSSIAN_NOISE

    def __post_init__(self):
        if self.z_kind not in _Z_KINDS:
            raise ConfigError(f"z_kind must be one of {_Z_KINDS}, got {self.z_kind!r}")
        if self.N_Z < 0.0:
            raise ConfigError(f"N_Z must be >= 0, got {self.N_Z!r}")
        object.__setattr__(self, "rho", complex(self.rho))
        object.__setattr__(self, "N_Z", float(self.N_Z))

    def power_used(self, cfg: NetworkConfig) -> float:
        return abs(self.rho) ** 2 * cfg.P_S + self.N_Z

    def check_power(self, cfg: NetworkConfig) -> None:
        used = self.power_used(cfg)
        if used > cfg.P_R + _POWER_SLACK:
            raise ConfigError(f"policy power {used!r} exceeds budget P_R={cfg.P_R!r}")


@dataclass(frozen=True)
class InformedOutcome:
    """Minimized secrecy rate with the policy and effective noises behind it."""

    value: float
    policy: JammerPolicy
    N_D_eff: float
    N_E_eff: float
    R_Z_max: float | None = None  # structured variant only
    special_case: str = "none"  # silent | cancel | noise-only | none


def _noise_over_gain(noise_power: float, gain_sq: float) -> float:
    return noise_power / gain_sq if gain_sq > CANCEL_EPS else math.inf


def effective_noises(cfg: NetworkConfig, pol: JammerPolicy) -> tuple:
    """Effective noise variances (destination, eavesdropper) under the policy.

    Destination: (|h_RD|^2 N_Z + N_0) / |h_SD + h_RD rho|^2 for either Z
    variant. Eavesdropper: same form with E subscripts for Gaussian Z, but
    only N_0 / |h_SE + h_RE rho|^2 for a structured codeword it has
    cancelled. Exact cancellation of a combined gain maps to infinity.
    """
    pol.check_power(cfg)
    n_d = _noise_over_gain(
        abs(cfg.h_RD) ** 2 * pol.N_Z + cfg.N_0, abs(cfg.h_SD + cfg.h_RD * pol.rho) ** 2
    )
    gain_e = abs(cfg.h_SE + cfg.h_RE * pol.rho) ** 2
    if pol.z_kind == STRUCTURED_CODEWORD:
        n_e = _noise_over_gain(cfg.N_0, gain_e)
    else:
        n_e = _noise_over_gain(abs(cfg.h_RE) ** 2 * pol.N_Z + cfg.N_0, gain_e)
    return n_d, n_e


def _rate(P: float, n_eff: float) -> float:
    return 0.0 if math.isinf(n_eff) else math.log2(1.0 + P / n_eff)


def secrecy_rate(cfg: NetworkConfig, pol: JammerPolicy) -> float:
    """Wiretap secrecy rate [dest rate - eaves rate]^+ under the policy."""
    n_d, n_e = effective_noises(cfg, pol)
    return max(0.0, _rate(cfg.P_S, n_d) - _rate(cfg.P_S, n_e))


def rz_max(cfg: NetworkConfig, pol: JammerPolicy) -> float:
    """Largest dummy-codeword rate the eavesdropper can still decode.

    log2(|h_RE|^2 N_Z / (N_0 + |h_SE + h_RE rho|^2 P_S)); a value <= 0
    (including -inf at N_Z = 0) means no positive-rate codeword is
    decodable and the structured variant degrades to noise.
    """
    if pol.z_kind != STRUCTURED_CODEWORD:
        raise ConfigError("rz_max applies to the structured-codeword variant")
    received = abs(cfg.h_RE) ** 2 * pol.N_Z
    floor = cfg.N_0 + abs(cfg.h_SE + cfg.h_RE * pol.rho) ** 2 * cfg.P_S
    if received <= 0.0:
        return -math.inf
    return math.log2(received / floor)


def rz_feasible(cfg: NetworkConfig, pol: JammerPolicy) -> bool:
    return rz_max(cfg, pol) > 0.0


def _outcome(cfg: NetworkConfig, pol: JammerPolicy, special: str) -> InformedOutcome:
    n_d, n_e = effective_noises(cfg, pol)
    if pol.z_kind == STRUCTURED_CODEWORD:
        bound = rz_max(cfg, pol)
        if bound <= 0.0 and pol.N_Z > 0.0:
            # Undecodable dummy signal: the eavesdropper treats Z as noise.
            n_e = _noise_over_gain(
                abs(cfg.h_RE) ** 2 * pol.N_Z + cfg.N_0,
                abs(cfg.h_SE + cfg.h_RE * pol.rho) ** 2,
            )
    else:
        bound = None
    value = max(0.0, _rate(cfg.P_S, n_d) - _rate(cfg.P_S, n_e))
    value = 0.0 if value < 1e-9 else value
    return InformedOutcome(
        value=value,
        policy=pol,
        N_D_eff=n_d,
        N_E_eff=n_e,
        R_Z_max=bound,
        special_case=special,
    )


def check_special_cases(cfg: NetworkConfig, z_kind: str) -> InformedOutcome | None:
    """Closed-form zero-rate optima, when one of the three conditions holds.

    1. |h_SE| >= |h_SD|: staying silent already gives zero secrecy rate.
    2. |h_RD| >= sqrt(P_S/P_R) |h_SD|: rho = -h_SD/h_RD cancels the source
       at the destination within the power budget.
    3. Noise alone suffices: the variant-specific N_Z* that equalizes the
       two effective noises fits in the budget.
    """
    a_sd, a_se = abs(cfg.h_SD), abs(cfg.h_SE)
    a_rd, a_re = abs(cfg.h_RD), abs(cfg.h_RE)
    if a_se >= a_sd:
        return _outcome(cfg, JammerPolicy(0.0, 0.0, z_kind), "silent")
    if a_rd >= math.sqrt(cfg.P_S / cfg.P_R) * a_sd:
        return _outcome(cfg, JammerPolicy(-cfg.h_SD / cfg.h_RD, 0.0, z_kind), "cancel")
    if z_kind == GAUSSIAN_NOISE:
        den = (a_rd * a_se) ** 2 - (a_sd * a_re) ** 2
        if den > 0.0:
            n_star = cfg.N_0 * (a_sd**2 - a_se**2) / den
            if n_star < cfg.P_R:
                return _outcome(cfg, JammerPolicy(0.0, n_star, z_kind), "noise-only")
    else:
        den = (a_se * a_rd) ** 2
        if den > 0.0:
            n_star = cfg.N_0 * (a_sd**2 - a_se**2) / den
            pol = JammerPolicy(0.0, n_star, z_kind)
            # The closed form presumes the eavesdropper decodes and cancels
            # the dummy codeword; when the rate bound is infeasible the
            # codeword degrades to noise and the shortcut does not apply.
            if n_star <= cfg.P_R and rz_max(cfg, pol) > 0.0:
                return _outcome(cfg, pol, "noise-only")
    return None


def _axis_counts(resolution) -> tuple:
    if isinstance(resolution, int):
        counts = (resolution, resolution, resolution)
    else:
        counts = tuple(int(n) for n in resolution)
        if len(counts) != 3:
            raise ResolutionError("resolution must be an int or (rho, theta, w) counts")
    if min(counts) < 3:
        raise ResolutionError(f"need >= 3 points per axis, got {counts}")
    return counts


def grid_minimize(
    cfg: NetworkConfig,
    z_kind: str,
    resolution=201,
    restrict: str | None = None,
) -> InformedOutcome:
    """Exhaustive search for the minimizing policy on the feasible grid.

    Parameterization: rho = |rho| e^{j theta}, N_Z = w P_S with |rho| <=
    sqrt(P_R/P_S), theta in [0, 2pi) (endpoint excluded), 0 <= w <=
    P_R/P_S - |rho|^2, so the power constraint holds on every grid point
    without necessarily binding. `restrict` limits the policy family:
    "xr-z" pins rho = 0 (X_R = Z), "xr-rho-xs" pins N_Z = 0
    (X_R = rho X_S); both are subsets of the full grid at equal resolution.
    Ties break toward smallest |rho|, then theta, then w.
    """
    if z_kind not in _Z_KINDS:
        raise ConfigError(f"z_kind must be one of {_Z_KINDS}, got {z_kind!r}")
    n_rho, n_theta, n_w = _axis_counts(resolution)
    ratio = cfg.P_R / cfg.P_S

    rho_mags = np.linspace(0.0, math.sqrt(ratio), n_rho)
    thetas = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    if restrict == "xr-z":
        rho_mags = rho_mags[:1]
        thetas = thetas[:1]
    elif restrict == "xr-rho-xs":
        pass  # handled through the w axis below
    elif restrict is not None:
        raise ConfigError(f"unknown restriction {restrict!r}")

    h_sd, h_rd = cfg.h_SD, cfg.h_RD
    h_se, h_re = cfg.h_SE, cfg.h_RE
    a_rd2, a_re2 = abs(h_rd) ** 2, abs(h_re) ** 2
    structured = z_kind == STRUCTURED_CODEWORD

    best = (math.inf, 0.0, 0.0, 0.0)  # value, |rho|, theta, N_Z
    for i, r in enumerate(rho_mags):
        rho = r * np.exp(1j * thetas)
        den_d = np.abs(h_sd + h_rd * rho) ** 2
        den_e = np.abs(h_se + h_re * rho) ** 2
        w_hi = max(ratio - r * r, 0.0)
        if restrict == "xr-rho-xs":
            n_z = np.array([0.0])
        else:
            n_z = np.linspace(0.0, w_hi, n_w) * cfg.P_S
        with np.errstate(divide="ignore"):
            num_d = a_rd2 * n_z[None, :] + cfg.N_0
            nd = np.where(den_d[:, None] > CANCEL_EPS, num_d / den_d[:, None], np.inf)
            num_e_noise = a_re2 * n_z[None, :] + cfg.N_0
            ne_noise = np.where(
                den_e[:, None] > CANCEL_EPS, num_e_noise / den_e[:, None], np.inf
            )
            if structured:
                ne_clean = np.where(
                    den_e[:, None] > CANCEL_EPS, cfg.N_0 / den_e[:, None], np.inf
                )
                decodable = a_re2 * n_z[None, :] > cfg.N_0 + den_e[:, None] * cfg.P_S
                ne = np.where(decodable, ne_clean, ne_noise)
            else:
                ne = ne_noise
        rate_d = np.log2(1.0 + cfg.P_S / nd)
        rate_e = np.log2(1.0 + cfg.P_S / ne)
        values = np.maximum(rate_d - rate_e, 0.0)
        flat = int(np.argmin(values))
        v = float(values.flat[flat])
        if v < best[0]:
            j, k = divmod(flat, values.shape[1])
            best = (v, float(r), float(thetas[j]), float(n_z[k]))

    _, r_star, theta_star, nz_star = best
    pol = JammerPolicy(r_star * np.exp(1j * theta_star), nz_star, z_kind)
    return _outcome(cfg, pol, "none")


def solve_informed(cfg: NetworkConfig, z_kind: str, resolution=201) -> InformedOutcome:
    """Special-case shortcut when available, otherwise the grid search."""
    shortcut = check_special_cases(cfg, z_kind)
    if shortcut is not None:
        return shortcut
    return grid_minimize(cfg, z_kind, resolution)
