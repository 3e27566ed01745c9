"""Physical-layer parameters and received SNRs.

All powers are linear scale, all rates downstream are bits per channel use
(log base 2). Both receivers share the same noise variance N_0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConfigError

_GAIN_FIELDS = ("h_SD", "h_RD", "h_SE", "h_RE")


@dataclass(frozen=True)
class NetworkConfig:
    """Channel gains and power budget of the four-node network.

    Gains are complex and may be zero (absent link); P_S, P_R are the average
    transmit powers of the source and the relay, N_0 the common receiver
    noise variance.
    """

    h_SD: complex
    h_RD: complex
    h_SE: complex
    h_RE: complex
    P_S: float
    P_R: float
    N_0: float

    def __post_init__(self):
        for name in _GAIN_FIELDS:
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ConfigError(f"gain {name} must be finite, got {z!r}")
            object.__setattr__(self, name, z)
        for name in ("P_S", "P_R", "N_0"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise ConfigError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)

    def replace_gain(self, name: str, value: complex) -> "NetworkConfig":
        if name not in _GAIN_FIELDS:
            raise ConfigError(f"unknown gain field {name!r}")
        kwargs = {f: getattr(self, f) for f in _GAIN_FIELDS}
        kwargs[name] = value
        return NetworkConfig(P_S=self.P_S, P_R=self.P_R, N_0=self.N_0, **kwargs)


@dataclass(frozen=True)
class SnrSet:
    """Received SNRs gamma_kl = |h_kl|^2 P_k / N_0, one per directed link."""

    gamma_SD: float
    gamma_RD: float
    gamma_SE: float
    gamma_RE: float

    def __post_init__(self):
        for name in ("gamma_SD", "gamma_RD", "gamma_SE", "gamma_RE"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise ConfigError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)


def compute_snrs(cfg: NetworkConfig) -> SnrSet:
    """Map a NetworkConfig to its four received SNRs.

    Depends on the gains only through their magnitudes, so any phase
    rotation of a gain leaves the result unchanged.
    """
    return SnrSet(
        gamma_SD=abs(cfg.h_SD) ** 2 * cfg.P_S / cfg.N_0,
        gamma_RD=abs(cfg.h_RD) ** 2 * cfg.P_R / cfg.N_0,
        gamma_SE=abs(cfg.h_SE) ** 2 * cfg.P_S / cfg.N_0,
        gamma_RE=abs(cfg.h_RE) ** 2 * cfg.P_R / cfg.N_0,
    )


def gain_from_polar(magnitude: float, phase_rad: float) -> complex:
    """Build a complex gain from magnitude and phase in radians."""
    return cmath.rect(magnitude, phase_rad)
