"""Bath and model parameter records and the bath spectral function.

The bath is a continuum of bosonic modes with the power-law spectral
function

    J(omega) = pi * A * B**(1-s) * omega**s * exp(-omega/B),   s > 0,

where ``A`` is the dimensionless dissipative strength and ``B`` the
high-frequency cutoff.  Units are hbar = k_B = 1 throughout; ``B`` carries
the only energy scale, so times are naturally quoted as the dimensionless
product B*t.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "BathRegime",
    "BathSpec",
    "ModelSpec",
    "spectral_density",
    "classify_bath",
]


class BathRegime(enum.Enum):
    SUB_OHMIC = "sub-ohmic"
    OHMIC = "ohmic"
    SUPER_OHMIC = "super-ohmic"


@dataclass(frozen=True)
class BathSpec:
    """Bath parameters: exponent ``s``, strength ``A``, cutoff ``B``,
    non-Hermiticity ``tau``.

    All parameters are validated on construction.  ``tau = 0`` is the
    ordinary Hermitian bath; ``tau > 0`` adds the PT-symmetric
    anti-Hermitian bath term, which is handled exactly by parameter
    renormalization (see :mod:`spinboson.nonhermitian`).
    """

    s: float
    A: float
    B: float
    tau: float = 0.0

    def __post_init__(self):
        for name in ("s", "A", "B", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.s <= 0:
            raise DomainError(f"bath exponent s must be > 0, got {self.s!r}")
        if self.B <= 0:
            raise DomainError(f"cutoff B must be > 0, got {self.B!r}")
        if self.A < 0:
            raise DomainError(f"coupling A must be >= 0, got {self.A!r}")
        if self.tau < 0:
            raise DomainError(f"non-Hermiticity tau must be >= 0, got {self.tau!r}")


@dataclass(frozen=True)
class ModelSpec:
    """Qubit-plus-bath model: bath parameters, bias ``epsilon`` and
    ``temperature`` (same units as ``B``).

    Closed-form evaluation requires ``temperature = 0``; finite temperature
    is supported only by the quadrature oracles.
    """

    bath: BathSpec
    epsilon: float = 0.0
    temperature: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.epsilon):
            raise DomainError(f"epsilon must be finite, got {self.epsilon!r}")
        if not (math.isfinite(self.temperature) and self.temperature >= 0):
            raise DomainError(
                f"temperature must be finite and >= 0, got {self.temperature!r}"
            )
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "temperature", float(self.temperature))


def spectral_density(bath: BathSpec, omega):
    """Bare (tau = 0) spectral function J(omega) at frequency ``omega >= 0``.

    Accepts a scalar or an array; negative frequencies raise
    :class:`DomainError`.  J(0) = 0 for every s > 0 and J scales linearly
    in ``A``.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("spectral_density requires omega >= 0")
    j = bath.A * (
        math.pi * bath.B ** (1.0 - bath.s) * w ** bath.s * np.exp(-w / bath.B)
    )
    return float(j) if np.isscalar(omega) or w.ndim == 0 else j


def classify_bath(bath: BathSpec) -> BathRegime:
    """Classify by the stored exponent: s < 1 sub-Ohmic, s = 1 Ohmic
    (exact comparison), s > 1 super-Ohmic."""
    if bath.s < 1.0:
        return BathRegime.SUB_OHMIC
    if bath.s == 1.0:
        return BathRegime.OHMIC
    return BathRegime.SUPER_OHMIC
