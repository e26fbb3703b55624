"""Exact closed-form correlators of the pure-dephasing model at T = 0.

For the bath exponent s and dimensionless time x = B*t the decoherence
factor is

    gamma(t) = (A/2) ln(1 + x^2)                                  (s = 1)
    gamma(t) = A Gamma(s-1) [1 - (1+x^2)^((1-s)/2) cos((s-1) atan x)]
                                                                  (s != 1)

and the phase integral

    I(t) = A atan(x)                                              (s = 1)
    I(t) = A Gamma(s-1) (1+x^2)^((1-s)/2) sin((s-1) atan x)       (s != 1).

The correlators are P_x(t) = e^{-gamma} cos(eps*t), phi(t) = cos I(t),
and C_x(t) = e^{-gamma}[cos(eps t) cos I + sin(eps t) sin I sgn(eps)]
(= P_x * phi at eps = 0).

Numerical care:

* ``|s - 1| < 1e-6`` switches to a first-order expansion in (s-1) around
  the Ohmic forms; outside the band the brace is evaluated with
  expm1/sin^2 so the Gamma(s-1) pole cancellation stays benign.
* Powers of (1 + x^2) go through log1p, stable out to B*t ~ 1e12.
* At s = 1 the decay factor is (1+x^2)^(-A/2) via ``power`` and, for
  integer A, cos(A atan x) is reduced through the exact quadrant map, so
  identities such as C_x(A=1) = P_x(A=2) hold to a few ulp at all times.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .errors import DomainError
from .numerics import gamma_fn
from .spectral import BathSpec, ModelSpec

__all__ = [
    "OHMIC_SWITCH_DELTA",
    "GridSpacing",
    "TimeGrid",
    "SeriesSource",
    "CorrelatorPoint",
    "CorrelatorSeries",
    "gamma_closed",
    "phase_integral_closed",
    "phi_fn",
    "p_x",
    "c_x",
    "evaluate_closed",
]

OHMIC_SWITCH_DELTA = 1e-6

ArrayLike = Union[float, Sequence[float], np.ndarray]


class GridSpacing(enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing sample times t >= 0 with spacing metadata."""

    times: np.ndarray
    spacing: GridSpacing = GridSpacing.LINEAR

    def __post_init__(self):
        ts = np.asarray(self.times, dtype=float)
        if ts.ndim != 1 or ts.size == 0:
            raise DomainError("TimeGrid needs a non-empty 1-d list of times")
        if np.any(ts < 0):
            raise DomainError("times must be >= 0")
        if np.any(np.diff(ts) <= 0):
            raise DomainError("times must be strictly increasing")
        if self.spacing is GridSpacing.LOG and ts[0] <= 0:
            raise DomainError("log spacing requires all times > 0")
        ts = ts.copy()
        ts.flags.writeable = False
        object.__setattr__(self, "times", ts)

    @classmethod
    def linear(cls, t_min: float, t_max: float, points: int) -> "TimeGrid":
        if points < 2 or not t_min < t_max:
            raise DomainError("need t_min < t_max and points >= 2")
        return cls(np.linspace(t_min, t_max, points), GridSpacing.LINEAR)

    @classmethod
    def log(cls, t_min: float, t_max: float, points: int) -> "TimeGrid":
        if points < 2 or not 0 < t_min < t_max:
            raise DomainError("need 0 < t_min < t_max and points >= 2")
        return cls(np.geomspace(t_min, t_max, points), GridSpacing.LOG)

    def __len__(self):
        return len(self.times)


class SeriesSource(enum.Enum):
    CLOSED_FORM = "closed"
    QUADRATURE_ORACLE = "quadrature"
    DISCRETE_BATH_ORACLE = "mode-sum"


@dataclass(frozen=True)
class CorrelatorPoint:
    t: float
    gamma: float
    phase_integral: float
    phi: float
    p_x: float
    c_x: float


@dataclass(frozen=True)
class CorrelatorSeries:
    """Column-wise correlator data aligned 1:1 with a time grid."""

    model: ModelSpec
    grid: TimeGrid
    gamma: np.ndarray
    phase_integral: np.ndarray
    phi: np.ndarray
    p_x: np.ndarray
    c_x: np.ndarray
    source: SeriesSource = SeriesSource.CLOSED_FORM

    def __post_init__(self):
        n = len(self.grid)
        for name in ("gamma", "phase_integral", "phi", "p_x", "c_x"):
            col = np.asarray(getattr(self, name), dtype=float)
            if col.shape != (n,):
                raise DomainError(f"column {name} is not aligned with the grid")
            col = col.copy()
            col.flags.writeable = False
            object.__setattr__(self, name, col)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def points(self) -> tuple:
        return tuple(
            CorrelatorPoint(t, g, i, f, p, c)
            for t, g, i, f, p, c in zip(
                self.times, self.gamma, self.phase_integral,
                self.phi, self.p_x, self.c_x,
            )
        )


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _as_times(t: ArrayLike):
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    ts = np.atleast_1d(ts)
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise DomainError("time must be finite and >= 0")
    return ts, scalar


def _require_hermitian(bath: BathSpec):
    if bath.tau != 0.0:
        raise DomainError(
            "closed forms take a tau=0 bath; renormalize tau>0 baths first "
            "(spinboson.nonhermitian)"
        )


def _require_zero_temperature(model: ModelSpec):
    if model.temperature != 0.0:
        raise DomainError(
            "closed forms hold at temperature 0 only; use the quadrature "
            "oracle for finite temperature"
        )


def _gamma_phase(bath: BathSpec, ts: np.ndarray):
    s, A, B = bath.s, bath.A, bath.B
    if s == 1.0:
        return _kernels.closed_ohmic(ts, A, B)
    if abs(s - 1.0) < OHMIC_SWITCH_DELTA:
        return _kernels.closed_near_ohmic(ts, s, A, B)
    return _kernels.closed_generic(ts, s, A, B, gamma_fn(s - 1.0))


def _cos_n_arctan(n: int, x: np.ndarray) -> np.ndarray:
    """cos(n * arctan(x)) for integer n >= 0, x >= 0, without forming the
    ill-conditioned angle near n*pi/2.

    For x > 1 write n*arctan(x) = n*pi/2 - n*arctan(1/x) and reduce the
    pi/2 multiples exactly by quadrant.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= 1.0
    out[small] = np.cos(n * np.arctan(x[small]))
    xl = x[~small]
    y = n * np.arctan(1.0 / xl)
    m = n % 4
    if m == 0:
        out[~small] = np.cos(y)
    elif m == 1:
        out[~small] = np.sin(y)
    elif m == 2:
        out[~small] = -np.cos(y)
    else:
        out[~small] = -np.sin(y)
    return out


def _phi_values(bath: BathSpec, ts: np.ndarray, phase: np.ndarray) -> np.ndarray:
    if bath.s == 1.0 and bath.A == round(bath.A) and bath.A >= 0:
        return _cos_n_arctan(int(round(bath.A)), bath.B * ts)
    return np.cos(phase)


def _decay_factor(bath: BathSpec, ts: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """e^{-gamma(t)}; at s = 1 evaluated as (1+x^2)^(-A/2) via ``power``,
    which keeps identities between different A values ulp-tight."""
    if bath.s == 1.0:
        x = bath.B * ts
        return np.power(1.0 + x * x, -0.5 * bath.A)
    return np.exp(-gamma)


# --------------------------------------------------------------------------
# public closed forms
# --------------------------------------------------------------------------

def gamma_closed(bath: BathSpec, t: ArrayLike):
    """Decoherence factor gamma(t) >= 0 at temperature 0."""
    _require_hermitian(bath)
    ts, scalar = _as_times(t)
    gamma, _ = _gamma_phase(bath, ts)
    return float(gamma[0]) if scalar else gamma


def phase_integral_closed(bath: BathSpec, t: ArrayLike):
    """Phase integral I(t) = int_0^inf J(w)/(pi w^2) sin(w t) dw."""
    _require_hermitian(bath)
    ts, scalar = _as_times(t)
    _, phase = _gamma_phase(bath, ts)
    return float(phase[0]) if scalar else phase


def phi_fn(bath: BathSpec, t: ArrayLike):
    """phi(t) = cos I(t), the equilibrium/non-equilibrium ratio at eps=0."""
    _require_hermitian(bath)
    ts, scalar = _as_times(t)
    _, phase = _gamma_phase(bath, ts)
    phi = _phi_values(bath, ts, phase)
    return float(phi[0]) if scalar else phi


def p_x(model: ModelSpec, t: ArrayLike):
    """Non-equilibrium correlator P_x(t) = e^{-gamma(t)} cos(eps*t) for the
    initial spin state polarized along +x."""
    _require_hermitian(model.bath)
    _require_zero_temperature(model)
    ts, scalar = _as_times(t)
    gamma, _ = _gamma_phase(model.bath, ts)
    values = _decay_factor(model.bath, ts, gamma)
    if model.epsilon != 0.0:
        values = values * np.cos(model.epsilon * ts)
    return float(values[0]) if scalar else values


def c_x(model: ModelSpec, t: ArrayLike):
    """Equilibrium correlator C_x(t).

    At eps = 0 this is exactly P_x(t) * phi(t) (computed as that product);
    for eps != 0 the sgn(eps) cross term makes C_x even in eps, with
    sgn(0) := 0.
    """
    _require_hermitian(model.bath)
    _require_zero_temperature(model)
    ts, scalar = _as_times(t)
    gamma, phase = _gamma_phase(model.bath, ts)
    decay = _decay_factor(model.bath, ts, gamma)
    if model.epsilon == 0.0:
        values = decay * _phi_values(model.bath, ts, phase)
    else:
        eps = model.epsilon
        values = decay * (
            np.cos(eps * ts) * np.cos(phase)
            + np.sin(eps * ts) * np.sin(phase) * np.sign(eps)
        )
    return float(values[0]) if scalar else values


def evaluate_closed(model: ModelSpec, grid: TimeGrid) -> CorrelatorSeries:
    """Evaluate all closed-form correlators on a time grid."""
    _require_hermitian(model.bath)
    _require_zero_temperature(model)
    ts = grid.times
    gamma, phase = _gamma_phase(model.bath, ts)
    phi = _phi_values(model.bath, ts, phase)
    decay = _decay_factor(model.bath, ts, gamma)
    if model.epsilon == 0.0:
        px = decay
        cx = decay * phi
    else:
        eps = model.epsilon
        px = decay * np.cos(eps * ts)
        cx = decay * (
            np.cos(eps * ts) * np.cos(phase)
            + np.sin(eps * ts) * np.sin(phase) * np.sign(eps)
        )
    return CorrelatorSeries(
        model=model, grid=grid, gamma=gamma, phase_integral=phase,
        phi=phi, p_x=px, c_x=cx, source=SeriesSource.CLOSED_FORM,
    )
