"""Short- and long-time asymptotics, crossover scales, and power-law fits.

Short time (B*t << 1, eps = 0):

    P_x ~ 1 - c_P (Bt)^2,   C_x ~ 1 - c_C (Bt)^2,
    c_P = A/2,            c_C = A(1+A)/2              (s = 1)
    c_P = s A Gamma(s)/2, c_C = A Gamma(s) [A Gamma(s) + s]/2   (s != 1)

Long time (B*t >> 1):

    s = 1:  P_x ~ (Bt)^-A;  C_x ~ cos(pi A/2) (Bt)^-A for non-odd A and
            (-1)^((A-1)/2) A (Bt)^(-A-1) at odd integer A.
    s != 1: P_x ~ P0 exp(-alpha1 (Bt)^(1-s)) generically and
            P0 exp(-alpha2 (Bt)^-s) at even integer s, with
            P0 = exp(-A Gamma(s-1)), alpha1 = -A Gamma(s-1) sin(pi s/2),
            alpha2 = A Gamma(s) (-1)^(s/2) (sign recorded as-is).
            C_x picks up an oscillation cos[w (Bt)^theta] with
            w1 = A Gamma(s-1) cos(pi s/2) (generic, theta = 1-s),
            w2 = A Gamma(s)              (odd s,   theta = -s),
            w3 = A Gamma(s-1)            (even s,  theta = 1-s).

Near an integer the integer branch holds below a crossover scale

    Bt_cr = A |tan(pi A/2)|        (s = 1, near odd A)
    Bt_cr = |cot(pi s/2)| / (s-1)  (near even s)
    Bt_cr = (s-1) |tan(pi s/2)|    (near odd s, s > 1)

which diverges at the integer itself; a parameter is treated as exactly
integer when it matches the rounded value within 1e-12, and the
crossover functions then return +inf.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .analytic import CorrelatorSeries
from .errors import DomainError, FitError
from .numerics import gamma_fn
from .spectral import ModelSpec

__all__ = [
    "INTEGER_TOL",
    "IntegerProximity",
    "Regime",
    "OscillationLaw",
    "RegimeReport",
    "CrossoverKind",
    "short_time_coeffs",
    "long_time_p",
    "long_time_c",
    "crossover_time",
    "fit_power_law",
    "envelope_points",
    "locate_crossover",
]

INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class IntegerProximity:
    """How close a real parameter sits to its nearest integer."""

    value: float
    nearest_integer: int
    distance: float
    parity: str  # "even" | "odd"

    @classmethod
    def of(cls, value: float) -> "IntegerProximity":
        n = int(round(value))
        return cls(
            value=float(value),
            nearest_integer=n,
            distance=abs(value - n),
            parity="even" if n % 2 == 0 else "odd",
        )

    @property
    def is_integer(self) -> bool:
        return self.distance <= INTEGER_TOL


class Regime(enum.Enum):
    OHMIC_GENERIC = "ohmic-generic"
    OHMIC_ODD_A = "ohmic-odd-A"
    SUPER_OHMIC_GENERIC = "super-ohmic-generic"
    SUPER_OHMIC_EVEN_S = "super-ohmic-even-s"
    SUPER_OHMIC_ODD_S = "super-ohmic-odd-s"
    SUB_OHMIC = "sub-ohmic"


class OscillationLaw(enum.Enum):
    NONE = "none"
    POWER_ONE_MINUS_S = "(Bt)^(1-s)"
    POWER_MINUS_S = "(Bt)^-s"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    plateau: float           # long-time limit (0 for s <= 1)
    exponent: float          # power theta of the dominant (Bt)^theta term
    amplitude: float         # prefactor / decay rate, sign as derived
    osc_law: OscillationLaw = OscillationLaw.NONE
    osc_coefficient: float = 0.0
    crossover: Optional[float] = None


class CrossoverKind(enum.Enum):
    OHMIC_ODD_A = "ohmic-odd-A"
    EVEN_S_P = "even-s-P"
    ODD_S_PHI = "odd-s-phi"
    EVEN_S_C = "even-s-C"
    ODD_S_C = "odd-s-C"


def _require_symmetric_zero_t(model: ModelSpec):
    if model.epsilon != 0.0 or model.temperature != 0.0:
        raise DomainError("asymptotics are derived for eps = 0, T = 0")
    if model.bath.tau != 0.0:
        raise DomainError("renormalize tau > 0 baths before asymptotics")


def _is_near_ohmic(s: float) -> bool:
    # same switch band as the analytic module
    return abs(s - 1.0) < 1e-6


def short_time_coeffs(model: ModelSpec) -> Tuple[float, float]:
    """Quadratic coefficients (c_P, c_C) of 1 - P_x and 1 - C_x."""
    _require_symmetric_zero_t(model)
    s, A = model.bath.s, model.bath.A
    if _is_near_ohmic(s):
        return 0.5 * A, 0.5 * A * (1.0 + A)
    g = gamma_fn(s)
    return 0.5 * s * A * g, 0.5 * A * g * (A * g + s)


def _plateau(s: float, A: float) -> float:
    return math.exp(-A * gamma_fn(s - 1.0)) if s > 1.0 else 0.0


def _alpha1(s: float, A: float) -> float:
    return -A * gamma_fn(s - 1.0) * math.sin(0.5 * math.pi * s)


def _alpha2(s: float, A: float) -> float:
    # (-1)^(s/2) at even integer s
    sign = -1.0 if (round(s) // 2) % 2 == 1 else 1.0
    return A * gamma_fn(s) * sign


def long_time_p(model: ModelSpec) -> RegimeReport:
    """Long-time law of P_x(t)."""
    _require_symmetric_zero_t(model)
    s, A = model.bath.s, model.bath.A
    if _is_near_ohmic(s):
        return RegimeReport(
            regime=Regime.OHMIC_GENERIC, plateau=0.0,
            exponent=-A, amplitude=1.0,
        )
    if s < 1.0:
        return RegimeReport(
            regime=Regime.SUB_OHMIC, plateau=0.0,
            exponent=1.0 - s, amplitude=_alpha1(s, A),
        )
    prox = IntegerProximity.of(s)
    if prox.is_integer and prox.parity == "even":
        return RegimeReport(
            regime=Regime.SUPER_OHMIC_EVEN_S, plateau=_plateau(s, A),
            exponent=-s, amplitude=_alpha2(s, A), crossover=math.inf,
        )
    crossover = None
    if prox.parity == "even":
        crossover = crossover_time(model, CrossoverKind.EVEN_S_P)
    return RegimeReport(
        regime=Regime.SUPER_OHMIC_GENERIC, plateau=_plateau(s, A),
        exponent=1.0 - s, amplitude=_alpha1(s, A), crossover=crossover,
    )


def long_time_c(model: ModelSpec) -> RegimeReport:
    """Long-time law of C_x(t) (envelope, power, and oscillation)."""
    _require_symmetric_zero_t(model)
    s, A = model.bath.s, model.bath.A
    if _is_near_ohmic(s):
        prox_a = IntegerProximity.of(A)
        if prox_a.is_integer and prox_a.parity == "odd":
            n = prox_a.nearest_integer
            return RegimeReport(
                regime=Regime.OHMIC_ODD_A, plateau=0.0,
                exponent=-A - 1.0,
                amplitude=(-1.0) ** ((n - 1) // 2) * A,
                crossover=math.inf,
            )
        crossover = None
        if prox_a.parity == "odd" and A > 0:
            crossover = crossover_time(model, CrossoverKind.OHMIC_ODD_A)
        return RegimeReport(
            regime=Regime.OHMIC_GENERIC, plateau=0.0,
            exponent=-A, amplitude=math.cos(0.5 * math.pi * A),
            crossover=crossover,
        )
    prox = IntegerProximity.of(s)
    if s > 1.0 and prox.is_integer:
        if prox.parity == "odd":
            return RegimeReport(
                regime=Regime.SUPER_OHMIC_ODD_S, plateau=_plateau(s, A),
                exponent=1.0 - s, amplitude=_alpha1(s, A),
                osc_law=OscillationLaw.POWER_MINUS_S,
                osc_coefficient=A * gamma_fn(s),
                crossover=math.inf,
            )
        return RegimeReport(
            regime=Regime.SUPER_OHMIC_EVEN_S, plateau=_plateau(s, A),
            exponent=-s, amplitude=_alpha2(s, A),
            osc_law=OscillationLaw.POWER_ONE_MINUS_S,
            osc_coefficient=A * gamma_fn(s - 1.0),
            crossover=math.inf,
        )
    crossover = None
    if s > 1.0:
        kind = (
            CrossoverKind.EVEN_S_C if prox.parity == "even"
            else CrossoverKind.ODD_S_C
        )
        crossover = crossover_time(model, kind)
    regime = Regime.SUB_OHMIC if s < 1.0 else Regime.SUPER_OHMIC_GENERIC
    return RegimeReport(
        regime=regime, plateau=_plateau(s, A),
        exponent=1.0 - s, amplitude=_alpha1(s, A),
        osc_law=OscillationLaw.POWER_ONE_MINUS_S,
        osc_coefficient=A * gamma_fn(s - 1.0) * math.cos(0.5 * math.pi * s),
        crossover=crossover,
    )


def crossover_time(model: ModelSpec, which: CrossoverKind) -> float:
    """Crossover scale Bt_cr for the selected formula family.

    Returns +inf when the parameter sits exactly (within 1e-12) at the
    family's integer.
    """
    s, A = model.bath.s, model.bath.A
    if which is CrossoverKind.OHMIC_ODD_A:
        prox = IntegerProximity.of(A)
        if prox.is_integer and prox.parity == "odd":
            return math.inf
        return A * abs(math.tan(0.5 * math.pi * A))
    prox = IntegerProximity.of(s)
    if which in (CrossoverKind.EVEN_S_P, CrossoverKind.EVEN_S_C):
        if prox.is_integer and prox.parity == "even":
            return math.inf
        return abs(1.0 / math.tan(0.5 * math.pi * s)) / (s - 1.0)
    if which in (CrossoverKind.ODD_S_PHI, CrossoverKind.ODD_S_C):
        if prox.is_integer and prox.parity == "odd":
            return math.inf
        return (s - 1.0) * abs(math.tan(0.5 * math.pi * s))
    raise DomainError(f"unknown crossover kind {which!r}")


# --------------------------------------------------------------------------
# fitting utilities
# --------------------------------------------------------------------------

def fit_power_law(
    series: CorrelatorSeries,
    window: Tuple[float, float],
    subtract_plateau: bool = False,
    field: str = "p_x",
    plateau: Optional[float] = None,
) -> Tuple[float, float, float]:
    """Least-squares fit of ln|y - plateau| against ln(Bt).

    Returns ``(exponent, amplitude, r_squared)`` where ``amplitude`` is the
    prefactor of (Bt)^exponent, signed by the sign of (y - plateau) when
    that sign is uniform over the window.

    Raises :class:`FitError` for fewer than 8 window points or when some
    |y - plateau| vanishes (an oscillation crossing zero: extract the
    envelope first).
    """
    if field not in ("p_x", "c_x", "gamma"):
        raise DomainError(f"unknown field {field!r}")
    y = getattr(series, field)
    t = series.times
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if mask.sum() < 8:
        raise FitError("fit window must contain at least 8 grid points")
    t, y = t[mask], y[mask]

    if subtract_plateau:
        if plateau is None:
            bath = series.model.bath
            plateau = (
                math.exp(-bath.A * gamma_fn(bath.s - 1.0))
                if bath.s > 1.0 else 0.0
            )
        y = y - plateau
    resid = np.abs(y)
    if np.any(resid <= 0.0):
        raise FitError(
            "non-positive |y - plateau| in the window; fit the envelope "
            "of the oscillation instead"
        )
    lx = np.log(series.model.bath.B * t)
    ly = np.log(resid)
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    amplitude = math.exp(intercept)
    signs = np.sign(y)
    if np.all(signs == signs[0]) and signs[0] < 0:
        amplitude = -amplitude
    return float(slope), float(amplitude), float(r2)


def envelope_points(times: np.ndarray, values: np.ndarray):
    """Local maxima of |values|: the oscillation envelope samples."""
    v = np.abs(np.asarray(values, dtype=float))
    t = np.asarray(times, dtype=float)
    if v.shape != t.shape or v.ndim != 1:
        raise DomainError("times and values must be matching 1-d arrays")
    inner = (v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])
    idx = np.flatnonzero(inner) + 1
    return t[idx], v[idx]


def locate_crossover(times: np.ndarray, values: np.ndarray) -> float:
    """Heuristic slope-change locator on ln|values| vs ln(times).

    Returns the time of steepest local log-log slope, which for a decay
    cos-modulated by a fading subleading term sits at the crossover scale
    (validated against Bt_cr = A|tan(pi A/2)| at s = 1, A = 0.8 to within
    a factor of 2).
    """
    t = np.asarray(times, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if t.ndim != 1 or t.shape != v.shape or len(t) < 5:
        raise DomainError("need matching 1-d arrays with >= 5 points")
    if np.any(v <= 0):
        raise FitError("values must be nonzero for the log-log slope")
    lt, lv = np.log(t), np.log(v)
    slope = (lv[2:] - lv[:-2]) / (lt[2:] - lt[:-2])
    return float(t[1:-1][np.argmin(slope)])
