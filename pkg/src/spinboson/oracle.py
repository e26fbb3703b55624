"""Independent numerical ground truth for the closed forms.

Three routes, none of which shares code with the closed-form module:

* direct quadrature of the defining integrals (finite temperature via the
  coth kernel; validated for B*t <= 1e3, beyond which oscillation
  resolution is declared out of range and closed forms take over);
* a discrete bath of K modes whose per-mode sums reproduce the integrals
  (Appendix-style mode sums), valid below the finite-size recurrence
  window;
* the 2x2 reduced density matrix built from the quadrature decoherence
  factor, whose sigma_x trace re-derives P_x through the matrix structure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import _kernels
from .errors import DivergenceError, DomainError
from .numerics import QuadratureConfig, integrate_semi_infinite
from .spectral import BathSpec, ModelSpec, spectral_density

__all__ = [
    "FreqSampling",
    "DiscreteBath",
    "ModeSumResult",
    "gamma_quadrature",
    "phase_quadrature",
    "gamma_mode_sum",
    "mode_sum_series",
    "c_x_finite_T",
    "reduced_density_matrix",
    "p_x_density_matrix",
]

# default mode-sampling range, in units of the cutoff B.  The infrared
# edge must sit deep enough that the omitted tail of the phase sum,
# ~ A * t * w_min^s / s, stays below the mode-sum tolerance for the
# smallest supported s (0.3) out to B*t = 100.
_OMEGA_MIN_FACTOR = 1e-12
_OMEGA_MAX_FACTOR = 50.0
_WINDOW_WEIGHT_CUT = 1e-12


def _check_hermitian(bath: BathSpec):
    if bath.tau != 0.0:
        raise DomainError(
            "oracles integrate the Hermitian spectral function; pass the "
            "renormalized tau=0 bath"
        )


def _thermal_beta(model: ModelSpec) -> float:
    """beta for the coth kernel; inf encodes T = 0 (coth -> 1)."""
    if model.temperature == 0.0:
        return math.inf
    if model.bath.s <= 1.0:
        raise DivergenceError(
            "finite-temperature decoherence integral is infrared-divergent "
            "for s <= 1; only s > 1 is supported at T > 0"
        )
    return 1.0 / model.temperature


def gamma_quadrature(
    model: ModelSpec, t: float, cfg: Optional[QuadratureConfig] = None
) -> float:
    """gamma(t) = int J(w)/(pi w^2) (1 - cos wt) coth(beta w / 2) dw."""
    _check_hermitian(model.bath)
    if t < 0:
        raise DomainError("time must be >= 0")
    if t == 0.0:
        return 0.0
    beta = _thermal_beta(model)
    bath = model.bath

    def integrand(w):
        return _kernels.bath_gamma_integrand(w, bath.s, bath.A, bath.B, t, beta)

    value, _ = integrate_semi_infinite(
        integrand, cfg, scale=bath.B, half_period=math.pi / t
    )
    return value


def phase_quadrature(
    bath: BathSpec, t: float, cfg: Optional[QuadratureConfig] = None
) -> float:
    """I(t) = int J(w)/(pi w^2) sin(wt) dw (temperature independent)."""
    _check_hermitian(bath)
    if t < 0:
        raise DomainError("time must be >= 0")
    if t == 0.0:
        return 0.0

    def integrand(w):
        return _kernels.bath_phase_integrand(w, bath.s, bath.A, bath.B, t)

    value, _ = integrate_semi_infinite(
        integrand, cfg, scale=bath.B, half_period=math.pi / t
    )
    return value


# --------------------------------------------------------------------------
# discrete bath
# --------------------------------------------------------------------------

class FreqSampling(enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class DiscreteBath:
    """K bath modes (omega_k, lambda_k) binned from a spectral function.

    lambda_k^2 = J(omega_k) * w_k / pi with w_k the local bin width, so
    sums over modes approximate (1/pi) * int J(...) d omega.  LINEAR
    sampling places modes at exact multiples of the spacing (finite-size
    revivals then recur exactly at t = 2 pi / spacing); LOG sampling
    (default) resolves the infrared, which sub-Ohmic baths need.
    """

    omegas: np.ndarray
    lambdas: np.ndarray
    widths: np.ndarray
    sampling: FreqSampling
    omega_range: Tuple[float, float]

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        lam = np.asarray(self.lambdas, dtype=float)
        wid = np.asarray(self.widths, dtype=float)
        if not (om.shape == lam.shape == wid.shape) or om.ndim != 1:
            raise DomainError("omegas, lambdas, widths must be matching 1-d")
        if np.any(om <= 0):
            raise DomainError("mode frequencies must be > 0")
        for name, arr in (("omegas", om), ("lambdas", lam), ("widths", wid)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def count(self) -> int:
        return len(self.omegas)

    @classmethod
    def from_bath(
        cls,
        bath: BathSpec,
        count: int = 10_000,
        sampling: FreqSampling = FreqSampling.LOG,
        omega_min: Optional[float] = None,
        omega_max: Optional[float] = None,
    ) -> "DiscreteBath":
        _check_hermitian(bath)
        if count < 2:
            raise DomainError("need at least 2 modes")
        w_max = omega_max if omega_max is not None else _OMEGA_MAX_FACTOR * bath.B
        if sampling is FreqSampling.LINEAR:
            # modes at k * dw: exact recurrence at t = 2 pi / dw
            dw = w_max / count
            om = dw * np.arange(1, count + 1)
            widths = np.full(count, dw)
        else:
            w_min = omega_min if omega_min is not None else _OMEGA_MIN_FACTOR * bath.B
            if not 0 < w_min < w_max:
                raise DomainError("need 0 < omega_min < omega_max")
            edges = np.geomspace(w_min, w_max, count + 1)
            om = np.sqrt(edges[:-1] * edges[1:])
            widths = np.diff(edges)
        lam = np.sqrt(spectral_density(bath, om) * widths / math.pi)
        rng = (float(om[0]), float(w_max))
        return cls(om, lam, widths, sampling, rng)

    def recurrence_window(self) -> float:
        """Largest time before finite mode spacing distorts the sums.

        2 pi over the widest bin that still carries non-negligible
        spectral weight (weight cut 1e-12 of the peak of lambda^2/omega^2).
        """
        w2 = (self.lambdas / self.omegas) ** 2
        significant = w2 >= _WINDOW_WEIGHT_CUT * w2.max()
        return 2.0 * math.pi / float(self.widths[significant].max())


class ModeSumResult(NamedTuple):
    gamma: float
    phase: float
    beyond_window: bool


def gamma_mode_sum(
    db: DiscreteBath, t: float, temperature: float = 0.0
) -> ModeSumResult:
    """Finite-K sums

        gamma = sum_k (lambda_k/omega_k)^2 (1 - cos omega_k t) coth(beta omega_k/2)
        phase = sum_k (lambda_k/omega_k)^2 sin(omega_k t)

    ``beyond_window`` flags times past the recurrence window, where
    finite-size revivals are expected.
    """
    if t < 0:
        raise DomainError("time must be >= 0")
    if temperature < 0:
        raise DomainError("temperature must be >= 0")
    w2 = (db.lambdas / db.omegas) ** 2
    if temperature == 0.0:
        coth = np.ones_like(db.omegas)
    else:
        coth = 1.0 / np.tanh(0.5 * db.omegas / temperature)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    g, p = _kernels.mode_sums(db.omegas, w2, coth, ts)
    return ModeSumResult(
        gamma=float(g[0]), phase=float(p[0]),
        beyond_window=bool(t > db.recurrence_window()),
    )


def mode_sum_series(
    db: DiscreteBath, ts: np.ndarray, temperature: float = 0.0
):
    """Vectorized mode sums over a time grid: (gamma[], phase[])."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise DomainError("times must be >= 0")
    w2 = (db.lambdas / db.omegas) ** 2
    if temperature == 0.0:
        coth = np.ones_like(db.omegas)
    else:
        coth = 1.0 / np.tanh(0.5 * db.omegas / temperature)
    return _kernels.mode_sums(db.omegas, w2, coth, ts)


# --------------------------------------------------------------------------
# finite temperature and density matrix
# --------------------------------------------------------------------------

def c_x_finite_T(
    model: ModelSpec, t: float, cfg: Optional[QuadratureConfig] = None
) -> float:
    """C_x(t) with the thermal kernel:

        e^{-gamma_T(t)} [cos(eps t) cos I(t)
                         + sin(eps t) tanh(eps/(2T)) sin I(t)]

    where gamma_T uses coth(beta w/2) and I(t) is T-independent.  At T = 0
    the tanh factor is sgn(eps) (with sgn(0) := 0).  Raises
    :class:`DivergenceError` for T > 0 with s <= 1.
    """
    if t < 0:
        raise DomainError("time must be >= 0")
    g = gamma_quadrature(model, t, cfg)
    phase = phase_quadrature(model.bath, t, cfg)
    eps = model.epsilon
    if model.temperature > 0.0:
        pop = math.tanh(eps / (2.0 * model.temperature))
    else:
        pop = float(np.sign(eps))
    return math.exp(-g) * (
        math.cos(eps * t) * math.cos(phase)
        + math.sin(eps * t) * pop * math.sin(phase)
    )


_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def reduced_density_matrix(model: ModelSpec, t: float) -> np.ndarray:
    """2x2 reduced density matrix at time ``t`` for the +x initial spin
    state (rho_01 = rho_10 = 1/2): off-diagonals damped by e^{-gamma} and
    rotated by the bias phase."""
    g = gamma_quadrature(model, t)
    off = 0.5 * math.exp(-g) * np.exp(-1j * model.epsilon * t)
    return np.array([[0.5, off], [np.conj(off), 0.5]], dtype=complex)


def p_x_density_matrix(model: ModelSpec, t: float) -> float:
    """P_x(t) = Tr[rho_S(t) sigma_x], an independent path through the
    density-matrix structure (equals e^{-gamma} cos(eps t))."""
    rho = reduced_density_matrix(model, t)
    return float(np.trace(rho @ _SIGMA_X).real)
