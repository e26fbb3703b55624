"""Decoherence of a qubit dephasing against a power-law bosonic bath.

Closed-form correlators (decoherence factor, phase integral, P_x, C_x),
their short/long-time asymptotics, exact treatment of a PT-symmetric
non-Hermitian bath by parameter renormalization, and independent
numerical oracles (adaptive quadrature, discrete-bath mode sums, density
matrix) that cross-check every closed form.
"""

from .analytic import (
    CorrelatorPoint,
    CorrelatorSeries,
    GridSpacing,
    SeriesSource,
    TimeGrid,
    c_x,
    evaluate_closed,
    gamma_closed,
    p_x,
    phase_integral_closed,
    phi_fn,
)
from .asymptotics import (
    CrossoverKind,
    IntegerProximity,
    OscillationLaw,
    Regime,
    RegimeReport,
    crossover_time,
    envelope_points,
    fit_power_law,
    locate_crossover,
    long_time_c,
    long_time_p,
    short_time_coeffs,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    FitError,
    GammaPoleError,
)
from .nonhermitian import (
    ModeTransform,
    RenormalizedParams,
    bogoliubov_mode,
    bogoliubov_uv,
    dp_dtau,
    dp_dtau_asymptotic,
    gamma_nh,
    hermitian_equivalent,
    p_x_nh,
    renormalize,
)
from .numerics import (
    QuadratureConfig,
    QuadratureResult,
    gamma_fn,
    integrate_semi_infinite,
    stable_log1p_sq,
)
from .oracle import (
    DiscreteBath,
    FreqSampling,
    ModeSumResult,
    c_x_finite_T,
    gamma_mode_sum,
    gamma_quadrature,
    mode_sum_series,
    p_x_density_matrix,
    phase_quadrature,
    reduced_density_matrix,
)
from .spectral import BathRegime, BathSpec, ModelSpec, classify_bath, spectral_density

__version__ = "0.1.0"

__all__ = [
    "BathRegime", "BathSpec", "ModelSpec", "classify_bath", "spectral_density",
    "QuadratureConfig", "QuadratureResult", "gamma_fn", "integrate_semi_infinite",
    "stable_log1p_sq",
    "TimeGrid", "GridSpacing", "SeriesSource", "CorrelatorPoint",
    "CorrelatorSeries", "gamma_closed", "phase_integral_closed", "phi_fn",
    "p_x", "c_x", "evaluate_closed",
    "IntegerProximity", "Regime", "OscillationLaw", "RegimeReport",
    "CrossoverKind", "short_time_coeffs", "long_time_p", "long_time_c",
    "crossover_time", "fit_power_law", "envelope_points", "locate_crossover",
    "RenormalizedParams", "ModeTransform", "renormalize",
    "hermitian_equivalent", "gamma_nh", "p_x_nh", "dp_dtau",
    "dp_dtau_asymptotic", "bogoliubov_mode", "bogoliubov_uv",
    "DiscreteBath", "FreqSampling", "ModeSumResult", "gamma_quadrature",
    "phase_quadrature", "gamma_mode_sum", "mode_sum_series", "c_x_finite_T",
    "reduced_density_matrix", "p_x_density_matrix",
    "DomainError", "GammaPoleError", "ConvergenceError", "DivergenceError",
    "FitError",
]
