"""Exact reduction of the PT-symmetric non-Hermitian bath (tau > 0).

The anti-Hermitian bath term ``2 i tau w_k p_k x_k`` is removed by a
similarity transformation that leaves the system and coupling terms
intact; per mode the resulting quadratic Hamiltonian

    H_k / w_k = (1 + 2 tau^2) a^+ a + tau^2 (a^2 + a^+2) + const

is diagonalized by a Bogoliubov rotation a = v b + u b^+ with
v = cosh(theta), u = sinh(theta), theta = -(1/4) ln(1 + 4 tau^2)
(derived from v^2 - u^2 = 1 and the vanishing of the b^2 coefficient).
The net effect is a pure parameter map:

    w_k -> sqrt(1 + 4 tau^2) w_k,   lambda_k -> (1 + 4 tau^2)^(-1/4) lambda_k
    A   -> A_tilde = (1 + 4 tau^2)^(-3/2) A
    B   -> B_tilde = (1 + 4 tau^2)^(+1/2) B

so every tau > 0 correlator equals its Hermitian counterpart at
(A_tilde, B_tilde).  ``bogoliubov_mode`` re-derives the per-mode map by
numerically diagonalizing the 2x2 dynamical matrix, as an independent
guard on the algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import analytic
from .errors import DomainError
from .spectral import BathSpec, ModelSpec

__all__ = [
    "RenormalizedParams",
    "ModeTransform",
    "renormalize",
    "hermitian_equivalent",
    "gamma_nh",
    "p_x_nh",
    "dp_dtau",
    "dp_dtau_asymptotic",
    "bogoliubov_mode",
    "bogoliubov_uv",
]


@dataclass(frozen=True)
class RenormalizedParams:
    A_tilde: float
    B_tilde: float
    factor: float  # 1 + 4 tau^2


def renormalize(bath: BathSpec) -> RenormalizedParams:
    """Map (A, B, tau) to the equivalent Hermitian (A_tilde, B_tilde).

    tau = 0 returns (A, B) identically; for tau > 0, A_tilde < A and
    B_tilde > B, and A_tilde * B_tilde**3 = A * B**3 up to rounding
    (the (1+4 tau^2) powers cancel algebraically).
    """
    if bath.tau == 0.0:
        return RenormalizedParams(bath.A, bath.B, 1.0)
    c = 1.0 + 4.0 * bath.tau * bath.tau
    half = math.sqrt(c)
    return RenormalizedParams(bath.A / (c * half), bath.B * half, c)


def hermitian_equivalent(bath: BathSpec) -> BathSpec:
    """The tau = 0 bath whose correlators equal those of ``bath``."""
    r = renormalize(bath)
    return BathSpec(s=bath.s, A=r.A_tilde, B=r.B_tilde, tau=0.0)


def gamma_nh(bath: BathSpec, t):
    """Decoherence factor of the non-Hermitian model: gamma at
    (A_tilde, B_tilde)."""
    return analytic.gamma_closed(hermitian_equivalent(bath), t)


def p_x_nh(bath: BathSpec, t):
    """P_x(t) = e^{-gamma_tilde(t)} (eps = 0, T = 0 contract)."""
    model = ModelSpec(bath=hermitian_equivalent(bath))
    return analytic.p_x(model, t)


def dp_dtau(bath: BathSpec, t) -> float:
    """Central finite-difference derivative of P_x with respect to tau,
    step h = max(1e-6, 1e-6 * tau).

    At tau = 0 the derivative is exactly 0: P_x depends on tau only
    through tau^2.
    """
    if bath.tau == 0.0:
        return 0.0
    h = max(1e-6, 1e-6 * bath.tau)
    lo = BathSpec(bath.s, bath.A, bath.B, bath.tau - h)
    hi = BathSpec(bath.s, bath.A, bath.B, bath.tau + h)
    return (p_x_nh(hi, t) - p_x_nh(lo, t)) / (2.0 * h)


def dp_dtau_asymptotic(bath: BathSpec, t: float, branch: str) -> float:
    """Closed-form asymptotes of dP_x/dtau for s = 1.

    branch="short" (Bt << 1):  (2/(1+4 tau^2)) A_tilde (B_tilde t)^2 tau
    branch="long"  (Bt >> 1):  (12/(1+4 tau^2)) (B_tilde t)^(-A_tilde)
                               A_tilde ln(B_tilde t) tau

    The long branch omits a subleading term of relative size
    1/(3 ln(B_tilde t)); the finite-difference ``dp_dtau`` is the arbiter.
    """
    if bath.s != 1.0:
        raise DomainError("asymptotic dP_x/dtau forms are for s = 1")
    r = renormalize(bath)
    xt = r.B_tilde * t
    if branch == "short":
        return 2.0 / r.factor * r.A_tilde * xt * xt * bath.tau
    if branch == "long":
        return (
            12.0 / r.factor * xt ** (-r.A_tilde)
            * r.A_tilde * math.log(xt) * bath.tau
        )
    raise DomainError(f"branch must be 'short' or 'long', got {branch!r}")


# --------------------------------------------------------------------------
# per-mode Bogoliubov oracle
# --------------------------------------------------------------------------

class ModeTransform(NamedTuple):
    omega_tilde: float
    u: float
    v: float


def bogoliubov_uv(tau: float):
    """Closed-form (u, v) of the mode rotation: theta = -ln(1+4 tau^2)/4."""
    theta = -0.25 * math.log1p(4.0 * tau * tau)
    return math.sinh(theta), math.cosh(theta)


def bogoliubov_mode(omega: float, tau: float) -> ModeTransform:
    """Numerically diagonalize one transformed bath mode.

    The mode Hamiltonian is H = Omega a^+ a + V (a^2 + a^+2) + const with
    Omega = (1 + 2 tau^2) omega and V = tau^2 omega.  Solving
    [b, H] = E b for b = alpha a + beta a^+ is the eigenproblem of
    [[Omega, -2V], [2V, -Omega]]; the positive eigenvalue is the
    renormalized frequency and the bosonic normalization
    alpha^2 - beta^2 = 1 fixes (u, v) = (-beta, alpha).  The coupling
    renormalizes by (u + v) since a + a^+ = (u + v)(b + b^+).
    """
    if omega <= 0:
        raise DomainError("mode frequency must be > 0")
    if tau < 0:
        raise DomainError("tau must be >= 0")
    big_omega = (1.0 + 2.0 * tau * tau) * omega
    v_off = tau * tau * omega
    m = np.array([[big_omega, -2.0 * v_off], [2.0 * v_off, -big_omega]])
    evals, evecs = np.linalg.eig(m)
    k = int(np.argmax(evals.real))
    energy = float(evals[k].real)
    alpha, beta = (float(c.real) for c in evecs[:, k])
    norm_sq = alpha * alpha - beta * beta
    if norm_sq <= 0:
        raise DomainError("mode is not in the bosonic (PT-unbroken) regime")
    scale = 1.0 / math.sqrt(norm_sq)
    alpha *= scale
    beta *= scale
    if alpha < 0:
        alpha, beta = -alpha, -beta
    return ModeTransform(omega_tilde=energy, u=-beta, v=alpha)
