"""Hot numeric kernels, in two interchangeable lanes.

Every kernel exists as a pure-numpy implementation and, when numba is
importable, as an ``@njit``-compiled scalar-loop twin.  The active lane is
chosen once at import from the ``SPINBOSON_NUMBA`` environment variable:

* unset or ``auto`` -- numba if available, numpy otherwise;
* ``1`` / ``on``    -- require numba (ImportError if missing);
* ``0`` / ``off``   -- force the numpy lane.

``set_backend()`` switches lanes at runtime (used by the benchmark and by
tests).  Both lanes use the same cancellation-safe formulas, IEEE
semantics (no fastmath), and sequential per-point reductions, so results
agree to rounding and each lane is bit-reproducible run to run.

Kernels:

* closed-form decoherence factor / phase integral over a time grid
  (Ohmic, generic s != 1, and the near-Ohmic series branch);
* discrete-bath mode sums;
* the bath quadrature integrands (decoherence and phase kernels).
"""

from __future__ import annotations

import math
import os

import numpy as np

EULER_GAMMA = 0.5772156649015329

_numba_available = False
try:  # pragma: no cover - exercised implicitly via lane selection
    import numba
    from numba import njit, prange

    _numba_available = True
except ImportError:  # pragma: no cover
    numba = None

    def njit(*args, **kwargs):  # type: ignore
        def wrap(fn):
            return fn
        return wrap

    prange = range  # type: ignore


# --------------------------------------------------------------------------
# numpy lane
# --------------------------------------------------------------------------

def _closed_ohmic_np(ts, A, B):
    x = B * ts
    gamma = A * (0.5 * np.log1p(x * x))
    phase = A * np.arctan(x)
    return gamma, phase


def _closed_generic_np(ts, s, A, B, g1):
    # g1 = Gamma(s-1).  brace = 1 - (1+x^2)^((1-s)/2) * cos((s-1) atan x)
    # evaluated as -expm1(-eps*L)*cos(eps*th) + 2*sin(eps*th/2)^2 to avoid
    # the cancellation that otherwise defeats the 1/(s-1) pole of g1.
    eps = s - 1.0
    x = B * ts
    L = 0.5 * np.log1p(x * x)
    th = np.arctan(x)
    decay = np.exp(-eps * L)
    brace = -np.expm1(-eps * L) * np.cos(eps * th) + 2.0 * np.sin(0.5 * eps * th) ** 2
    gamma = A * (g1 * brace)
    phase = A * (g1 * decay * np.sin(eps * th))
    return gamma, phase


def _closed_near_ohmic_np(ts, s, A, B):
    # first-order expansion in (s-1) around the Ohmic forms
    eps = s - 1.0
    x = B * ts
    L = 0.5 * np.log1p(x * x)
    th = np.arctan(x)
    gamma = A * (L + eps * (0.5 * th * th - 0.5 * L * L - EULER_GAMMA * L))
    phase = A * (th * (1.0 - eps * (EULER_GAMMA + L)))
    return gamma, phase


def _mode_sums_np(omega, w2, coth, ts):
    # gamma(t) = sum_k w2_k * 2 sin^2(omega_k t / 2) * coth_k
    # phase(t) = sum_k w2_k * sin(omega_k t)
    arg = np.multiply.outer(ts, omega)
    gamma = (2.0 * np.sin(0.5 * arg) ** 2) @ (w2 * coth)
    phase = np.sin(arg) @ w2
    return gamma, phase


def _bath_gamma_integrand_np(w, s, A, B, t, beta):
    pref = A * B ** (1.0 - s)
    vals = pref * w ** (s - 2.0) * np.exp(-w / B) * 2.0 * np.sin(0.5 * w * t) ** 2
    if math.isfinite(beta):
        vals = vals / np.tanh(0.5 * beta * w)
    return vals


def _bath_phase_integrand_np(w, s, A, B, t):
    pref = A * B ** (1.0 - s)
    return pref * w ** (s - 2.0) * np.exp(-w / B) * np.sin(w * t)


# --------------------------------------------------------------------------
# numba lane
# --------------------------------------------------------------------------

@njit(cache=True)
def _closed_ohmic_nb(ts, A, B):  # pragma: no cover - compiled
    n = ts.shape[0]
    gamma = np.empty(n)
    phase = np.empty(n)
    for i in range(n):
        x = B * ts[i]
        gamma[i] = A * (0.5 * math.log1p(x * x))
        phase[i] = A * math.atan(x)
    return gamma, phase


@njit(cache=True)
def _closed_generic_nb(ts, s, A, B, g1):  # pragma: no cover - compiled
    eps = s - 1.0
    n = ts.shape[0]
    gamma = np.empty(n)
    phase = np.empty(n)
    for i in range(n):
        x = B * ts[i]
        L = 0.5 * math.log1p(x * x)
        th = math.atan(x)
        decay = math.exp(-eps * L)
        sh = math.sin(0.5 * eps * th)
        brace = -math.expm1(-eps * L) * math.cos(eps * th) + 2.0 * sh * sh
        gamma[i] = A * (g1 * brace)
        phase[i] = A * (g1 * decay * math.sin(eps * th))
    return gamma, phase


@njit(cache=True)
def _closed_near_ohmic_nb(ts, s, A, B):  # pragma: no cover - compiled
    eps = s - 1.0
    n = ts.shape[0]
    gamma = np.empty(n)
    phase = np.empty(n)
    for i in range(n):
        x = B * ts[i]
        L = 0.5 * math.log1p(x * x)
        th = math.atan(x)
        gamma[i] = A * (L + eps * (0.5 * th * th - 0.5 * L * L - EULER_GAMMA * L))
        phase[i] = A * (th * (1.0 - eps * (EULER_GAMMA + L)))
    return gamma, phase


@njit(cache=True, parallel=True)
def _mode_sums_nb(omega, w2, coth, ts):  # pragma: no cover - compiled
    nt = ts.shape[0]
    nk = omega.shape[0]
    gamma = np.empty(nt)
    phase = np.empty(nt)
    for i in prange(nt):
        t = ts[i]
        g = 0.0
        p = 0.0
        for k in range(nk):  # sequential per time point: bit-stable
            a = omega[k] * t
            sh = math.sin(0.5 * a)
            g += w2[k] * 2.0 * sh * sh * coth[k]
            p += w2[k] * math.sin(a)
        gamma[i] = g
        phase[i] = p
    return gamma, phase


@njit(cache=True)
def _bath_gamma_integrand_nb(w, s, A, B, t, beta):  # pragma: no cover
    pref = A * B ** (1.0 - s)
    n = w.shape[0]
    out = np.empty(n)
    thermal = math.isfinite(beta)
    for i in range(n):
        sh = math.sin(0.5 * w[i] * t)
        v = pref * w[i] ** (s - 2.0) * math.exp(-w[i] / B) * 2.0 * sh * sh
        if thermal:
            v /= math.tanh(0.5 * beta * w[i])
        out[i] = v
    return out


@njit(cache=True)
def _bath_phase_integrand_nb(w, s, A, B, t):  # pragma: no cover
    pref = A * B ** (1.0 - s)
    n = w.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = pref * w[i] ** (s - 2.0) * math.exp(-w[i] / B) * math.sin(w[i] * t)
    return out


# --------------------------------------------------------------------------
# lane selection
# --------------------------------------------------------------------------

_LANES = {
    "numpy": {
        "closed_ohmic": _closed_ohmic_np,
        "closed_generic": _closed_generic_np,
        "closed_near_ohmic": _closed_near_ohmic_np,
        "mode_sums": _mode_sums_np,
        "bath_gamma_integrand": _bath_gamma_integrand_np,
        "bath_phase_integrand": _bath_phase_integrand_np,
    },
}
if _numba_available:
    _LANES["numba"] = {
        "closed_ohmic": _closed_ohmic_nb,
        "closed_generic": _closed_generic_nb,
        "closed_near_ohmic": _closed_near_ohmic_nb,
        "mode_sums": _mode_sums_nb,
        "bath_gamma_integrand": _bath_gamma_integrand_nb,
        "bath_phase_integrand": _bath_phase_integrand_nb,
    }

_active = {}
_backend_name = ""


def set_backend(name: str) -> None:
    """Select the kernel lane: ``"numba"`` or ``"numpy"``."""
    global _backend_name
    if name not in _LANES:
        raise ValueError(
            f"unknown backend {name!r}; available: {sorted(_LANES)}"
        )
    _active.update(_LANES[name])
    _backend_name = name


def get_backend() -> str:
    return _backend_name


def _default_backend() -> str:
    env = os.environ.get("SPINBOSON_NUMBA", "auto").strip().lower()
    if env in ("0", "off", "false", "no"):
        return "numpy"
    if env in ("1", "on", "true", "yes"):
        if not _numba_available:
            raise ImportError("SPINBOSON_NUMBA=1 but numba is not importable")
        return "numba"
    return "numba" if _numba_available else "numpy"


set_backend(_default_backend())


# public dispatchers -------------------------------------------------------

def closed_ohmic(ts, A, B):
    return _active["closed_ohmic"](ts, A, B)


def closed_generic(ts, s, A, B, g1):
    return _active["closed_generic"](ts, s, A, B, g1)


def closed_near_ohmic(ts, s, A, B):
    return _active["closed_near_ohmic"](ts, s, A, B)


def mode_sums(omega, w2, coth, ts):
    return _active["mode_sums"](omega, w2, coth, ts)


def bath_gamma_integrand(w, s, A, B, t, beta):
    return _active["bath_gamma_integrand"](w, s, A, B, t, beta)


def bath_phase_integrand(w, s, A, B, t):
    return _active["bath_phase_integrand"](w, s, A, B, t)
