# src/repeatersim/analytic.py
"""
Closed-form layer for the resonant (Delta = 0) dynamics.

The coupled {|1,n>, |2,n-1>} sectors diagonalize into dressed states |+,n> and
|-,n>; starting from the trap ground state the exact evolution is a phase times
a trap coherent displacement,

    e^{-i H_I t} |+-, n, 0>  =  e^{i Phi_n(t) -+ i|g| sqrt(n) t} |+-, n, -+ alpha_n(t)>,

with alpha_n(t) = (|gamma| sqrt(n)/omega_t)(1 - e^{-i omega_t t}) and
Phi_n(t) = (|gamma|^2 n / omega_t^2)(omega_t t - sin omega_t t).

On top of that sit the nine qubit-sector branches of the two-cavity Ramsey
sequence, the field-state coefficients a_ij(n, m) obtained by tracing out both
trap oscillators, and the heralding prior p. Everything here avoids building
the full tensor space; the brute-force counterpart lives in `bruteforce`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import HilbertDims, PhysicalParams

__all__ = [
    "DressedCoeffs",
    "BranchAmplitudes",
    "dressed_coefficients",
    "displacement_alpha",
    "phase_Phi",
    "analytic_evolve_dressed",
    "coherent_overlap",
    "branch_amplitudes",
    "log_f_weights",
    "field_coefficient",
    "field_coefficient_matrix",
    "prior_p",
    "branch_phase",
]

_SECTORS = {(i, j) for i in range(3) for j in range(3)}


def _require_resonant(params: PhysicalParams) -> None:
    if params.delta != 0.0:
        raise ValueError("closed forms require Delta = 0 (resonant interaction)")


@dataclass(frozen=True)
class DressedCoeffs:
    """Dressed doublet |+,n>, |-,n> of the n-excitation sector."""

    n: int
    rabi: float
    alpha_plus: complex
    alpha_minus: complex
    beta_plus: complex
    beta_minus: complex


def dressed_coefficients(n: int, params: PhysicalParams) -> DressedCoeffs:
    """
    |+,n> = alpha_+ |1,n> + beta_+ |2,n-1>, |-,n> = alpha_- |1,n> + beta_- |2,n-1>,
    valid for general detuning; n = 0 has no doublet and is rejected.
    """
    if n < 1:
        raise ValueError("no dressed doublet exists for n = 0")
    g_abs, delta, phi = params.g_abs, params.delta, params.g_phase
    rabi = np.sqrt(delta**2 / 4.0 + g_abs**2 * n)
    c_minus = np.sqrt((rabi + delta / 2.0) / (2.0 * rabi))
    c_plus = np.sqrt((rabi - delta / 2.0) / (2.0 * rabi))
    return DressedCoeffs(
        n=n,
        rabi=float(rabi),
        alpha_plus=c_plus * np.exp(-1j * phi),
        alpha_minus=c_minus,
        beta_plus=c_minus,
        beta_minus=-c_plus * np.exp(1j * phi),
    )


def displacement_alpha(n: float, t: float, params: PhysicalParams) -> complex:
    """Trap displacement alpha_n(t) = (|gamma| sqrt(n)/omega_t)(1 - e^{-i omega_t t})."""
    return (
        params.gamma_abs
        * np.sqrt(n)
        / params.omega_t
        * (1.0 - np.exp(-1j * params.omega_t * t))
    )


def phase_Phi(n: float, t: float, params: PhysicalParams) -> float:
    """Secular phase Phi_n(t) = (|gamma|^2 n / omega_t^2)(omega_t t - sin omega_t t)."""
    wt = params.omega_t
    return float(params.gamma_abs**2 * n / wt**2 * (wt * t - np.sin(wt * t)))


def analytic_evolve_dressed(
    n: int, sign: int, t: float, params: PhysicalParams
) -> tuple[complex, complex]:
    """
    Exact evolution of |sign, n> (x) |0>_trap under H_I for Delta = 0:
    returns (unit phase, trap displacement). sign is +1 or -1.
    """
    _require_resonant(params)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 1:
        raise ValueError("dressed evolution needs n >= 1")
    phase = np.exp(1j * (phase_Phi(n, t, params) - sign * params.g_abs * np.sqrt(n) * t))
    return complex(phase), complex(-sign * displacement_alpha(n, t, params))


def coherent_overlap(b1: complex, b2: complex) -> complex:
    """<b1|b2> = exp(-|b1|^2/2 - |b2|^2/2 + conj(b1) b2), the single source of all trap traces."""
    return complex(np.exp(-abs(b1) ** 2 / 2 - abs(b2) ** 2 / 2 + np.conj(b1) * b2))


class BranchAmplitudes(NamedTuple):
    g1_plus: complex
    g1_minus: complex
    g2_plus: complex
    g2_minus: complex
    f_n: complex


def log_f_weights(params: PhysicalParams, n_max: int) -> np.ndarray:
    """f_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!) / (2 sqrt(2)) for n = 0..n_max-1."""
    alpha = params.alpha_drive
    n = np.arange(n_max)
    if alpha == 0:
        f = np.zeros(n_max, dtype=complex)
        f[0] = 1.0 / (2.0 * np.sqrt(2.0))
        return f
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n_max)))))
    mag = np.exp(-abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - log_fact / 2)
    return mag * np.exp(1j * n * np.angle(alpha)) / (2.0 * np.sqrt(2.0))


def branch_amplitudes(n: int, tau: float, params: PhysicalParams) -> BranchAmplitudes:
    """
    Per-photon-number amplitudes of the single-interaction branches:

        g1_+- (n)  = f_n e^{i Phi_n(tau)} e^{+- i |g| sqrt(n) tau}
        g2_+ (n)   = -f_{n+1} (g/|g|) e^{i Phi_{n+1}(tau)} e^{+i |g| sqrt(n+1) tau}
        g2_- (n)   = +f_{n+1} (g/|g|) e^{i Phi_{n+1}(tau)} e^{-i |g| sqrt(n+1) tau}
    """
    _require_resonant(params)
    f = log_f_weights(params, n + 2)
    g_unit = np.exp(1j * params.g_phase)
    rabi_n = params.g_abs * np.sqrt(n) * tau
    rabi_n1 = params.g_abs * np.sqrt(n + 1) * tau
    ph_n = np.exp(1j * phase_Phi(n, tau, params))
    ph_n1 = np.exp(1j * phase_Phi(n + 1, tau, params))
    return BranchAmplitudes(
        g1_plus=complex(f[n] * ph_n * np.exp(1j * rabi_n)),
        g1_minus=complex(f[n] * ph_n * np.exp(-1j * rabi_n)),
        g2_plus=complex(-f[n + 1] * g_unit * ph_n1 * np.exp(1j * rabi_n1)),
        g2_minus=complex(f[n + 1] * g_unit * ph_n1 * np.exp(-1j * rabi_n1)),
        f_n=complex(f[n]),
    )


def _kappa(tau: float, params: PhysicalParams) -> float:
    """Trap decoherence exponent (|gamma|^2/omega_t^2)(1 - cos omega_t tau)."""
    return float(
        params.gamma_abs**2 / params.omega_t**2 * (1.0 - np.cos(params.omega_t * tau))
    )


def field_coefficient_matrix(
    i: int, j: int, tau: float, params: PhysicalParams, dims: HilbertDims
) -> np.ndarray:
    """
    The (n_field x n_field) coefficient array a_ij(n, m) of the detector field
    state for qubit sector (i, j), vectorized over (n, m).
    """
    _require_resonant(params)
    if (i, j) not in _SECTORS:
        raise ValueError(f"invalid qubit sector ({i}, {j})")
    nf = dims.n_field
    alpha = params.alpha_drive
    nbar = params.n_bar
    g = params.g_abs
    kap = _kappa(tau, params)
    wt = params.omega_t
    phi_tilde = params.gamma_abs**2 / wt**2 * (wt * tau - np.sin(wt * tau))
    n = np.arange(nf, dtype=float)
    rn = np.sqrt(n)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, nf + 2)))))

    def pois_amp(shift: int) -> np.ndarray:
        """alpha^{n+shift} / sqrt((n+shift)!) with the e^{-|alpha|^2} weight split evenly."""
        k = n + shift
        if nbar == 0:
            out = np.zeros(nf, dtype=complex)
            if shift == 0:
                out[0] = 1.0  # alpha = 0: only the vacuum term survives
            return out
        logmag = -nbar / 2.0 + k * np.log(abs(alpha)) - log_fact[np.arange(nf) + shift] / 2.0
        return np.exp(logmag) * np.exp(1j * k * np.angle(alpha))

    def cosg(x: np.ndarray) -> np.ndarray:
        return np.cos(g * x * tau)

    def damp(x: np.ndarray, strength: float = 1.0) -> np.ndarray:
        return np.exp(-strength * kap * x**2)

    omega_phase_1 = np.exp(-1j * (params.omega_c_t - phi_tilde) * (n[:, None] - n[None, :]))
    omega_phase_2 = np.exp(-1j * (params.omega_c_t - 2.0 * phi_tilde) * (n[:, None] - n[None, :]))

    if (i, j) == (0, 0):
        w = pois_amp(0)
        return (
            0.25
            * np.outer(w, w.conj())
            * np.exp(-1j * params.omega_c_t * (n[:, None] - n[None, :]))
        )

    if (i, j) in ((1, 0), (0, 1)):
        w = pois_amp(0)
        dm = rn[:, None] - rn[None, :]
        dp = rn[:, None] + rn[None, :]
        return (
            0.125
            * np.outer(w, w.conj())
            * (cosg(dm) * damp(dm) + cosg(dp) * damp(dp))
            * omega_phase_1
        )

    if (i, j) in ((2, 0), (0, 2)):
        w = pois_amp(1)
        r1 = np.sqrt(n + 1.0)
        dm = r1[:, None] - r1[None, :]
        dp = r1[:, None] + r1[None, :]
        return (
            0.125
            * np.outer(w, w.conj())
            * (cosg(dm) * damp(dm) - cosg(dp) * damp(dp))
            * omega_phase_1
        )

    if (i, j) == (1, 1):
        w = pois_amp(0)
        dm = rn[:, None] - rn[None, :]
        dp = rn[:, None] + rn[None, :]
        diag = np.cos(2.0 * g * rn * tau)
        return (
            0.0625
            * np.outer(w, w.conj())
            * (
                cosg(dm) ** 2 * damp(dm, 2.0)
                + cosg(dp) ** 2 * damp(dp, 2.0)
                + (diag[:, None] + diag[None, :])
                * np.exp(-2.0 * kap * (n[:, None] + n[None, :]))
            )
            * omega_phase_2
        )

    if (i, j) == (1, 2):
        w = pois_amp(1)
        r1 = np.sqrt(n + 1.0)
        dm = r1[:, None] - r1[None, :]
        dp = r1[:, None] + r1[None, :]
        return (
            0.0625
            * np.outer(w, w.conj())
            * (cosg(dm) ** 2 * damp(dm, 2.0) - cosg(dp) ** 2 * damp(dp, 2.0))
            * omega_phase_2
        )

    if (i, j) == (2, 1):
        w = pois_amp(1)
        r1 = np.sqrt(n + 1.0)
        dm1, dp1 = r1[:, None] - r1[None, :], r1[:, None] + r1[None, :]
        dm0, dp0 = rn[:, None] - rn[None, :], rn[:, None] + rn[None, :]
        bracket = (
            -cosg(dp1) * cosg(dp0) * damp(dp1) * damp(dp0)
            - cosg(dp1) * cosg(dm0) * damp(dp1) * damp(dm0)
            + cosg(dm1) * cosg(dp0) * damp(dm1) * damp(dp0)
            + cosg(dm1) * cosg(dm0) * damp(dm1) * damp(dm0)
        )
        return 0.0625 * np.outer(w, w.conj()) * bracket * omega_phase_2

    # (i, j) == (2, 2)
    w = pois_amp(2)
    r2 = np.sqrt(n + 2.0)
    r1 = np.sqrt(n + 1.0)
    dm2, dp2 = r2[:, None] - r2[None, :], r2[:, None] + r2[None, :]
    dm1, dp1 = r1[:, None] - r1[None, :], r1[:, None] + r1[None, :]
    bracket = (
        cosg(dp2) * cosg(dp1) * damp(dp2) * damp(dp1)
        - cosg(dp2) * cosg(dm1) * damp(dp2) * damp(dm1)
        - cosg(dm2) * cosg(dp1) * damp(dm2) * damp(dp1)
        + cosg(dm2) * cosg(dm1) * damp(dm2) * damp(dm1)
    )
    return 0.0625 * np.outer(w, w.conj()) * bracket * omega_phase_2


def field_coefficient(
    i: int, j: int, n: int, m: int, tau: float, params: PhysicalParams, dims: HilbertDims
) -> complex:
    """Single entry a_ij(n, m); see field_coefficient_matrix for the arrays."""
    if not (0 <= n < dims.n_field and 0 <= m < dims.n_field):
        raise ValueError("photon indices outside the truncated basis")
    return complex(field_coefficient_matrix(i, j, tau, params, dims)[n, m])


def prior_p(tau: float, params: PhysicalParams, dims: HilbertDims | None = None) -> float:
    """
    Heralding prior: p = (1/4) e^{-|alpha|^2} sum_n (|alpha|^{2n}/n!)
    [1 + cos(2|g| sqrt(n) tau) e^{-(4 n |gamma|^2/omega_t^2)(1 - cos omega_t tau)}].
    """
    _require_resonant(params)
    nbar = params.n_bar
    if dims is None:
        n_max = max(2, int(np.ceil(nbar + 10.0 * np.sqrt(max(nbar, 1.0)) + 20.0)))
    else:
        n_max = dims.n_field
    n = np.arange(n_max, dtype=float)
    if nbar == 0:
        weights = np.zeros(n_max)
        weights[0] = 1.0
    else:
        log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n_max)))))
        weights = np.exp(-nbar + n * np.log(nbar) - log_fact)
    kap = _kappa(tau, params)
    term = 1.0 + np.cos(2.0 * params.g_abs * np.sqrt(n) * tau) * np.exp(-4.0 * n * kap)
    return float(0.25 * np.sum(weights * term))


def branch_phase(i: int, j: int, params: PhysicalParams) -> float:
    """
    Global phase of the (i, j) qubit branch, expressed through the phase
    products omega_0 * t and omega_c * t (t = 2 tau + T, so omega_c (T + 2 tau)
    is the same product).
    """
    if (i, j) not in _SECTORS:
        raise ValueError(f"invalid qubit sector ({i}, {j})")
    w0t, wct = params.omega_0_t, params.omega_c_t
    table = {
        (0, 0): 2.0 * w0t,
        (1, 0): w0t - wct / 2.0,
        (0, 1): w0t - wct / 2.0,
        (2, 0): w0t + wct / 2.0,
        (0, 2): w0t + wct / 2.0,
        (1, 1): -wct,
        (1, 2): 0.0,
        (2, 1): 0.0,
        (2, 2): wct,
    }
    return table[(i, j)]
