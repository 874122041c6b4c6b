# src/repeatersim/discrimination.py
"""
Minimum-error discrimination of the detector field state and the postselected
Bell-pair figures of merit.

The photon detector sees rho_F = p rho_1 + (1-p) rho_2, where rho_1 collects
the Bell-compatible (1,0)/(0,1) qubit sectors and rho_2 everything else. The
optimal two-outcome measurement projects onto the non-negative eigenspace of
X = p rho_1 - (1-p) rho_2 (Helstrom). Conditioned on the click, the pair
fidelity against |Psi+> = (|01> + |10>)/sqrt(2) follows from the unnormalized
(1,0)/(0,1) field sectors and their cross term.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, linalg
from .model import HilbertDims, PhysicalParams, choose_truncation

__all__ = [
    "FieldEnsemble",
    "DiscriminationResult",
    "assemble_field_state",
    "helstrom_projector",
    "error_probability",
    "min_error",
    "p_bell",
    "cross_coefficient",
    "cross_matrix",
    "bell_fidelity",
    "discriminate_at",
    "sweep",
    "collapse_window",
]

# Eigenvalues of X above this (tiny, negative) threshold count as "non-negative"
# so that zero modes land inside T deterministically.
ZERO_TIE_BREAK = -1e-12

# rho_1 / rho_2 may pick up tiny negative eigenvalues from truncation; below
# this floor we refuse instead of silently clipping.
PSD_FLOOR = -1e-6


@dataclass(frozen=True)
class FieldEnsemble:
    """Prior and the two normalized hypothesis states of the field detector."""

    p: float
    rho1: np.ndarray
    rho2: np.ndarray
    basis_dim: int


@dataclass(frozen=True)
class DiscriminationResult:
    tau: float
    p: float
    E_min: float
    P_Bell: float
    F_opt: float
    rank_T: int


def _sector_sum(params: PhysicalParams, tau: float, dims: HilbertDims) -> tuple[np.ndarray, np.ndarray]:
    """(p*rho1, (1-p)*rho2) as unnormalized matrices from the sector coefficients."""
    bell = analytic.field_coefficient_matrix(1, 0, tau, params, dims) + \
        analytic.field_coefficient_matrix(0, 1, tau, params, dims)
    rest = np.zeros_like(bell)
    for i in range(3):
        for j in range(3):
            if (i, j) in ((1, 0), (0, 1)):
                continue
            rest += analytic.field_coefficient_matrix(i, j, tau, params, dims)
    return bell, rest


def _check_psd(rho: np.ndarray, name: str) -> None:
    w = np.linalg.eigvalsh(linalg.hermitianize(rho))
    if w.min() < PSD_FLOOR:
        raise ValueError(
            f"{name} has eigenvalue {w.min():.3e} < {PSD_FLOOR:.0e}: "
            "truncation failure, enlarge the basis"
        )


def assemble_field_state(params: PhysicalParams, tau: float, dims: HilbertDims) -> FieldEnsemble:
    """
    Build the detector-field hypothesis pair at interaction time tau. The Bell
    sector gives p rho_1; the remaining seven qubit sectors (the (0,0) sector
    is the untouched coherent branch) give (1-p) rho_2.
    """
    bell, rest = _sector_sum(params, tau, dims)
    p = analytic.prior_p(tau, params, dims)
    tr_bell = float(np.trace(bell).real)
    q = float(np.trace(rest).real)
    if not np.isclose(tr_bell, p, rtol=0, atol=1e-9):
        raise ValueError(
            f"sector trace {tr_bell:.12g} disagrees with the closed-form prior "
            f"{p:.12g}: truncation failure"
        )
    rho1 = linalg.hermitianize(bell) / tr_bell
    rho2 = linalg.hermitianize(rest) / q
    _check_psd(rho1, "rho_1")
    _check_psd(rho2, "rho_2")
    return FieldEnsemble(p=p, rho1=rho1, rho2=rho2, basis_dim=dims.n_field)


def helstrom_projector(ensemble: FieldEnsemble) -> np.ndarray:
    """Projector onto the non-negative eigenspace of X = p rho1 - (1-p) rho2."""
    X = ensemble.p * ensemble.rho1 - (1.0 - ensemble.p) * ensemble.rho2
    w, V = linalg.hermitian_eig(X)
    keep = w >= ZERO_TIE_BREAK
    Vk = V[:, keep]
    return Vk @ Vk.conj().T


def _check_projector(T: np.ndarray) -> None:
    if np.max(np.abs(T @ T - T)) > 1e-8 or np.max(np.abs(T - T.conj().T)) > 1e-8:
        raise ValueError("T is not an orthogonal projector")


def error_probability(T: np.ndarray, ensemble: FieldEnsemble) -> float:
    """E = p Tr((I - T) rho1) + (1-p) Tr(T rho2) for a projective click operator T."""
    _check_projector(T)
    p = ensemble.p
    e1 = float(np.trace((np.eye(T.shape[0]) - T) @ ensemble.rho1).real)
    e2 = float(np.trace(T @ ensemble.rho2).real)
    return p * e1 + (1.0 - p) * e2


def min_error(ensemble: FieldEnsemble) -> float:
    """Helstrom bound E_min = (1 - ||p rho1 - (1-p) rho2||_1)/2."""
    X = ensemble.p * ensemble.rho1 - (1.0 - ensemble.p) * ensemble.rho2
    return 0.5 * (1.0 - linalg.trace_norm(linalg.hermitianize(X)))


def p_bell(ensemble: FieldEnsemble, T: np.ndarray) -> float:
    """Success probability of heralding the Bell pair: p Tr(rho1 T)."""
    return ensemble.p * float(np.trace(ensemble.rho1 @ T).real)


def cross_coefficient(n: int, m: int, tau: float, params: PhysicalParams) -> complex:
    """
    Field-basis cross term c(n, m) between the (1,0) and (0,1) branches after
    tracing both traps (each branch leaves one trap in its ground state, so
    only vacuum overlaps <0|+-alpha_n> = e^{-|alpha_n|^2/2} survive):

        c(n,m) = 2 f_n f_m* e^{i(Phi_n - Phi_m)} cos(|g| sqrt(n) tau)
                 cos(|g| sqrt(m) tau) e^{-kappa (n+m)} e^{-i omega_c t (n-m)},

    kappa = (|gamma|^2/omega_t^2)(1 - cos omega_t tau).
    """
    C = cross_matrix(tau, params, HilbertDims(n_field=max(n, m) + 1, n_trap=1))
    return complex(C[n, m])


def cross_matrix(tau: float, params: PhysicalParams, dims: HilbertDims) -> np.ndarray:
    """Vectorized c(n, m) over the truncated field basis."""
    if params.delta != 0.0:
        raise ValueError("closed forms require Delta = 0")
    nf = dims.n_field
    f = analytic.log_f_weights(params, nf)
    n = np.arange(nf, dtype=float)
    kap = params.gamma_abs**2 / params.omega_t**2 * (1.0 - np.cos(params.omega_t * tau))
    wt = params.omega_t
    phi = params.gamma_abs**2 * n / wt**2 * (wt * tau - np.sin(wt * tau))
    cosr = np.cos(params.g_abs * np.sqrt(n) * tau)
    v = f * np.exp(1j * phi) * cosr * np.exp(-kap * n)
    return 2.0 * np.outer(v, v.conj()) * np.exp(
        -1j * params.omega_c_t * (n[:, None] - n[None, :])
    )


def bell_fidelity(
    ensemble: FieldEnsemble,
    T: np.ndarray,
    cross: np.ndarray,
    params: PhysicalParams,
    tau: float,
    dims: HilbertDims | None = None,
) -> float:
    """
    Fidelity of the postselected pair, F = sqrt(<Psi+| rho_AB |Psi+>):

        F^2 = [Tr(T r10) + Tr(T r01) + 2 Re Tr(T c)] / (2 Tr(T rho_F)),

    with r10, r01 the unnormalized Bell-sector field matrices and c the cross
    matrix; the (1,0)/(0,1) branch phases are equal and cancel.
    """
    if dims is None:
        dims = HilbertDims(n_field=ensemble.basis_dim, n_trap=1)
    a10 = analytic.field_coefficient_matrix(1, 0, tau, params, dims)
    a01 = analytic.field_coefficient_matrix(0, 1, tau, params, dims)
    rho_F = ensemble.p * ensemble.rho1 + (1.0 - ensemble.p) * ensemble.rho2
    denom = float(np.trace(T @ rho_F).real)
    if denom <= 0.0:
        raise ValueError("Tr(T rho_F) = 0: conditional state undefined")
    num = float(
        (np.trace(T @ a10) + np.trace(T @ a01) + 2.0 * np.trace(T @ cross).real).real
    )
    f2 = num / (2.0 * denom)
    return float(np.sqrt(max(f2, 0.0)))


def discriminate_at(params: PhysicalParams, tau: float, dims: HilbertDims) -> DiscriminationResult:
    """Full pipeline at one interaction time."""
    ensemble = assemble_field_state(params, tau, dims)
    T = helstrom_projector(ensemble)
    e_min = min_error(ensemble)
    pb = p_bell(ensemble, T)
    cross = cross_matrix(tau, params, dims)
    f_opt = bell_fidelity(ensemble, T, cross, params, tau, dims)
    return DiscriminationResult(
        tau=float(tau),
        p=ensemble.p,
        E_min=e_min,
        P_Bell=pb,
        F_opt=f_opt,
        rank_T=int(round(float(np.trace(T).real))),
    )


def _thread_count(threads: int | None) -> int:
    if threads is not None and threads > 0:
        return threads
    env = os.environ.get("QRS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sweep(
    params: PhysicalParams,
    tau_grid: np.ndarray,
    dims: HilbertDims | None = None,
    threads: int | None = None,
) -> list[DiscriminationResult]:
    """One DiscriminationResult per tau, in grid order, deterministically."""
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid.size == 0:
        raise ValueError("tau grid must be nonempty")
    if dims is None:
        dims = choose_truncation(params)
    workers = _thread_count(threads)
    if workers == 1:
        return [discriminate_at(params, t, dims) for t in tau_grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: discriminate_at(params, t, dims), tau_grid))


def collapse_window(results: list[DiscriminationResult], tol: float = 0.03) -> tuple[int, int]:
    """
    Longest contiguous index range where the prior sits on its collapse plateau
    p = 1/4 within tol. Returns (start, stop) as a half-open slice.
    """
    best = (0, 0)
    start = None
    for k, r in enumerate(results + [None]):  # sentinel flushes the last run
        on = r is not None and abs(r.p - 0.25) < tol
        if on and start is None:
            start = k
        elif not on and start is not None:
            if k - start > best[1] - best[0]:
                best = (start, k)
            start = None
    if best == (0, 0):
        raise ValueError("no collapse plateau (p near 1/4) found in the sweep")
    return best
