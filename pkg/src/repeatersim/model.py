# src/repeatersim/model.py
"""
Physical parameters, Fock-space truncation policy and Hamiltonian builders for
one trapped three-level system coupled to a single cavity mode and to its own
centre-of-mass oscillator.

Level structure: |0>, |1>, |2>; only the |1> <-> |2> transition couples to the
field (sigma_+ = |2><1|). In the interaction picture the generator is

    H_I = omega_t b'b + (Delta/2) sigma_z
        + g a sigma_+ + g* a' sigma_-
        + gamma sigma_+ a (b + b') + gamma* sigma_- a' (b + b'),

with a the cavity mode, b the trap oscillator, and the time unit fixed by
|g| = 1. All frequencies are ratios against |g|.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import poisson

from . import linalg

__all__ = [
    "PhysicalParams",
    "HilbertDims",
    "ExcitationBlock",
    "choose_truncation",
    "annihilation",
    "number_op",
    "coherent_state",
    "build_H_interaction",
    "build_H_ideal",
    "excitation_blocks",
    "block_permutation",
    "assemble_from_blocks",
    "initial_state_decoupling",
]

MAX_N_FIELD = 4096


@dataclass
class PhysicalParams:
    """All couplings and times, in units of |g| (and 1/|g| for times)."""

    g_abs: float = 1.0
    g_phase: float = 0.0
    gamma_abs: float = 0.0
    omega_t: float = 1.0
    delta: float = 0.0
    alpha_drive: complex = 0.0 + 0.0j
    tau: float = 0.0
    T_prop: float = 0.0
    # The cavity and internal frequencies only ever enter observables through
    # the products omega_c * t and omega_0 * t (t = 2 tau + T); carry the
    # products themselves.
    omega_c_t: float = 0.0
    omega_0_t: float = 0.0
    gamma_decay_ratio: float | None = None  # |g| / Gamma, for pulse budgets

    def __post_init__(self) -> None:
        if self.g_abs <= 0:
            raise ValueError("g_abs must be positive (it sets the time unit)")
        if self.gamma_abs < 0:
            raise ValueError("gamma_abs must be nonnegative")
        if self.omega_t <= 0:
            raise ValueError("omega_t must be positive")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.gamma_abs / self.g_abs > 0.5:
            warnings.warn(
                "gamma_abs/g_abs > 0.5: outside the Lamb-Dicke regime the "
                "linearized motional coupling is questionable",
                stacklevel=2,
            )

    @property
    def g(self) -> complex:
        return self.g_abs * np.exp(1j * self.g_phase)

    @property
    def n_bar(self) -> float:
        return float(abs(self.alpha_drive) ** 2)

    def with_(self, **kwargs) -> "PhysicalParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class HilbertDims:
    """Fock truncations: field levels 0..n_field-1, trap levels 0..n_trap-1."""

    n_field: int
    n_trap: int
    leak_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.n_field < 1 or self.n_trap < 1:
            raise ValueError("truncations must be at least 1")

    @property
    def total(self) -> int:
        return 3 * self.n_field * self.n_trap


def _poisson_cut(mean: float, leak_tol: float) -> int:
    """Smallest d such that a Poisson(mean) variable exceeds d-1 with prob < leak_tol."""
    if mean <= 0:
        return 1
    d = max(1, int(np.ceil(mean)))
    while poisson.sf(d - 1, mean) >= leak_tol:
        d += 1
        if d > MAX_N_FIELD + 1:
            break
    # tighten from below in case the initial guess overshot
    while d > 1 and poisson.sf(d - 2, mean) < leak_tol:
        d -= 1
    return d


def choose_truncation(params: PhysicalParams, leak_tol: float = 1e-10) -> HilbertDims:
    """
    Smallest truncations keeping both the coherent drive and the largest trap
    displacement's photon/phonon leakage below leak_tol.

    The worst trap displacement over any interaction time is
    d_max = 2 |gamma| sqrt(n_field) / omega_t; the trap cut takes the Poisson
    tail of |d_max|^2 plus a 6-level ladder margin (the displaced states are
    transiently squeezed-free coherent states, the margin absorbs the ripple).
    """
    if not (0.0 < leak_tol <= 1e-3):
        raise ValueError("leak_tol must be in (0, 1e-3]")
    n_field = _poisson_cut(params.n_bar, leak_tol)
    if n_field > MAX_N_FIELD:
        raise ValueError(
            f"n_bar = {params.n_bar:g} needs n_field = {n_field} > {MAX_N_FIELD}; "
            "refusing (desk-scale guard)"
        )
    if params.gamma_abs == 0.0:
        n_trap = 1
    else:
        d_max = 2.0 * params.gamma_abs * np.sqrt(n_field) / params.omega_t
        n_trap = _poisson_cut(d_max**2, leak_tol) + 6
    return HilbertDims(n_field=n_field, n_trap=n_trap, leak_tol=leak_tol)


def annihilation(dim: int) -> np.ndarray:
    """Truncated bosonic annihilation operator: <n-1| a |n> = sqrt(n)."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Truncated coherent state amplitudes alpha^n e^{-|alpha|^2/2}/sqrt(n!)."""
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return amps
    n = np.arange(dim)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, dim)))))
    mag = np.exp(-abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - log_fact / 2)
    phase = np.exp(1j * n * np.angle(alpha))
    return (mag * phase).astype(complex)


def _three_level_ops() -> tuple[np.ndarray, np.ndarray]:
    """(sigma_plus, sigma_z) on the 3-level space; sigma_z acts on {|1>,|2>}."""
    sp = np.zeros((3, 3), dtype=complex)
    sp[2, 1] = 1.0
    sz = np.zeros((3, 3), dtype=complex)
    sz[1, 1] = -1.0
    sz[2, 2] = 1.0
    return sp, sz


def build_H_interaction(params: PhysicalParams, dims: HilbertDims) -> np.ndarray:
    """
    Full interaction-picture Hamiltonian on (3-level x field x trap), in kron
    order qubit (x) field (x) trap. Level |0> only sees the trap oscillation.
    """
    nf, nt = dims.n_field, dims.n_trap
    a = annihilation(nf)
    b = annihilation(nt)
    sp, sz = _three_level_ops()
    I3, If, It = np.eye(3, dtype=complex), np.eye(nf, dtype=complex), np.eye(nt, dtype=complex)
    x = b + b.conj().T
    g = params.g
    gamma = params.gamma_abs * np.exp(1j * params.g_phase)
    H = linalg.kron(linalg.kron(I3, If), params.omega_t * number_op(nt))
    H += (params.delta / 2.0) * linalg.kron(linalg.kron(sz, If), It)
    jc = g * linalg.kron(sp, a)
    H += linalg.kron(jc + jc.conj().T, It)
    mo = gamma * linalg.kron(sp, a)
    H += linalg.kron(mo, x) + linalg.kron(mo.conj().T, x)
    return H


def build_H_ideal(params: PhysicalParams, dims: HilbertDims) -> np.ndarray:
    """Motion-free reference generator: omega_t b'b + g a sigma_+ + g* a' sigma_-."""
    return build_H_interaction(params.with_(gamma_abs=0.0, delta=0.0), dims)


@dataclass(frozen=True)
class ExcitationBlock:
    """
    One conserved-excitation sector of H_I.

    n = 0: the (|1>, field 0) sector, trap-only dynamics, dim n_trap.
    1 <= n < n_field: span{|1, n>, |2, n-1>} (x) trap, dim 2 n_trap,
        basis ordered [|1,n> x trap levels, |2,n-1> x trap levels].
    n = n_field: the truncation-top (|2>, field n_field - 1) sector, dim n_trap.
    `indices` are the positions of the block basis in the full kron ordering.
    """

    n: int
    indices: np.ndarray
    matrix: np.ndarray


def _full_index(level: int, n_ph: int, nu: int, dims: HilbertDims) -> int:
    return (level * dims.n_field + n_ph) * dims.n_trap + nu


def excitation_blocks(params: PhysicalParams, dims: HilbertDims) -> list[ExcitationBlock]:
    """
    Block decomposition of H_I over the coupled {|1>, |2>} levels. Together
    with the decoupled level-|0> sector (pure omega_t b'b per field level)
    these blocks reproduce H_I exactly up to an index permutation.
    """
    nf, nt = dims.n_field, dims.n_trap
    b = annihilation(nt)
    x = (b + b.conj().T).real.astype(complex)
    trap = params.omega_t * number_op(nt)
    g = params.g
    gamma = params.gamma_abs * np.exp(1j * params.g_phase)
    blocks: list[ExcitationBlock] = []

    idx0 = np.array([_full_index(1, 0, v, dims) for v in range(nt)])
    blocks.append(ExcitationBlock(0, idx0, trap - (params.delta / 2.0) * np.eye(nt)))

    for n in range(1, nf):
        rt = np.sqrt(n)
        H = np.zeros((2 * nt, 2 * nt), dtype=complex)
        H[:nt, :nt] = trap - (params.delta / 2.0) * np.eye(nt)
        H[nt:, nt:] = trap + (params.delta / 2.0) * np.eye(nt)
        off = np.conj(g) * rt * np.eye(nt) + np.conj(gamma) * rt * x  # <1,n|H|2,n-1>
        H[:nt, nt:] = off
        H[nt:, :nt] = off.conj().T
        idx = np.concatenate(
            [
                [_full_index(1, n, v, dims) for v in range(nt)],
                [_full_index(2, n - 1, v, dims) for v in range(nt)],
            ]
        ).astype(int)
        blocks.append(ExcitationBlock(n, idx, H))

    idx_top = np.array([_full_index(2, nf - 1, v, dims) for v in range(nt)])
    blocks.append(ExcitationBlock(nf, idx_top, trap + (params.delta / 2.0) * np.eye(nt)))
    return blocks


def block_permutation(dims: HilbertDims) -> np.ndarray:
    """
    Index permutation putting the full kron basis into [level-0 sector,
    excitation blocks in order]; H_full[ix_(perm, perm)] is block diagonal.
    """
    nf, nt = dims.n_field, dims.n_trap
    level0 = [
        _full_index(0, n, v, dims) for n in range(nf) for v in range(nt)
    ]
    rest: list[int] = []
    rest += [_full_index(1, 0, v, dims) for v in range(nt)]
    for n in range(1, nf):
        rest += [_full_index(1, n, v, dims) for v in range(nt)]
        rest += [_full_index(2, n - 1, v, dims) for v in range(nt)]
    rest += [_full_index(2, nf - 1, v, dims) for v in range(nt)]
    return np.array(level0 + rest, dtype=int)


def assemble_from_blocks(params: PhysicalParams, dims: HilbertDims) -> np.ndarray:
    """Rebuild the full H_I from its blocks plus the level-0 sector (test aid)."""
    nf, nt = dims.n_field, dims.n_trap
    H = np.zeros((dims.total, dims.total), dtype=complex)
    trap = params.omega_t * np.arange(nt, dtype=float)
    for n in range(nf):
        for v in range(nt):
            i = _full_index(0, n, v, dims)
            H[i, i] = trap[v]
    for blk in excitation_blocks(params, dims):
        H[np.ix_(blk.indices, blk.indices)] = blk.matrix
    return H


def initial_state_decoupling(params: PhysicalParams, dims: HilbertDims) -> np.ndarray:
    """
    Product state (|0> + |1>)/sqrt(2) (x) |alpha>_field (x) |0>_trap used by
    the decoupling simulations, in the full kron ordering.
    """
    nf, nt = dims.n_field, dims.n_trap
    coh = coherent_state(params.alpha_drive, nf)
    leak = 1.0 - float(np.sum(np.abs(coh) ** 2))
    if leak > dims.leak_tol:
        raise ValueError(
            f"coherent drive leaks {leak:.3e} beyond n_field = {nf} "
            f"(> leak_tol = {dims.leak_tol:.1e})"
        )
    qubit = np.zeros(3, dtype=complex)
    qubit[0] = qubit[1] = 1.0 / np.sqrt(2.0)
    trap = np.zeros(nt, dtype=complex)
    trap[0] = 1.0
    psi = np.kron(np.kron(qubit, coh), trap)
    return psi / np.linalg.norm(psi)
