# src/repeatersim/decoupling.py
"""
Bang-bang decoupling of the centre-of-mass motion in one cavity.

The control pulses are diagonal in the trap number basis, p = e^{-i phi b'b}
(phi = pi is the parity kick). Stroboscopic evolution U_N(t) = (p e^{-i H_I t/N})^N
averages the motional coupling away; fidelity is measured against the
motion-free reference generator H_id = omega_t b'b + g a sigma_+ + g* a' sigma_-
on the initial state (|0> + |1>)/sqrt(2) (x) |alpha> (x) |0>_trap.

The evolution runs per conserved-excitation block (dim 2 n_trap each), batched
over photon number; the full tensor space is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    HilbertDims,
    PhysicalParams,
    coherent_state,
    excitation_blocks,
)

__all__ = [
    "PulseSchedule",
    "FidelityTrace",
    "pulse_operator",
    "decoupling_condition",
    "make_schedule",
    "check_budget",
    "BlockEvolver",
    "evolve_with_pulses",
    "final_fidelity",
    "average_hamiltonian",
    "final_fidelity_scan",
    "dominant_frequency",
]


@dataclass(frozen=True)
class PulseSchedule:
    """Pulse phase, count, application times in [0, tau], and budget metadata."""

    kind: str  # "equidistant" | "uhrig"
    N: int
    phi: float
    t_p: float = 0.0
    times: np.ndarray = None  # type: ignore[assignment]
    budget: float | None = None

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size != self.N:
            raise ValueError("times must list one instant per pulse")
        if np.any(np.diff(t) <= 0):
            raise ValueError("pulse times must be strictly increasing")
        if self.budget is not None and self.N * self.t_p > self.budget + 1e-12:
            raise ValueError(
                f"N * t_p = {self.N * self.t_p:g} exceeds the budget {self.budget:g}"
            )
        object.__setattr__(self, "times", t)


@dataclass(frozen=True)
class FidelityTrace:
    times: np.ndarray
    fidelities: np.ndarray


def pulse_operator(phi: float, dims: HilbertDims) -> np.ndarray:
    """
    Full-space pulse e^{-i phi b'b}: diagonal phases e^{-i phi nu} on the trap
    factor, identity on qubit and field. phi = 0 (mod 2 pi) is rejected — it
    violates the first-order decoupling condition lambda_n != lambda_{n+1}.
    """
    if abs(np.remainder(phi, 2.0 * np.pi)) < 1e-12:
        raise ValueError("phi = 0 (mod 2 pi) is not a decoupling pulse")
    ph = np.exp(-1j * phi * np.arange(dims.n_trap))
    full = np.tile(ph, 3 * dims.n_field)
    return np.diag(full)


def decoupling_condition(lambdas: np.ndarray, j_max: int) -> dict[int, bool]:
    """
    Per-order report of the odd-order decoupling conditions
    lambda_n != lambda_{n+j} (mod 2 pi) for odd j <= j_max.
    """
    lam = np.asarray(lambdas, dtype=float)
    report: dict[int, bool] = {}
    for j in range(1, j_max + 1, 2):
        if lam.size <= j:
            report[j] = True
            continue
        diff = np.remainder(lam[j:] - lam[:-j], 2.0 * np.pi)
        report[j] = bool(np.all(np.minimum(diff, 2.0 * np.pi - diff) > 1e-12))
    return report


def make_schedule(
    kind: str,
    N: int,
    tau: float,
    phi: float,
    t_p: float = 0.0,
    budget: float | None = None,
) -> PulseSchedule:
    """
    Equidistant: one pulse after each of N equal segments (last pulse at tau).
    Uhrig: t_j = tau sin^2(pi j / (2N + 2)), symmetric about tau/2.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if tau <= 0:
        raise ValueError("tau must be positive")
    j = np.arange(1, N + 1)
    if kind == "equidistant":
        times = j * (tau / N)
    elif kind == "uhrig":
        times = tau * np.sin(np.pi * j / (2.0 * N + 2.0)) ** 2
    else:
        raise ValueError(f"unknown schedule kind {kind!r}")
    return PulseSchedule(kind=kind, N=N, phi=phi, t_p=t_p, times=times, budget=budget)


def check_budget(schedule: PulseSchedule, params: PhysicalParams) -> tuple[bool, float, float]:
    """
    Compare the total pulse-implementation time N t_p against the decay budget
    (|g|/Gamma) tau. Returns (within budget, usage fraction, total wall time
    T_p = tau + N t_p).
    """
    if params.gamma_decay_ratio is None:
        raise ValueError("gamma_decay_ratio (|g|/Gamma) is not set")
    tau = params.tau
    spent = schedule.N * schedule.t_p
    allowance = params.gamma_decay_ratio * tau
    factor = spent / allowance if allowance > 0 else np.inf
    return factor < 1.0, float(factor), float(tau + spent)


class BlockEvolver:
    """
    Batched per-excitation-block propagator.

    The initial decoupling state populates the decoupled level-|0> sector
    (static: trap ground, zero trap energy) and, within level |1>, one block
    per photon number. Block n >= 1 spans {|1,n>, |2,n-1>} (x) trap; block
    n = 0 is static at Delta = 0. Overlap against the motion-free reference:

        A(t) = 1/2 + 1/2 |c_0|^2 + 1/2 sum_{n>=1} |c_n|^2 <psi_id_n(t)|psi_n(t)>,

    F(t) = |A(t)|^2, with c_n the coherent field amplitudes.
    """

    def __init__(self, params: PhysicalParams, dims: HilbertDims):
        self.params = params
        self.dims = dims
        nf, nt = dims.n_field, dims.n_trap
        coh = coherent_state(params.alpha_drive, nf)
        self.weights = np.abs(coh) ** 2  # |c_n|^2
        blocks = excitation_blocks(params, dims)
        ideal = excitation_blocks(params.with_(gamma_abs=0.0, delta=0.0), dims)
        # blocks[0] is n = 0, blocks[-1] the truncation top; evolve n = 1..nf-1
        mats = np.stack([b.matrix for b in blocks[1:-1]])
        mats_id = np.stack([b.matrix for b in ideal[1:-1]])
        self.w, self.V = np.linalg.eigh(mats)
        self.w_id, self.V_id = np.linalg.eigh(mats_id)
        nu = np.arange(nt)
        self.trap_nu = np.concatenate([nu, nu])  # trap quantum number per block index
        psi0 = np.zeros((nf - 1, 2 * nt), dtype=complex)
        psi0[:, 0] = 1.0  # |1, n> (x) trap ground
        self.psi0 = psi0

    def _propagate(self, psi: np.ndarray, w: np.ndarray, V: np.ndarray, dt: float) -> np.ndarray:
        coeff = np.einsum("bji,bj->bi", V.conj(), psi)
        return np.einsum("bij,bj->bi", V, np.exp(-1j * w * dt) * coeff)

    def _ideal_states(self, t: float) -> np.ndarray:
        return self._propagate(self.psi0, self.w_id, self.V_id, t)

    def overlap_amplitude(self, psi: np.ndarray, t: float) -> complex:
        """A(t) against the motion-free reference, given the pulsed block states."""
        ov = np.einsum("bi,bi->b", self._ideal_states(t).conj(), psi)
        return complex(0.5 + 0.5 * self.weights[0] + 0.5 * np.sum(self.weights[1:] * ov))

    def run(
        self, schedule: PulseSchedule | None, tau: float, sample_times: np.ndarray
    ) -> FidelityTrace:
        """Evolve through the pulse sequence, sampling F at the requested times."""
        pulse_times = np.array([]) if schedule is None else schedule.times
        if pulse_times.size and (pulse_times[0] < -1e-12 or pulse_times[-1] > tau + 1e-12):
            raise ValueError("pulse times must lie within [0, tau]")
        grid = np.unique(np.concatenate([sample_times, pulse_times, [0.0, tau]]))
        grid = grid[(grid >= -1e-12) & (grid <= tau + 1e-12)]
        phases = (
            None
            if schedule is None
            else np.exp(-1j * schedule.phi * self.trap_nu)
        )
        psi = self.psi0.copy()
        t_prev = 0.0
        fid: list[float] = []
        times_out: list[float] = []
        next_pulse = 0
        for t in grid:
            psi = self._propagate(psi, self.w, self.V, t - t_prev)
            t_prev = t
            fid.append(abs(self.overlap_amplitude(psi, t)) ** 2)
            times_out.append(t)
            while next_pulse < pulse_times.size and abs(pulse_times[next_pulse] - t) < 1e-12:
                psi = psi * phases
                next_pulse += 1
        return FidelityTrace(times=np.array(times_out), fidelities=np.array(fid))

    def final_overlap(self, schedule: PulseSchedule | None, tau: float) -> complex:
        """A(tau) without intermediate sampling (fast path for scans)."""
        pulse_times = np.array([]) if schedule is None else schedule.times
        phases = (
            None
            if schedule is None
            else np.exp(-1j * schedule.phi * self.trap_nu)
        )
        psi = self.psi0.copy()
        t_prev = 0.0
        for t in pulse_times:
            psi = self._propagate(psi, self.w, self.V, t - t_prev) * phases
            t_prev = t
        if tau > t_prev + 1e-15:
            psi = self._propagate(psi, self.w, self.V, tau - t_prev)
        return self.overlap_amplitude(psi, tau)


def evolve_with_pulses(
    params: PhysicalParams,
    dims: HilbertDims,
    schedule: PulseSchedule | None,
    n_samples: int = 2048,
) -> FidelityTrace:
    """
    Fidelity trace F(t) = |<Psi_0| U_id'(t) U(t) |Psi_0>|^2 over t in [0, tau],
    sampled on a uniform grid augmented with the pulse instants.
    """
    tau = params.tau
    if tau <= 0:
        raise ValueError("params.tau must be positive")
    evolver = BlockEvolver(params, dims)
    samples = np.linspace(0.0, tau, n_samples)
    return evolver.run(schedule, tau, samples)


def final_fidelity(
    params: PhysicalParams, dims: HilbertDims, schedule: PulseSchedule | None
) -> float:
    """F(tau) only."""
    evolver = BlockEvolver(params, dims)
    return abs(evolver.final_overlap(schedule, params.tau)) ** 2


def average_hamiltonian(
    params: PhysicalParams, dims: HilbertDims, phi: float, N: int
) -> np.ndarray:
    """
    Average generator (1/N) sum_{k=1..N} p^k H_I p'^k of the stroboscopic
    sequence. For phi in (0, pi] the motional coupling decays with the Cesaro
    bound 2 / (N |1 - e^{-i phi}|); it cancels exactly for phi = pi, N even.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    from .model import build_H_interaction

    H = build_H_interaction(params, dims)
    nt = dims.n_trap
    ph = np.exp(-1j * phi * np.arange(nt))
    full = np.tile(ph, 3 * dims.n_field)
    acc = np.zeros_like(H)
    for k in range(1, N + 1):
        pk = full**k
        acc += (pk[:, None] * H) * pk.conj()[None, :]
    return acc / N


def dominant_frequency(trace: FidelityTrace) -> tuple[float, float]:
    """
    Dominant nonzero DFT bin of 1 - F(t) on the trace's uniform part, as
    (angular frequency, bin width). The trace must be uniformly sampled.
    """
    t, f = trace.times, trace.fidelities
    dt = np.diff(t)
    if dt.size < 3 or np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
        raise ValueError("dominant_frequency needs a uniformly sampled trace")
    sig = 1.0 - f
    spec = np.abs(np.fft.rfft(sig))
    k = int(np.argmax(spec[1:])) + 1
    span = t[-1] - t[0] + dt[0]
    bin_width = 2.0 * np.pi / span
    return float(k * bin_width), float(bin_width)


def final_fidelity_scan(params: PhysicalParams, dims: HilbertDims, axis: str, **opts):
    """
    Deterministic F(tau) tables along one scan axis. Returns a list of dict rows.

    axis = "pulse_count":   opts counts (list of N), phi, kind
    axis = "pulse_phase":   opts phis, counts (list of N), kind
    axis = "budgeted_count": opts budgets (total pulse time), counts; the pulse
        is a period of free trap precession while the interactions are switched
        off, so each pulse carries phi_N = omega_t * (budget / N) mod 2 pi
    axis = "uhrig_vs_equidistant": opts N, phis
    """
    tau = params.tau
    evolver = BlockEvolver(params, dims)

    def F(schedule: PulseSchedule) -> float:
        return abs(evolver.final_overlap(schedule, tau)) ** 2

    rows: list[dict] = []
    if axis == "pulse_count":
        phi = opts.get("phi", np.pi)
        kind = opts.get("kind", "equidistant")
        for N in opts["counts"]:
            rows.append({"N": int(N), "phi": phi, "F": F(make_schedule(kind, N, tau, phi))})
    elif axis == "pulse_phase":
        kind = opts.get("kind", "equidistant")
        for N in opts["counts"]:
            for phi in opts["phis"]:
                rows.append(
                    {"N": int(N), "phi": float(phi), "F": F(make_schedule(kind, N, tau, phi))}
                )
    elif axis == "budgeted_count":
        for budget in opts["budgets"]:
            for N in opts["counts"]:
                t_p = budget / N
                phi = np.remainder(params.omega_t * t_p, 2.0 * np.pi)
                sched = make_schedule("equidistant", N, tau, phi, t_p=t_p, budget=budget)
                rows.append(
                    {
                        "budget": float(budget),
                        "N": int(N),
                        "phi": float(phi),
                        "F": F(sched),
                    }
                )
    elif axis == "uhrig_vs_equidistant":
        N = int(opts["N"])
        for kind in ("equidistant", "uhrig"):
            for phi in opts["phis"]:
                rows.append(
                    {"kind": kind, "N": N, "phi": float(phi), "F": F(make_schedule(kind, N, tau, phi))}
                )
    else:
        raise ValueError(f"unknown scan axis {axis!r}")
    return rows
