# src/repeatersim/presets.py
"""
Named parameter regimes for the standard runs.

All couplings are ratios against |g| = 1 and the drive is alpha = 10
(mean photon number 100) unless stated otherwise. The discrimination regimes
differ in trap frequency relative to the collective Rabi frequency
|g| sqrt(n_bar); the decoupling regimes fix the interaction window at
tau = 1/(2|g|), where the collapse sets the relevant timescale.
"""

from __future__ import annotations

import numpy as np

from .model import PhysicalParams

__all__ = ["PRESETS", "get_preset"]

_ALPHA = 10.0  # n_bar = 100
_TAU_DD = 0.5  # decoupling interaction window, = 1/(2|g|)
_PHI_GRID = [np.pi * k / 8.0 for k in range(1, 9)]

PRESETS: dict[str, dict] = {
    # --- discrimination sweeps -------------------------------------------
    "ideal": {
        "command": "discriminate",
        "params": dict(gamma_abs=0.0, omega_t=1.0, alpha_drive=_ALPHA),
        "tau_min": 0.0,
        "tau_max": 50.0,
        "points": 500,
    },
    "fig2": {
        # small trap frequency: omega_t = 0.1 |g| sqrt(n_bar). The window ends
        # at |g| sqrt(n_bar) tau = 50, i.e. just short of the first motional
        # refocusing point omega_t tau = 2 pi where the displacement damping
        # cancels exactly and the curves revert to the motionless ones.
        "command": "discriminate",
        "params": dict(gamma_abs=0.1, omega_t=1.0, alpha_drive=_ALPHA),
        "tau_min": 0.0,
        "tau_max": 5.0,
        "points": 500,
    },
    "fig3": {
        # stiffer trap: omega_t = 0.4 |g| sqrt(n_bar), same window as fig2
        "command": "discriminate",
        "params": dict(gamma_abs=0.05, omega_t=4.0, alpha_drive=_ALPHA),
        "tau_min": 0.0,
        "tau_max": 5.0,
        "points": 500,
    },
    # --- decoupling runs --------------------------------------------------
    "fig4": {
        "command": "decouple",
        "params": dict(
            gamma_abs=0.4,
            omega_t=10.0,
            alpha_drive=_ALPHA,
            tau=_TAU_DD,
            gamma_decay_ratio=71.66,
        ),
        "pulses": 200,
        "phi": np.pi,
        "schedule": "equidistant",
        "samples": 2048,
    },
    "fig5": {
        "command": "scan",
        "axis": "pulse_count",
        "params": dict(
            gamma_abs=0.4,
            omega_t=10.0,
            alpha_drive=_ALPHA,
            tau=_TAU_DD,
            gamma_decay_ratio=71.66,
        ),
        "counts": list(range(5, 201, 5)),
        "phi": np.pi,
    },
    "fig6": {
        "command": "scan",
        "axis": "pulse_phase",
        "params": dict(
            gamma_abs=0.4,
            omega_t=10.0,
            alpha_drive=_ALPHA,
            tau=_TAU_DD,
            gamma_decay_ratio=71.66,
        ),
        "counts": [50, 400],
        "phis": _PHI_GRID,
    },
    "fig7": {
        # total pulse-implementation budgets tau, 2 tau, 4 tau
        # (wall times T_p = 2 tau, 3 tau, 5 tau)
        "command": "scan",
        "axis": "budgeted_count",
        "params": dict(
            gamma_abs=0.4,
            omega_t=10.0,
            alpha_drive=_ALPHA,
            tau=_TAU_DD,
            gamma_decay_ratio=71.66,
        ),
        "budgets": [_TAU_DD, 2.0 * _TAU_DD, 4.0 * _TAU_DD],
        "counts": list(range(20, 201, 10)),
    },
    "fig8": {
        "command": "scan",
        "axis": "uhrig_vs_equidistant",
        "params": dict(
            gamma_abs=0.4,
            omega_t=10.0,
            alpha_drive=_ALPHA,
            tau=_TAU_DD,
            gamma_decay_ratio=71.66,
        ),
        "N": 30,
        "phis": _PHI_GRID,
    },
}


def get_preset(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
    spec = dict(PRESETS[name])
    spec["params"] = PhysicalParams(**spec["params"])
    spec["preset"] = name
    return spec
