# demos/discrimination_sweep.py
"""
Sweep the interaction time tau and watch the heralding prior p collapse to
1/4 while the postselected Bell fidelity degrades with the trap motion.

Three regimes at mean photon number 100:
  * motionless   (gamma = 0)            — the protocol at its best
  * soft trap    (omega_t = 0.1 Rabi)   — motion scrambles the herald
  * stiff trap   (omega_t = 0.4 Rabi)   — frequent refocusing, near-ideal

Run:  python3 demos/discrimination_sweep.py [points]
"""

from __future__ import annotations

import sys

import numpy as np

from repeatersim import discrimination as dsc
from repeatersim.model import choose_truncation
from repeatersim.presets import get_preset


def run_regime(name: str, points: int) -> None:
    spec = get_preset(name)
    params = spec["params"]
    dims = choose_truncation(params)
    grid = np.linspace(spec["tau_min"], spec["tau_max"], points)
    results = dsc.sweep(params, grid, dims)

    print(f"\n=== {name}: gamma = {params.gamma_abs}, omega_t = {params.omega_t} "
          f"(field cut {dims.n_field}) ===")
    print(f"{'tau':>7} {'p':>8} {'E_min':>8} {'P_Bell':>8} {'F_opt':>8}")
    for r in results[:: max(1, points // 12)]:
        print(f"{r.tau:7.3f} {r.p:8.4f} {r.E_min:8.4f} {r.P_Bell:8.4f} {r.F_opt:8.4f}")

    best = max(results, key=lambda r: r.F_opt)
    print(f"peak: F_opt = {best.F_opt:.4f} at tau = {best.tau:.3f} "
          f"(P_Bell = {best.P_Bell:.4f})")
    try:
        i0, i1 = dsc.collapse_window(results)
        print(f"collapse plateau (p ~ 1/4): tau in "
              f"[{results[i0].tau:.2f}, {results[i1 - 1].tau:.2f}]")
    except ValueError:
        print("no collapse plateau in this window")


def main() -> None:
    points = int(sys.argv[1]) if len(sys.argv) > 1 else 60
    for name in ("ideal", "fig2", "fig3"):
        run_regime(name, points)
    print("\nNote the soft trap: the prior still flattens at 1/4, but the click"
          "\nthat heralds the Bell pair becomes rare and the conditioned pair"
          "\nnever gets much beyond F ~ 0.5 inside the collapse window.")


if __name__ == "__main__":
    main()
