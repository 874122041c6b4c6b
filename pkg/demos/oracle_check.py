# demos/oracle_check.py
"""
Cross-check the closed-form pipeline against a literal tensor simulation.

At small drive the whole two-cavity Ramsey sequence fits in memory as a
five-factor state (qubit A, qubit B, field, trap A, trap B). Propagating it
step by step and tracing out the traps must reproduce every field-state
coefficient, the heralding prior, and all discrimination figures that the
closed forms produce in milliseconds at mean photon number 100.

Run:  python3 demos/oracle_check.py
"""

from __future__ import annotations

import time

import numpy as np

from repeatersim import bruteforce
from repeatersim.model import PhysicalParams, choose_truncation


def main() -> None:
    params = PhysicalParams(
        gamma_abs=0.2, omega_t=1.0, alpha_drive=np.sqrt(2.0), tau=2.0, T_prop=1.0
    )
    dims = choose_truncation(params, leak_tol=1e-14)
    print(f"n_bar = {params.n_bar:.0f}, gamma = {params.gamma_abs}, "
          f"tau = {params.tau}; tensor dims 3 x 3 x {dims.n_field} x "
          f"{dims.n_trap} x {dims.n_trap}")

    t0 = time.perf_counter()
    deviations = bruteforce.compare_with_analytic(params, dims)
    elapsed = time.perf_counter() - t0

    width = max(len(k) for k in deviations)
    print(f"\n{'quantity':<{width}}  |tensor - closed form|")
    for key in sorted(deviations):
        print(f"{key:<{width}}  {deviations[key]:.3e}")
    print(f"\nworst deviation {max(deviations.values()):.3e} "
          f"(truncation level), {elapsed:.1f} s")


if __name__ == "__main__":
    main()
