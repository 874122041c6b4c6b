"""
repeatersim: entanglement generation between two trapped three-level systems
linked by an optical channel, with the centre-of-mass motion of the traps
treated exactly.

Layers
------
linalg          dense Hermitian linear-algebra kernels and tolerances
model           parameters, truncation policy, Hamiltonian/block builders
analytic        closed-form dressed-state evolution, field-state coefficients
discrimination  minimum-error measurement, success probability, Bell fidelity
decoupling      bang-bang pulse sequences against the motional coupling
bruteforce      small-photon-number tensor oracle validating the closed forms
cli             sweep orchestration with deterministic CSV/JSON output
"""

from . import analytic, bruteforce, decoupling, discrimination, linalg, model, presets
from .model import HilbertDims, PhysicalParams, choose_truncation

__all__ = [
    "analytic",
    "bruteforce",
    "decoupling",
    "discrimination",
    "linalg",
    "model",
    "presets",
    "HilbertDims",
    "PhysicalParams",
    "choose_truncation",
]

__version__ = "0.1.0"
