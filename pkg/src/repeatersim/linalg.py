# src/repeatersim/linalg.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.linalg as npl


@dataclass(frozen=True)
class Tolerances:
    """Central numeric tolerances used by all linear-algebra kernels."""

    herm_check: float = 1e-12
    eig_residual: float = 1e-10


DEFAULT_TOL = Tolerances()


def max_asymmetry(M: np.ndarray) -> float:
    """max |M - M^dagger| over all entries."""
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def assert_hermitian(M: np.ndarray, tol: Tolerances = DEFAULT_TOL, name: str = "matrix") -> None:
    """Reject matrices that are not Hermitian within tolerance (relative to scale)."""
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    asym = max_asymmetry(M)
    if asym > tol.herm_check * max(scale, 1.0):
        raise ValueError(
            f"{name} is not Hermitian: max asymmetry {asym:.3e} "
            f"exceeds {tol.herm_check:.1e} * max|entry| = {tol.herm_check * max(scale, 1.0):.3e}"
        )


def hermitianize(M: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M^dagger) / 2."""
    return (M + M.conj().T) / 2


def hermitian_eig(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix: M = V diag(w) V^dagger.

    Returns eigenvalues ascending and the unitary of column eigenvectors.
    Non-Hermitian input is rejected with a diagnostic of the asymmetry.
    Within a degenerate eigenvalue cluster the basis choice is arbitrary;
    downstream consumers must not rely on it.
    """
    assert_hermitian(M, tol)
    w, V = npl.eigh(hermitianize(M))
    return w, V


def trace_norm(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    """Trace norm ||M||_1 of a Hermitian matrix: sum of |eigenvalues|."""
    assert_hermitian(M, tol)
    w = npl.eigvalsh(hermitianize(M))
    return float(np.sum(np.abs(w)))


def unitary_exp(H: np.ndarray, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """
    exp(-i H t) for Hermitian H via eigendecomposition: V e^{-i w t} V^dagger.
    """
    w, V = hermitian_eig(H, tol)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker (tensor) product with shape bookkeeping."""
    if A.ndim != 2 or B.ndim != 2:
        raise ValueError(f"kron expects matrices, got ndim {A.ndim} and {B.ndim}")
    return np.kron(A, B)


def partial_trace(M: np.ndarray, dims: Sequence[int], keep: Sequence[int] | int) -> np.ndarray:
    """
    Trace out every tensor factor not listed in `keep`.

    M is a square matrix on the tensor-product space with factor dimensions
    `dims` (in kron order); `keep` lists the factor indices to retain, in
    their original order. Preserves the trace exactly.
    """
    dims = list(dims)
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    total = int(np.prod(dims))
    if M.shape != (total, total):
        raise ValueError(f"matrix shape {M.shape} does not match dims {dims} (product {total})")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    T = M.reshape(dims + dims)
    perm = keep + traced + [k + n for k in keep] + [k + n for k in traced]
    T = np.transpose(T, perm)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    dt = int(np.prod([dims[k] for k in traced])) if traced else 1
    T = T.reshape(dk, dt, dk, dt)
    return np.einsum("aibi->ab", T)
