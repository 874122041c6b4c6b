# tests/test_model.py

from __future__ import annotations

import numpy as np
import pytest

from repeatersim import linalg, model
from repeatersim.model import HilbertDims, PhysicalParams


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(g_abs=0.0)
    with pytest.raises(ValueError):
        PhysicalParams(gamma_abs=-0.1)
    with pytest.raises(ValueError):
        PhysicalParams(omega_t=0.0)
    with pytest.raises(ValueError):
        PhysicalParams(tau=-1.0)
    with pytest.warns(UserWarning, match="Lamb-Dicke"):
        PhysicalParams(gamma_abs=0.6)


def test_params_derived_quantities():
    p = PhysicalParams(g_abs=2.0, g_phase=np.pi / 3, alpha_drive=3.0 + 4.0j)
    assert p.g == pytest.approx(2.0 * np.exp(1j * np.pi / 3))
    assert p.n_bar == pytest.approx(25.0)
    q = p.with_(g_phase=0.0)
    assert q.g == pytest.approx(2.0)
    assert p.g_phase == pytest.approx(np.pi / 3)  # with_ does not mutate


def test_truncation_policy():
    p = PhysicalParams(alpha_drive=2.0, gamma_abs=0.2, omega_t=1.0)
    dims = model.choose_truncation(p, leak_tol=1e-10)
    tight = model.choose_truncation(p, leak_tol=1e-14)
    assert tight.n_field > dims.n_field  # smaller leak -> larger cut
    assert tight.n_trap >= dims.n_trap
    # the cut is minimal: one level fewer would leak too much
    from scipy.stats import poisson

    assert poisson.sf(dims.n_field - 1, p.n_bar) < 1e-10
    assert poisson.sf(dims.n_field - 2, p.n_bar) >= 1e-10


def test_truncation_edge_cases():
    assert model.choose_truncation(PhysicalParams(gamma_abs=0.0)).n_trap == 1
    assert model.choose_truncation(PhysicalParams(alpha_drive=0.0)).n_field == 1
    with pytest.raises(ValueError, match="leak_tol"):
        model.choose_truncation(PhysicalParams(), leak_tol=0.1)
    with pytest.raises(ValueError, match="desk-scale"):
        model.choose_truncation(PhysicalParams(alpha_drive=70.0))


def test_coherent_state():
    alpha = 1.3 - 0.4j
    v = model.coherent_state(alpha, 40)
    assert np.sum(np.abs(v) ** 2) == pytest.approx(1.0, abs=1e-12)
    a = model.annihilation(40)
    assert v.conj() @ (a @ v) == pytest.approx(alpha, abs=1e-10)
    vac = model.coherent_state(0.0, 5)
    assert vac[0] == 1.0 and np.all(vac[1:] == 0)


def test_hamiltonian_is_hermitian():
    p = PhysicalParams(g_phase=0.7, gamma_abs=0.3, omega_t=2.0, delta=0.4)
    dims = HilbertDims(n_field=4, n_trap=3)
    H = model.build_H_interaction(p, dims)
    assert linalg.max_asymmetry(H) < 1e-14
    assert H.shape == (dims.total, dims.total)


def test_level0_sector_only_sees_trap():
    p = PhysicalParams(gamma_abs=0.3, omega_t=2.0)
    dims = HilbertDims(n_field=3, n_trap=3)
    H = model.build_H_interaction(p, dims)
    # level-0 rows: indices 0 .. n_field*n_trap - 1
    d0 = dims.n_field * dims.n_trap
    block = H[:d0, :d0]
    trap = np.kron(np.eye(3), 2.0 * np.diag(np.arange(3.0)))
    assert np.allclose(block, trap)
    assert np.max(np.abs(H[:d0, d0:])) == 0.0


def test_blocks_reassemble_full_hamiltonian():
    p = PhysicalParams(g_phase=1.1, gamma_abs=0.25, omega_t=1.7, delta=0.3)
    dims = HilbertDims(n_field=5, n_trap=4)
    H = model.build_H_interaction(p, dims)
    H_blocks = model.assemble_from_blocks(p, dims)
    assert np.max(np.abs(H - H_blocks)) < 1e-14


def test_block_permutation_block_diagonalizes():
    p = PhysicalParams(gamma_abs=0.2, omega_t=1.0)
    dims = HilbertDims(n_field=4, n_trap=3)
    perm = model.block_permutation(dims)
    assert sorted(perm) == list(range(dims.total))
    H = model.build_H_interaction(p, dims)[np.ix_(
        model.block_permutation(dims), model.block_permutation(dims)
    )]
    # block sizes after the permutation: level-0 sector, then n = 0, the
    # doublet blocks, and the truncation top
    sizes = [dims.n_field * dims.n_trap, dims.n_trap]
    sizes += [2 * dims.n_trap] * (dims.n_field - 1)
    sizes += [dims.n_trap]
    edges = np.cumsum([0] + sizes)
    for a, b in zip(edges[:-1], edges[1:]):
        H[a:b, a:b] = 0.0
    assert np.max(np.abs(H)) == 0.0


def test_excitation_block_matrices_match_full_matrix_elements():
    p = PhysicalParams(g_phase=0.4, gamma_abs=0.3, omega_t=1.5, delta=0.2)
    dims = HilbertDims(n_field=4, n_trap=3)
    H = model.build_H_interaction(p, dims)
    for blk in model.excitation_blocks(p, dims):
        assert np.allclose(blk.matrix, H[np.ix_(blk.indices, blk.indices)])
        assert linalg.max_asymmetry(blk.matrix) < 1e-14


def test_initial_state_decoupling():
    p = PhysicalParams(alpha_drive=1.0, gamma_abs=0.2)
    dims = model.choose_truncation(p)
    psi = model.initial_state_decoupling(p, dims)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    # half the weight in level 0, half in level 1, none in level 2
    blocks = psi.reshape(3, dims.n_field * dims.n_trap)
    weights = np.sum(np.abs(blocks) ** 2, axis=1)
    assert np.allclose(weights, [0.5, 0.5, 0.0], atol=1e-12)


def test_initial_state_rejects_leaky_truncation():
    p = PhysicalParams(alpha_drive=4.0)
    with pytest.raises(ValueError, match="leaks"):
        model.initial_state_decoupling(p, HilbertDims(n_field=5, n_trap=1, leak_tol=1e-10))
