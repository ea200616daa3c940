import math

import numpy as np
import pytest

from macrosize import quantum
from macrosize.errors import DomainError, TruncationError
from macrosize.fisher import variance

from conftest import random_hermitian


def test_eigh_pauli_z():
    spec = quantum.eigh(np.diag([1.0, -1.0]).astype(complex))
    assert np.allclose(spec.eigenvalues, [1.0, -1.0])


def test_eigh_position_two_level():
    # x in a dim-2 truncation with nu = 1/2 has +-1/sqrt(2) eigenvalues.
    _a, x, _p = quantum.fock_operators(2, nu=0.5)
    spec = quantum.eigh(x)
    assert np.allclose(spec.eigenvalues, [1.0 / math.sqrt(2), -1.0 / math.sqrt(2)])


def test_eigh_reconstruction_residual(rng):
    h = random_hermitian(rng, 8)
    spec = quantum.eigh(h)
    residual = np.max(np.abs(spec.reconstruct() - h))
    assert residual <= 1e-9 * max(1e-300, np.max(np.abs(h)))


@pytest.mark.parametrize("dim", [2, 5, 16, 64])
def test_eigh_roundtrip_up_to_dim_64(rng, dim):
    h = random_hermitian(rng, dim, scale=3.0)
    spec = quantum.eigh(h)
    assert np.max(np.abs(spec.reconstruct() - h)) <= 1e-9 * np.max(np.abs(h))
    # descending order and orthonormality
    assert np.all(np.diff(spec.eigenvalues) <= 1e-12)
    gram = spec.eigenvectors.conj().T @ spec.eigenvectors
    assert np.max(np.abs(gram - np.eye(dim))) <= 1e-9


def test_eigh_deterministic_phase(rng):
    h = random_hermitian(rng, 6)
    s1 = quantum.eigh(h)
    s2 = quantum.eigh(h.copy())
    assert np.array_equal(s1.eigenvectors, s2.eigenvectors)
    for k in range(6):
        col = s1.eigenvectors[:, k]
        lead = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(lead.imag) <= 1e-12 and lead.real > 0


def test_eigh_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(DomainError, match="asymmetry"):
        quantum.eigh(bad)


def test_fock_matrix_element():
    _a, x, _p = quantum.fock_operators(3, nu=0.5)
    assert x[0, 1] == pytest.approx(1.0 / math.sqrt(2), abs=1e-15)
    assert x[1, 2] == pytest.approx(1.0, abs=1e-15)  # sqrt(nu * 2) = 1


def test_vacuum_position_mean_zero():
    _a, x, _p = quantum.fock_operators(8, nu=0.5)
    assert quantum.expectation(quantum.vacuum_state(8), x) == pytest.approx(0.0, abs=1e-15)


def test_canonical_commutator_bulk():
    dim, hbar = 12, 1.0
    _a, x, p = quantum.fock_operators(dim, nu=0.5, hbar=hbar)
    comm = x @ p - p @ x
    diag = np.diag(comm)
    assert np.allclose(diag[: dim - 1], 1j * hbar, atol=1e-12)
    # the truncation artifact is confined to the top level
    assert diag[dim - 1] != pytest.approx(1j * hbar, abs=0.5)


def test_fock_operators_reject_small_dim():
    with pytest.raises(DomainError):
        quantum.fock_operators(1)


def test_thermal_diagonal_geometric():
    rho = quantum.thermal_state(1.0, 60)
    n = np.arange(60)
    expected = 0.5 * 0.5**n
    assert np.allclose(np.real(np.diag(rho)), expected, atol=1e-12)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)


def test_cat_symmetry_and_purity():
    rho = quantum.cat_state(2.0, 30)
    quantum.validate_density(rho)
    _a, x, _p = quantum.fock_operators(30, nu=0.5)
    assert quantum.expectation(rho, x) == pytest.approx(0.0, abs=1e-10)
    assert quantum.purity(rho) == pytest.approx(1.0, abs=1e-10)


def test_coherent_displacement_identity():
    dim = 40
    rho = quantum.coherent_state(1.5, dim)
    a = quantum.annihilation(dim)
    mean_a = np.trace(rho @ a)
    assert mean_a.real == pytest.approx(1.5, abs=1e-8)
    assert mean_a.imag == pytest.approx(0.0, abs=1e-10)


def test_make_state_constructors_pass_invariants():
    for kind, params in [
        ("vacuum", {}),
        ("number", {"n": 3}),
        ("coherent", {"alpha": 1.2}),
        ("cat", {"alpha": 1.5}),
        ("thermal", {"nbar": 0.7}),
        ("squeezed", {"r": 0.6}),
    ]:
        rho = quantum.make_state(kind, 40, **params)
        quantum.validate_density(rho)


def test_truncation_error_with_suggested_dim():
    with pytest.raises(TruncationError) as excinfo:
        quantum.thermal_state(5.0, 60)
    err = excinfo.value
    assert err.tail_weight >= 1e-8
    assert err.suggested_dim > 60
    # the suggestion is actionable
    quantum.thermal_state(5.0, err.suggested_dim)


def test_tail_weight_monotone_in_dim():
    for kind, params in [
        ("thermal", {"nbar": 1.0}),
        ("cat", {"alpha": 2.0}),
        ("coherent", {"alpha": 2.0}),
    ]:
        tails = [quantum.state_tail_weight(kind, d, **params) for d in (20, 30, 45, 60)]
        assert all(t1 >= t2 - 1e-17 for t1, t2 in zip(tails, tails[1:]))


def test_ghz_qfi_value():
    from macrosize.fisher import qfi

    rho, obs = quantum.ghz_state(3, 0.5)
    assert qfi(rho, obs.total).value == pytest.approx(36.0, rel=1e-10)


def test_ghz_product_limit():
    from macrosize.fisher import qfi

    rho, obs = quantum.ghz_state(3, 0.0)
    assert qfi(rho, obs.total).value == pytest.approx(0.0, abs=1e-10)


def test_ghz_variance_two_point():
    rho, obs = quantum.ghz_state(4, 0.3)
    assert variance(rho, obs.total) == pytest.approx(4 * 16 * 0.3 * 0.7, rel=1e-12)


def test_ghz_rejects_large_register():
    with pytest.raises(DomainError, match="GB"):
        quantum.ghz_state(13, 0.5)


def test_mix_identity_and_tensor_trace():
    rho = quantum.thermal_state(0.5, 40)
    sigma = quantum.vacuum_state(40)
    assert np.allclose(quantum.mix(1.0, rho, sigma), rho)
    qubit = np.diag([0.7, 0.3]).astype(complex)
    prod = quantum.tensor(quantum.vacuum_state(2), qubit)
    assert prod.shape == (4, 4)
    assert np.trace(prod).real == pytest.approx(1.0, abs=1e-12)


def test_variance_additive_on_products(rng):
    from conftest import random_density

    for _ in range(5):
        rho = random_density(rng, 2)
        sigma = random_density(rng, 2)
        a = random_hermitian(rng, 2)
        b = random_hermitian(rng, 2)
        eye = np.eye(2, dtype=complex)
        joint = quantum.tensor(rho, sigma)
        obs = quantum.tensor(a, eye) + quantum.tensor(eye, b)
        assert variance(joint, obs) == pytest.approx(
            variance(rho, a) + variance(sigma, b), abs=1e-12
        )


def test_tensor_dim_cap():
    big = np.eye(100, dtype=complex)
    with pytest.raises(DomainError, match="cap"):
        quantum.tensor(big, big)
