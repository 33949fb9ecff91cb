import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realitykit.errors import BadRank, DomainError, LayoutMismatch, NotHermitian, NotNormalized, NotPositive
from realitykit.qstate import (
    DensityOperator,
    ProjectiveObservable,
    eig_hermitian,
    haar_pure,
    kron,
    matrix_function,
    matrix_power,
    maximally_mixed,
    operator_norm,
    partial_trace,
    random_density,
    singlet,
    spin_projectors,
    support_projector,
    werner_state,
    xlogx,
)

SZ = np.diag([1.0, -1.0])


def test_eig_identity_and_pauli():
    vals, _ = eig_hermitian(np.eye(4))
    np.testing.assert_allclose(vals, np.ones(4))
    vals, _ = eig_hermitian(SZ)
    np.testing.assert_allclose(vals, [1.0, -1.0])


def test_eig_reconstruction_and_order(rng):
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = a + a.conj().T
    vals, vecs = eig_hermitian(h)
    assert np.all(np.diff(vals) <= 0)
    assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - h)) <= 1e-10
    assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(8))) <= 1e-10


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_matrix_function_examples():
    rho = random_density(3, seed=1).matrix
    np.testing.assert_allclose(matrix_function(rho, lambda x: x), rho, atol=1e-12)
    np.testing.assert_allclose(matrix_function(np.diag([0.5, 0.5]), lambda x: x**2), np.diag([0.25, 0.25]), atol=1e-15)
    np.testing.assert_allclose(xlogx(np.eye(2) / 2), np.diag([-math.log(2) / 2] * 2), atol=1e-15)


def test_matrix_function_domain_error():
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, 0.0]), math.log)
    # with the zero convention the log is suppressed on the kernel
    out = matrix_function(np.diag([1.0, 0.0]), math.log, at_zero=0.0)
    np.testing.assert_allclose(out, np.zeros((2, 2)), atol=1e-15)


def test_matrix_power_pseudo_inverse():
    np.testing.assert_allclose(matrix_power(np.diag([0.25, 0.0]), -1.0), np.diag([4.0, 0.0]))
    np.testing.assert_allclose(matrix_power(np.diag([0.25, 0.0]), 0.5), np.diag([0.5, 0.0]))


def test_partial_trace_examples():
    a = random_density(2, seed=3)
    b = random_density(3, seed=4)
    ab = kron(a, b)
    np.testing.assert_allclose(partial_trace(ab, keep=[0]).matrix, a.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(ab, keep=[1]).matrix, b.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(singlet(), keep=[1]).matrix, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_three_parties_and_errors():
    rho = random_density(12, seed=5, dims=(2, 3, 2))
    ac = partial_trace(rho, keep=[0, 2])
    assert ac.dims == (2, 2)
    assert abs(np.trace(ac.matrix) - 1) <= 1e-12
    with pytest.raises(LayoutMismatch):
        partial_trace(np.eye(6) / 6, dims=(2, 2), keep=[0])
    with pytest.raises(LayoutMismatch):
        partial_trace(rho, keep=[5])


def test_partial_trace_linear(rng):
    m1 = random_density(6, seed=1).matrix
    m2 = random_density(6, seed=2).matrix
    lhs = partial_trace(0.3 * m1 + 0.7 * m2, dims=(2, 3), keep=[0])
    rhs = 0.3 * partial_trace(m1, dims=(2, 3), keep=[0]) + 0.7 * partial_trace(m2, dims=(2, 3), keep=[0])
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)


def test_kron_examples():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kron(SZ, SZ), np.diag([1.0, -1.0, -1.0, 1.0]))
    a, b = random_density(2, seed=1), random_density(3, seed=2)
    assert abs(np.trace(kron(a.matrix, b.matrix)) - 1) <= 1e-12


def test_support_projector_examples():
    np.testing.assert_allclose(support_projector(random_density(3, seed=1).matrix), np.eye(3), atol=1e-10)
    psi = haar_pure(3, seed=2).matrix
    np.testing.assert_allclose(support_projector(psi), psi, atol=1e-10)
    np.testing.assert_allclose(support_projector(np.diag([0.5, 0.5, 0, 0])), np.diag([1.0, 1, 0, 0]))
    rho = random_density(4, rank=2, seed=3).matrix
    p = support_projector(rho)
    assert np.max(np.abs(rho @ p - rho)) <= 1e-8
    assert np.max(np.abs(p @ p - p)) <= 1e-10


def test_operator_norm_examples():
    assert operator_norm(np.eye(3) / 3) == pytest.approx(1 / 3)
    assert operator_norm(haar_pure(3, seed=1).matrix) == pytest.approx(1.0)
    assert operator_norm(werner_state(0.5).matrix) == pytest.approx(0.625, abs=1e-14)


def test_density_operator_validation():
    with pytest.raises(NotNormalized):
        DensityOperator(np.eye(2))
    with pytest.raises(NotPositive):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(NotHermitian):
        DensityOperator(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(LayoutMismatch):
        DensityOperator(np.eye(4) / 4, (2, 3))
    clipped = DensityOperator(np.diag([1 + 5e-11, -5e-11]))
    assert np.min(np.linalg.eigvalsh(clipped.matrix)) >= 0
    assert np.trace(clipped.matrix).real == pytest.approx(1.0, abs=1e-15)


def test_random_density_rank_and_determinism():
    assert haar_pure(4, seed=1).purity() == pytest.approx(1.0, abs=1e-10)
    a = random_density(4, rank=2, seed=11)
    b = random_density(4, rank=2, seed=11)
    assert np.array_equal(a.matrix, b.matrix)
    assert np.linalg.matrix_rank(a.matrix, tol=1e-10) == 2
    with pytest.raises(BadRank):
        random_density(3, rank=4)


def test_random_density_mean_is_maximally_mixed():
    rng = np.random.default_rng(0)
    mean = sum(random_density(3, seed=int(s)).matrix for s in rng.integers(0, 2**31, 10_000)) / 10_000
    assert np.max(np.abs(mean - np.eye(3) / 3)) < 0.01


def test_spin_projector_examples():
    plus, minus = spin_projectors(0.0, 0.0)
    np.testing.assert_allclose(plus, np.diag([1.0, 0.0]), atol=1e-15)
    np.testing.assert_allclose(minus, np.diag([0.0, 1.0]), atol=1e-15)
    plus, _ = spin_projectors(0.0, math.pi / 2)
    np.testing.assert_allclose(plus, np.full((2, 2), 0.5), atol=1e-15)


@given(st.floats(-10, 10), st.floats(-10, 10))
@settings(max_examples=200, deadline=None)
def test_spin_projectors_algebra_and_continuity(theta, phi):
    plus, minus = spin_projectors(theta, phi)
    assert np.max(np.abs(plus + minus - np.eye(2))) <= 1e-12
    assert np.max(np.abs(plus @ minus)) <= 1e-12
    p2, _ = spin_projectors(theta + 1e-6, phi + 1e-6)
    assert np.max(np.abs(p2 - plus)) <= 1e-5


def test_observable_validation():
    from realitykit.errors import InvalidObservable

    with pytest.raises(InvalidObservable):
        ProjectiveObservable(0, (np.diag([1.0, 0.0]), np.diag([1.0, 0.0])))
    with pytest.raises(InvalidObservable):
        ProjectiveObservable.from_basis(np.eye(2), 0, (1.0, 1.0))
    with pytest.raises(InvalidObservable):
        ProjectiveObservable(0, (np.eye(2),))


def test_maximally_mixed_layout():
    m = maximally_mixed((2, 3))
    assert m.dims == (2, 3)
    np.testing.assert_allclose(m.matrix, np.eye(6) / 6)


@given(st.integers(0, 2**31 - 1), st.integers(1, 6))
@settings(max_examples=50, deadline=None)
def test_random_states_are_valid(seed, rank):
    rho = random_density(6, rank=rank, seed=seed, dims=(2, 3))
    m = rho.matrix
    assert np.max(np.abs(m - m.conj().T)) <= 1e-12
    assert abs(np.trace(m).real - 1) <= 1e-12
    assert np.linalg.eigvalsh(m)[0] >= -1e-10
    ab = partial_trace(rho, keep=[0])
    assert abs(np.trace(ab.matrix).real - 1) <= 1e-12
