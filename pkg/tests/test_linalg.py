import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlab import linalg as la
from qlab.errors import DimensionMismatch, NotHermitian, NotSquare

seeds = st.integers(0, 2**31 - 1)
dims = st.sampled_from([1, 2, 3, 4, 8])


def test_as_matrix_rejects_nonsquare():
    with pytest.raises(NotSquare):
        la.as_matrix(np.zeros((2, 3)))


def test_hermitian_eig_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        la.hermitian_eig(np.array([[0, 1], [0, 0]]))


@given(seeds, dims)
def test_hermitian_eig_reconstructs(seed, n):
    A = la.random_hermitian(n, np.random.default_rng(seed))
    E = la.hermitian_eig(A)
    assert np.all(np.diff(E.eigenvalues) >= 0)
    assert la.is_unitary(E.eigenvectors)
    assert np.allclose(E.apply(lambda x: x), A, atol=1e-10)


@given(seeds, dims)
def test_svd_gauge_and_reconstruction(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    s = la.svd(A)
    assert np.allclose(s.apply_odd(lambda x: x), A, atol=1e-10)
    k = np.argmax(np.abs(s.right), axis=0)
    lead = s.right[k, np.arange(n)]
    assert np.allclose(lead.imag, 0, atol=1e-12) and np.all(lead.real > 0)


def test_svd_deterministic(rng):
    A = rng.normal(size=(4, 4))
    a, b = la.svd(A), la.svd(A.copy())
    assert np.array_equal(a.left, b.left) and np.array_equal(a.right, b.right)


@pytest.mark.parametrize("t", [0.0, 0.3, -1.7])
def test_matrix_exp_i_is_unitary_group(rng, t):
    H = la.random_hermitian(4, rng)
    U = la.matrix_exp_i(H, t)
    assert la.is_unitary(U)
    assert np.allclose(la.matrix_exp_i(H, t) @ la.matrix_exp_i(H, 0.5), la.matrix_exp_i(H, t + 0.5))


def test_matrix_exp_i_pauli_x():
    X = np.array([[0, 1], [1, 0]])
    t = 0.4
    assert np.allclose(la.matrix_exp_i(X, t), np.cos(t) * np.eye(2) - 1j * np.sin(t) * X, atol=1e-15)


def test_condition_number_singular_is_inf():
    assert la.condition_number(np.diag([1.0, 0.0])) == float("inf")
    assert la.condition_number(np.diag([2.0, 0.5])) == pytest.approx(4.0)


@given(seeds, dims)
def test_gershgorin_contains_spectrum(seed, n):
    A = la.random_hermitian(n, np.random.default_rng(seed))
    G = la.gershgorin_bounds(A)
    assert all(G.contains(float(x)) for x in np.linalg.eigvalsh(A))


@given(seeds, st.integers(1, 5))
def test_compose_error_hybrid_bound(seed, K):
    rng = np.random.default_rng(seed)
    exact = [la.random_unitary(4, rng) for _ in range(K)]
    approx = [U @ la.matrix_exp_i(1e-2 * la.random_hermitian(4, rng), 1) for U in exact]
    err = la.compose_error(exact, approx)
    assert err <= sum(la.op_norm(u - v) for u, v in zip(exact, approx)) + 1e-12


def test_compose_error_rejects_mismatch():
    with pytest.raises(DimensionMismatch):
        la.compose_error([np.eye(2)], [np.eye(4)])
    with pytest.raises(DimensionMismatch):
        la.compose_error([], [])


def test_ordered_product_order():
    A, B = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    assert np.array_equal(la.ordered_product([A, B]), B @ A)


@given(seeds, st.integers(1, 16))
def test_complete_unitary_first_column(seed, n):
    v = la.random_state(n, np.random.default_rng(seed))
    Q = la.complete_unitary(v)
    assert la.is_unitary(Q)
    assert np.allclose(Q[:, 0], v, atol=1e-12)


def test_kron_and_dagger():
    X = np.array([[0, 1], [1, 0]])
    assert la.kron(X, np.eye(2)).shape == (4, 4)
    assert np.array_equal(la.dagger(np.array([[1j, 2]])), np.array([[-1j], [2]]))
