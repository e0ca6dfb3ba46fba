from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlab import block_encoding as be
from qlab.errors import (DimensionMismatch, InhomogeneousBlocks, MaxNormExceeded, NormExceedsOne,
                         NotBanded, NotHermitian, NotUnitary, PreconditionViolated)
from qlab.experiments import random_banded, random_contraction, random_sparse
from qlab.hamiltonians import tfim
from qlab.linalg import is_hermitian, is_unitary, matrix_exp_i, random_unitary

seeds = st.integers(0, 2**31 - 1)
ns = st.integers(1, 3)


@given(seeds, ns)
def test_be_exact_svd(seed, n):
    A = random_contraction(n, np.random.default_rng(seed))
    enc = be.be_exact(A)
    assert enc.m == 1 and be.be_verify(enc, A) <= 1e-12


@given(seeds, ns)
def test_be_exact_diagonal(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 1, 2**n) * np.exp(2j * np.pi * rng.uniform(size=2**n))
    assert be.be_verify(be.be_exact(np.diag(a), "diagonal"), np.diag(a)) <= 1e-12


def test_be_exact_errors():
    with pytest.raises(NormExceedsOne):
        be.be_exact(2 * np.eye(2))
    with pytest.raises(PreconditionViolated):
        be.be_exact(np.ones((2, 2)) / 2, "diagonal")
    with pytest.raises(DimensionMismatch):
        be.be_exact(np.eye(3) / 2)


@given(seeds, ns, st.integers(1, 40))
def test_racbem(seed, n, depth):
    enc = be.racbem(n, depth, seed)
    assert be.be_verify(enc, enc.matrix) <= 1e-12


@given(seeds, st.integers(2, 3))
def test_be_banded(seed, n):
    A = random_banded(n, np.random.default_rng(seed))
    enc = be.be_sparse(A, "banded")
    assert be.be_verify(enc, A) <= 1e-12


@given(seeds, ns, st.integers(1, 8))
def test_be_general_sparse(seed, n, s):
    A = random_sparse(n, min(s, 2**n), np.random.default_rng(seed))
    enc = be.be_sparse(A, "general")
    assert enc.m == n + 1
    assert be.be_verify(enc, A) <= 1e-12


@given(seeds, ns, st.integers(1, 8))
def test_be_hermitian_sparse(seed, n, s):
    A = random_sparse(n, min(s, 2**n), np.random.default_rng(seed), hermitian=True)
    enc = be.be_sparse(A, "hermitian")
    assert enc.m == n + 2 and enc.hermitian
    assert is_hermitian(enc.unitary, 1e-10)
    assert be.be_verify(enc, A) <= 1e-12


def test_sparse_errors():
    with pytest.raises(MaxNormExceeded):
        be.be_sparse(2 * np.eye(2), "general")
    with pytest.raises(NotHermitian):
        be.be_sparse(np.array([[0, 1], [0, 0]]), "hermitian")
    A = np.zeros((8, 8))
    A[0, 4] = 1
    with pytest.raises(NotBanded):
        be.be_sparse(A, "banded", band=(0, 2))


def test_be_verify_rejects():
    enc = be.be_exact(np.eye(2) / 2)
    with pytest.raises(DimensionMismatch):
        be.be_verify(enc, np.eye(4))
    with pytest.raises(NotUnitary):
        be.be_verify(replace(enc, unitary=2 * enc.unitary), np.eye(2))


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2), (3, 0)])
def test_z_pi_circuit(m, n):
    assert np.allclose(be.z_pi_from_circuit(m, n), be.z_pi(m, n))


@given(seeds, st.integers(1, 4))
def test_lcu_complex_coefficients(seed, K):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.1, 1, K) * np.exp(2j * np.pi * rng.uniform(size=K))
    Us = [random_unitary(4, rng) for _ in range(K)]
    enc = be.lcu(c, [be.unitary_be(U) for U in Us])
    assert enc.alpha == pytest.approx(np.sum(np.abs(c)))
    assert be.be_verify(enc, sum(a * U for a, U in zip(c, Us))) <= 1e-12


def test_lcu_two_unitaries_alpha_two():
    rng = np.random.default_rng(0)
    U0, U1 = random_unitary(2, rng), random_unitary(2, rng)
    enc = be.lcu([1, 1], [be.unitary_be(U0), be.unitary_be(U1)])
    assert enc.alpha == 2 and enc.m == 1
    assert be.be_verify(enc, U0 + U1) <= 1e-12


def test_lcu_inhomogeneous():
    with pytest.raises(InhomogeneousBlocks):
        be.lcu([1, 1], [be.unitary_be(np.eye(2)), be.unitary_be(np.eye(4))])


@pytest.mark.parametrize("n,periodic,uniform", [(2, False, False), (3, True, False), (4, True, True)])
def test_pauli_lcu_tfim(n, periodic, uniform):
    H = tfim(n, 1.0, periodic)
    enc = be.pauli_lcu(H, uniform_prepare=uniform)
    assert enc.alpha == pytest.approx(sum(abs(t.coefficient) for t in H.terms))
    assert be.be_verify(enc, H.matrix()) <= 1e-12


def test_fourier_series_cos():
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    enc = be.fourier_series_be(X, {1: 0.5, -1: 0.5})
    assert be.be_verify(enc, np.cos(1) * np.eye(2)) <= 1e-12
    assert np.allclose(matrix_exp_i(X, -1), np.cos(1) * np.eye(2) + 1j * np.sin(1) * X)


@given(seeds, ns)
def test_dilation_consistency(seed, n):
    A = random_contraction(n, np.random.default_rng(seed))
    d = be.dilate(be.be_exact(A))
    Z = np.zeros_like(A)
    assert d.hermitian and is_hermitian(d.unitary) and is_unitary(d.unitary)
    assert d.m == 1 and d.n == n + 1
    assert be.be_verify(d, np.block([[Z, A.conj().T], [A, Z]])) <= 1e-12


@given(seeds, ns)
def test_dilation_eigenpairs(seed, n):
    A = random_contraction(n, np.random.default_rng(seed))
    d = be.dilate(be.be_exact(A))
    W, s, Vh = np.linalg.svd(A)
    for i, sigma in enumerate(s):
        for sign in (1, -1):
            vec = np.concatenate([Vh[i].conj(), sign * W[:, i]]) / np.sqrt(2)
            assert np.linalg.norm(d.block @ vec - sign * sigma * vec) <= 1e-10


def test_dilation_requires_exact():
    with pytest.raises(PreconditionViolated):
        be.dilate(replace(be.be_exact(np.eye(2) / 2), epsilon=1e-3))


@given(seeds)
def test_json_roundtrip(seed):
    enc = be.racbem(2, 10, seed)
    back = be.be_from_json(be.be_to_json(enc))
    assert np.array_equal(back.unitary, enc.unitary) and back.m == enc.m and back.n == enc.n


def test_postselect_apply_and_dagger(rng):
    A = random_contraction(2, rng)
    enc = be.be_exact(A)
    b = np.array([1, 0, 0, 0])
    state, p = be.postselect_apply(enc, b)
    assert p == pytest.approx(np.linalg.norm(A @ b) ** 2)
    assert np.allclose(state, A @ b / np.linalg.norm(A @ b))
    assert be.be_verify(enc.dagger(), A.conj().T) <= 1e-12
    assert be.apply_state(enc, b).n == 3
