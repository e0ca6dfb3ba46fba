from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import chebyshev as cheb

from qlab import qsvt
from qlab.block_encoding import be_exact, be_sparse, dilate
from qlab.errors import (ConditionNumberUnderestimated, GapViolated, NotStochastic,
                         OverlapBelowDelta, PhaseLengthMismatch, SubnormalizedInput)
from qlab.experiments import random_contraction, random_gapped, random_sparse
from qlab.linalg import is_unitary, matrix_exp_i
from qlab.qsp import ChebyshevPoly, PhaseFactors, convert, qsp_poly, solve_phases, zero_phases

seeds = st.integers(0, 2**31 - 1)


def herm_sparse_be(n, rng):
    A = random_sparse(n, 2, rng, hermitian=True)
    enc = be_sparse(A, "hermitian")
    return replace(enc, alpha=1.0, matrix=A / enc.alpha)


@pytest.mark.parametrize("k", range(0, 9))
@pytest.mark.parametrize("path", ["hermitian", "general_on_hermitian", "qsvt"])
def test_chebyshev_be(k, path):
    rng = np.random.default_rng(k)
    if path == "hermitian":
        enc, herm = herm_sparse_be(2, rng), True
    elif path == "general_on_hermitian":
        H = random_contraction(2, rng, "hermitian")
        enc, herm = be_exact(H), True
    else:
        enc, herm = be_exact(random_contraction(3, rng)), False
    ref = qsvt.chebyshev_transform(enc.matrix, k, herm)
    assert np.linalg.norm(qsvt.chebyshev_be(enc, k).block - ref, 2) <= 1e-9


def test_chebyshev_requires_exact():
    enc = be_exact(np.eye(2) / 2)
    with pytest.raises(SubnormalizedInput):
        qsvt.chebyshev_be(replace(enc, alpha=2.0), 2)


@given(seeds)
def test_qubitization_block(seed):
    enc = herm_sparse_be(2, np.random.default_rng(seed))
    for i in range(4):
        B, expected = qsvt.qubitization_block(enc, i)
        assert np.allclose(B, expected, atol=1e-10)


def random_phases(d, rng):
    return PhaseFactors(rng.uniform(-np.pi, np.pi, d + 1))


@given(seeds, st.integers(1, 6), st.booleans())
def test_qet_block_equals_qsvt_oracle(seed, d, hermitian_input):
    rng = np.random.default_rng(seed)
    if hermitian_input:
        A = random_contraction(2, rng, "hermitian")
    else:
        A = random_contraction(2, rng)
    ph = random_phases(d, rng)
    poly = lambda x: qsp_poly(x, ph)
    par = "even" if d % 2 == 0 else "odd"
    full = qsvt.qet_apply(be_exact(A), ph, real_part=False)
    assert np.allclose(full.block, qsvt.poly_transform(A, poly, par), atol=1e-10)
    real = qsvt.qet_apply(be_exact(A), ph, real_part=True)
    assert np.allclose(real.block, qsvt.poly_transform(A, lambda x: poly(x).real, par), atol=1e-10)
    assert is_unitary(real.unitary)


@given(seeds, st.integers(1, 6))
def test_qet_hermitian_be_matches_matrix_function(seed, d):
    rng = np.random.default_rng(seed)
    enc = herm_sparse_be(2, rng)
    ph = random_phases(d, rng)
    out = qsvt.qet_apply(enc, ph, real_part=True)
    ref = qsvt.poly_transform(enc.matrix, lambda x: qsp_poly(x, ph).real, "none", hermitian_be=True)
    assert np.allclose(out.block, ref, atol=1e-10)


def test_qet_on_hermitian_agrees_with_qsvt_on_dilation(rng):
    A = random_contraction(1, rng)
    dil = dilate(be_exact(A))
    ph = random_phases(3, rng)
    out = qsvt.qet_apply(dil, ph, real_part=True)
    ref = qsvt.poly_transform(dil.matrix, lambda x: qsp_poly(x, ph).real, "odd", hermitian_be=True)
    assert np.allclose(out.block, ref, atol=1e-10)
    # The odd transform of the dilation carries p^diamond(A) off the diagonal.
    odd = qsvt.poly_transform(A, lambda x: qsp_poly(x, ph).real, "odd")
    assert np.allclose(out.block[2:, :2], odd, atol=1e-10)


@pytest.mark.parametrize("conv", ["W", "O", "tilde"])
def test_qet_convention_independent(conv, rng):
    A = random_contraction(1, rng, "hermitian")
    ph = random_phases(4, rng)
    a = qsvt.qet_apply(be_exact(A), ph).block
    b = qsvt.qet_apply(be_exact(A), convert(ph, conv)).block
    assert np.allclose(a, b, atol=1e-12)


def test_qet_zero_phases_zero_block(rng):
    A = random_contraction(2, rng, "hermitian")
    assert np.allclose(qsvt.qet_apply(be_exact(A), zero_phases(5)).block, 0, atol=1e-12)


def test_qet_phase_length_mismatch(rng):
    with pytest.raises(PhaseLengthMismatch):
        qsvt.qet_circuit(be_exact(np.eye(2) / 2), zero_phases(3), degree=4)


def test_qet_solved_target(rng):
    f = ChebyshevPoly(np.array([0, 0.4, 0, -0.3]), "odd")
    ph = solve_phases(f)
    A = random_contraction(2, rng)
    ref = qsvt.poly_transform(A, f, "odd")
    assert np.allclose(qsvt.qet_apply(be_exact(A), ph).block, ref, atol=1e-10)


def test_qet_query_count(rng):
    qc = qsvt.qet_circuit(be_exact(random_contraction(1, rng)), random_phases(5, rng))
    assert qc.circuit.count("UA") + qc.circuit.count("UAdg") == 5
    assert qc.circuit.count("UA") == 3


@pytest.mark.parametrize("t", [0.0, 1.0, 4 * np.pi])
def test_hamsim(t, rng):
    H = random_contraction(2, rng, "hermitian")
    res = qsvt.hamsim_qet(be_exact(H), t, eps=1e-6)
    assert res.error <= 1e-6
    ref = matrix_exp_i(H, -t)
    assert np.linalg.norm(2 * res.beta * res.be.block - ref, 2) <= 1e-6


def test_hamsim_fixed_degree(rng):
    H = random_contraction(2, rng, "hermitian")
    res = qsvt.hamsim_qet(be_exact(H), 4 * np.pi, degree=50)
    assert res.error <= 1e-6 and res.degree == 50 and max(res.residuals) <= 1e-12


def test_ground_state_filter(rng):
    H, lam0 = random_gapped(3, 0.2, rng)
    init = np.ones(8) / np.sqrt(8)
    r = qsvt.ground_state_filter(be_exact(H), lam0 + 0.1, 0.2, 1e-3, init)
    assert r.success_prob >= r.p0 * (1 - 1e-3) - 1e-6
    assert r.fidelity >= 1 - 1e-2
    state, prob = r
    assert prob == r.success_prob


def test_ground_state_gap_violation():
    H = np.diag([0.1, 0.45, 0.9])
    H = np.pad(H, ((0, 1), (0, 1)))
    with pytest.raises(GapViolated):
        qsvt.ground_state_filter(be_exact(H), 0.4, 0.2, 1e-3, np.ones(4) / 2)


@pytest.mark.parametrize("kappa,degree", [(10, 81), (5, None)])
def test_qsvt_linear_solve(kappa, degree):
    A = np.diag([1 / kappa, 1.0]).astype(complex)
    r = qsvt.qsvt_linear_solve(be_exact(A), np.array([1, 1]) / np.sqrt(2), kappa, 1e-3, degree=degree)
    assert r.fidelity >= 0.999
    assert r.bound_error <= r.epsilon_prime + 1e-12


def test_qsvt_linear_solve_general(rng):
    Q1 = np.linalg.qr(rng.normal(size=(2, 2)))[0]
    Q2 = np.linalg.qr(rng.normal(size=(2, 2)))[0]
    A = Q1 @ np.diag([0.2, 0.9]) @ Q2
    r = qsvt.qsvt_linear_solve(be_exact(A), np.array([1.0, 0.0]), 5, 1e-3)
    assert r.fidelity >= 0.999


def test_condition_number_underestimated():
    with pytest.raises(ConditionNumberUnderestimated):
        qsvt.qsvt_linear_solve(be_exact(np.diag([0.05, 1.0])), [1, 0], 10, 1e-3)


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_szegedy_unmarked_and_marked(N):
    for k in range(6):
        assert qsvt.szegedy(N, None, k)[1] == pytest.approx(1, abs=1e-12)
        c = np.zeros(k + 1)
        c[k] = 1
        closed = 1 / N + (1 - 1 / N) * cheb.chebval(1 - 1 / N, c)
        assert qsvt.szegedy(N, 0, k)[1] == pytest.approx(closed, abs=1e-10)


def test_szegedy_marked_value_at_k4():
    assert qsvt.szegedy(16, 0, 4)[1] == pytest.approx(0.2017746, abs=1e-7)


@pytest.mark.parametrize("N", [4, 8])
def test_walk_eigenphases(N):
    walk, _ = qsvt.szegedy(N, 0, 1)
    phases, pred = qsvt.walk_eigenphases(walk)
    for q in pred:
        assert np.min(np.abs(np.angle(np.exp(1j * (phases - q))))) <= 1e-8
    assert walk.discriminant_be.hermitian and is_unitary(walk.walk_op)


def test_not_stochastic():
    with pytest.raises(NotStochastic):
        qsvt.szegedy_walk(np.array([[0.5, 0.6], [0.5, 0.5]]))


def test_c_pi_not_identity():
    Pi = np.diag([1, 0, 0, 1]).astype(complex)
    X = np.array([[0, 1], [1, 0]])
    assert np.allclose(qsvt.c_pi_not(Pi), np.kron(X, Pi) + np.kron(np.eye(2), np.eye(4) - Pi))


@pytest.mark.parametrize("M", [1, 2, 3])
def test_fixed_point_aa(M):
    n = 4
    Hn = np.array([[1.0]])
    for _ in range(n):
        Hn = np.kron(Hn, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    Pg = np.zeros((16, 16))
    Pg[range(M), range(M)] = 1
    eps = 1e-2
    r = qsvt.fixed_point_aa(Hn, Pg, 0.25, eps)
    assert r.distance <= np.sqrt(2) * eps + eps**2


def test_fixed_point_overlap_below_delta():
    with pytest.raises(OverlapBelowDelta):
        qsvt.fixed_point_aa(np.eye(4), np.diag([0, 1, 0, 0]), 0.5, 1e-2)


def test_sign_polynomial_error():
    p = qsvt.sign_polynomial(0.25, 1e-2)
    assert p.error <= 1e-4 and p.parity == "odd"
