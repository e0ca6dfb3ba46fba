import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlab import simulator as sim
from qlab.errors import (DimensionCap, DimensionMismatch, EmptyKeepSet, NotNormalized,
                         NotUnitary, QubitIndexOutOfRange, ZeroProbabilityBranch)
from qlab.linalg import random_state, random_unitary

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]])


def test_qubit_zero_is_msb():
    out = sim.apply(sim.Circuit(2).x(0), sim.QuantumState.zero(2))
    assert np.allclose(out.amplitudes, [0, 0, 1, 0])


def test_cnot_and_bell_state():
    c = sim.Circuit(2).h(0).add("CNOT", [0, 1])
    out = sim.apply(c, sim.QuantumState.zero(2))
    assert np.allclose(out.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_zero_polarity_control():
    c = sim.Circuit(2).add("X", [1], [(0, 0)])
    assert np.allclose(sim.circuit_unitary(c), np.kron(np.diag([0, 1]), np.eye(2)) + np.kron(np.diag([1, 0]), X))


@pytest.mark.parametrize("kind,param", [("H", None), ("S", None), ("T", None), ("Rz", 0.3),
                                        ("Ry", -1.1), ("Rx", 2.0), ("Y", None)])
def test_inverse_circuit(kind, param):
    c = sim.Circuit(2).add(kind, [1], param=param).add(kind, [0], [(1, 1)], param=param)
    U = sim.circuit_unitary(c)
    assert np.allclose(sim.circuit_unitary(c.inverse()) @ U, np.eye(4), atol=1e-14)


def test_rotation_conventions():
    th = 0.7
    assert np.allclose(sim.rz(th), np.diag([np.exp(-0.5j * th), np.exp(0.5j * th)]))
    assert np.allclose(sim.ry(th) @ [1, 0], [np.cos(th / 2), np.sin(th / 2)])


@given(st.integers(0, 2**31 - 1), st.integers(1, 4))
def test_circuit_unitary_matches_apply(seed, n):
    rng = np.random.default_rng(seed)
    c = sim.Circuit(n)
    for _ in range(5):
        q = int(rng.integers(n))
        c.custom(random_unitary(2, rng), [q])
        if n > 1:
            a, b = rng.choice(n, 2, replace=False)
            c.add("CNOT", [int(a), int(b)])
    U = sim.circuit_unitary(c)
    psi = random_state(2**n, rng)
    assert np.allclose(U @ psi, sim.apply(c, sim.QuantumState(n, psi)).amplitudes, atol=1e-12)
    assert np.allclose(U.conj().T @ U, np.eye(2**n), atol=1e-12)


def test_custom_multi_qubit_target_order():
    U = np.kron(H, X)
    c = sim.Circuit(3).custom(U, [2, 0])
    # Reorder: the matrix acts on (q2, q0).
    ref = np.zeros((8, 8), dtype=complex)
    for i in range(8):
        b = [(i >> 2) & 1, (i >> 1) & 1, i & 1]
        for j in range(8):
            bb = [(j >> 2) & 1, (j >> 1) & 1, j & 1]
            if b[1] == bb[1]:
                ref[i, j] = U[2 * b[2] + b[0], 2 * bb[2] + bb[0]]
    assert np.allclose(sim.circuit_unitary(c), ref)


def test_errors():
    with pytest.raises(QubitIndexOutOfRange):
        sim.Circuit(2).add("X", [2])
    with pytest.raises(QubitIndexOutOfRange):
        sim.Circuit(2).add("X", [0], [(0, 1)])
    with pytest.raises(NotUnitary):
        sim.Circuit(1).custom(np.diag([1, 2]), [0])
    with pytest.raises(DimensionMismatch):
        sim.Circuit(2).custom(np.eye(2), [0, 1])
    with pytest.raises(NotNormalized):
        sim.QuantumState(1, [1, 1])
    with pytest.raises(DimensionCap):
        sim.circuit_unitary(sim.Circuit(15))
    with pytest.raises(DimensionMismatch):
        sim.apply(sim.Circuit(1), sim.QuantumState.zero(2))
    with pytest.raises(ZeroProbabilityBranch):
        sim.postselect(sim.QuantumState.zero(1), [0], "1")
    with pytest.raises(EmptyKeepSet):
        sim.partial_trace(sim.QuantumState.zero(1), [])


def test_measure_is_seeded():
    psi = sim.apply(sim.Circuit(3).h(0, 1, 2), sim.QuantumState.zero(3))
    a = sim.measure(psi, [0, 2], seed=5)
    b = sim.measure(psi, [0, 2], seed=5)
    assert a[0] == b[0] and np.array_equal(a[1].amplitudes, b[1].amplitudes)
    assert a[2] == pytest.approx(0.25)


def test_probabilities_marginal_order():
    psi = sim.QuantumState.basis(3, "110")
    assert np.allclose(psi.probabilities([1, 2]), [0, 0, 1, 0])
    assert np.allclose(psi.probabilities([2, 1]), [0, 1, 0, 0])


def test_partial_trace_bell_is_maximally_mixed():
    bell = sim.QuantumState.from_vector(np.array([1, 0, 0, 1]), normalize=True)
    rho = sim.partial_trace(bell, [0])
    assert np.allclose(rho.matrix, np.eye(2) / 2) and rho.check()


@given(st.integers(0, 2**31 - 1))
def test_partial_trace_of_product(seed):
    rng = np.random.default_rng(seed)
    a, b = random_state(2, rng), random_state(4, rng)
    psi = sim.QuantumState(3, np.kron(a, b))
    assert np.allclose(sim.partial_trace(psi, [0]).matrix, np.outer(a, a.conj()), atol=1e-12)
    assert np.allclose(sim.partial_trace(psi, [1, 2]).matrix, np.outer(b, b.conj()), atol=1e-12)


def test_dephase_kills_coherences():
    plus = np.array([1, 1]) / np.sqrt(2)
    rho = np.outer(plus, plus)
    assert np.allclose(sim.dephase(rho, 1, [0]), np.eye(2) / 2)


def test_tensor_and_basis():
    s = sim.QuantumState.basis(1, 1).tensor(sim.QuantumState.zero(1))
    assert np.allclose(s.amplitudes, [0, 0, 1, 0])
