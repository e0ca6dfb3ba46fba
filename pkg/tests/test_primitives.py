import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlab import primitives as pr
from qlab.errors import BadFlagStructure, PreconditionViolated
from qlab.linalg import random_state, random_unitary
from qlab.simulator import Circuit


@pytest.mark.parametrize("table,kind", [((0, 0), "constant"), ((1, 1), "constant"),
                                        ((0, 1), "balanced"), ((1, 0), "balanced")])
def test_deutsch(table, kind):
    assert pr.deutsch(table) == kind


@given(st.integers(2, 6), st.integers(0, 12), st.data())
def test_grover_closed_form(n, k, data):
    marked = data.draw(st.sets(st.integers(0, 2**n - 1), min_size=1, max_size=3))
    run = pr.grover_search(pr.SearchProblem(n, tuple(marked)), k)
    assert abs(run.success_prob - run.closed_form) <= 1e-10


def test_grover_recommended_k():
    p = pr.SearchProblem(4, (3,))
    assert p.recommended_k() == 3
    assert pr.grover_search(p, 3).success_prob == pytest.approx(np.sin(7 * np.arcsin(0.25)) ** 2, abs=1e-12)


def test_search_problem_rejects_bad_marks():
    with pytest.raises(PreconditionViolated):
        pr.SearchProblem(2, ())
    with pytest.raises(PreconditionViolated):
        pr.SearchProblem(2, (4,))


def test_kickback_circuit_counts_queries():
    c = pr.grover_kickback_circuit(pr.SearchProblem(3, (5,)), 2)
    assert c.count("oracle") == 2


@pytest.mark.parametrize("p0", [0.1, 0.25, 0.6])
def test_amplitude_amplify_closed_form(p0):
    prep = Circuit(2).add("Ry", [0], param=2 * np.arcsin(np.sqrt(1 - p0))).h(1)
    theta = 2 * np.arcsin(np.sqrt(p0))
    for k in range(4):
        _, p = pr.amplitude_amplify(prep, 1, k)
        assert p == pytest.approx(np.sin((2 * k + 1) * theta / 2) ** 2, abs=1e-12)


def test_amplitude_dampen():
    prep = Circuit(1).h(0)
    _, p = pr.amplitude_amplify(prep, 1, 0, mode="dampen", alpha=0.3)
    assert p == pytest.approx(0.09, abs=1e-12)
    with pytest.raises(PreconditionViolated):
        pr.amplitude_amplify(prep, 1, 0, mode="dampen", alpha=0.9)


def test_bad_flag():
    with pytest.raises(BadFlagStructure):
        pr.amplitude_amplify(Circuit(1).h(0), (1, "2"), 1)
    with pytest.raises(BadFlagStructure):
        pr.amplitude_amplify(Circuit(1).h(0), 3, 1)


@given(st.integers(0, 10_000))
def test_lower_bound_inequalities(seed):
    D = pr.lower_bound_trajectory(3, 8, seed)
    k = np.arange(9)
    assert D[0] == 0
    assert np.all(D <= 4 * k**2 + 1e-10)
    assert np.all(np.sqrt(D[1:]) <= np.sqrt(D[:-1]) + 2 + 1e-10)


@given(st.integers(0, 2**31 - 1))
def test_overlap_tests(seed):
    rng = np.random.default_rng(seed)
    psi, phi = random_state(4, rng), random_state(4, rng)
    U = random_unitary(4, rng)
    z = np.vdot(psi, U @ psi)
    assert pr.overlap_test("hadamard_real", psi, U) == pytest.approx((1 + z.real) / 2, abs=1e-12)
    assert pr.overlap_test("hadamard_imag", psi, U) == pytest.approx((1 + z.imag) / 2, abs=1e-12)
    assert pr.overlap_test("swap", psi, phi=phi) == pytest.approx((1 + abs(np.vdot(phi, psi)) ** 2) / 2, abs=1e-12)
