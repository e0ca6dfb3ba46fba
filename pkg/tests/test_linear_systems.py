
import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlab import linear_systems as ls
from qlab.errors import CTooLarge, DimensionCap, EigenvalueNotRepresentable, PreconditionViolated, StabilityViolation
from qlab.linalg import gershgorin_bounds
from qlab.simulator import QuantumState, apply


def test_hhl_reference_instance():
    A = np.diag([0.25, 0.5])
    b = np.array([1, 1]) / np.sqrt(2)
    out = ls.hhl_solve(A, b, d=2, C=0.25)
    x = np.linalg.solve(A, b)
    assert abs(np.vdot(x / np.linalg.norm(x), out.solution_state.amplitudes)) ** 2 >= 1 - 1e-9
    assert out.p1 == pytest.approx(0.625, abs=1e-9)
    assert out.register_leak <= 1e-12


def test_hhl_nondiagonal():
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    A = Q @ np.diag([1, 3, 5, 7]) / 8 @ Q.T
    b = rng.normal(size=4)
    out = ls.hhl_solve(A, b, d=3, C=1 / 8)
    x = np.linalg.solve(A, b)
    assert abs(np.vdot(x / np.linalg.norm(x), out.solution_state.amplitudes)) ** 2 >= 1 - 1e-9


@pytest.mark.parametrize("bits", [2, 3, 6])
def test_hhl_angle_bits_path(bits):
    out = ls.hhl_solve(np.diag([0.25, 0.5]), [1, 1], d=2, C=0.25, angle_bits=bits)
    rounded = [np.round(np.arcsin(r) / np.pi * 2**bits) * np.pi / 2**bits for r in (1.0, 0.5)]
    assert out.p1 == pytest.approx(0.5 * sum(np.sin(a) ** 2 for a in rounded), abs=1e-12)
    assert out.register_leak <= 1e-12


def test_hhl_errors():
    with pytest.raises(EigenvalueNotRepresentable):
        ls.hhl_solve(np.diag([0.3, 0.5]), [1, 0], 2, 0.25)
    with pytest.raises(CTooLarge):
        ls.hhl_solve(np.diag([0.25, 0.5]), [1, 0], 2, 0.5)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_controlled_rotation(d):
    c = ls.controlled_rotation(d)
    for k in range(2**d):
        st_ = QuantumState.basis(d + 1, k)
        out = apply(c, st_).amplitudes
        th = k / 2**d
        assert abs(out[k]) == pytest.approx(abs(np.cos(np.pi * th)), abs=1e-12)
        assert abs(out[2**d + k]) == pytest.approx(abs(np.sin(np.pi * th)), abs=1e-12)


@given(st.integers(2, 40), st.floats(-3, 3), st.floats(0.1, 2), st.floats(-np.pi, np.pi))
def test_tridiag_eigs_residuals(N, a, r, th):
    b = r * np.exp(1j * th)
    T = ls.tridiag_matrix(a, b, N)
    E = ls.tridiag_eigs(a, b, N)
    assert np.linalg.norm(T @ E.eigenvectors - E.eigenvectors * E.eigenvalues) <= 1e-10


@pytest.mark.parametrize("N", [15, 31, 63])
def test_poisson_kappa(N):
    inst = ls.build_poisson(N)
    h = 1 / (N + 1)
    assert inst.kappa == pytest.approx(inst.metadata["kappa_analytic"], rel=1e-9)
    assert abs(inst.kappa - 4 / (h * np.pi) ** 2) <= 0.1 * 4 / (h * np.pi) ** 2
    assert np.linalg.norm(inst.rhs) == pytest.approx(1)


def test_poisson_cap():
    with pytest.raises(DimensionCap):
        ls.build_poisson(65, 2)


@pytest.mark.parametrize("padded", [False, True])
def test_ode_qlsp_matches_forward_euler(padded):
    rng = np.random.default_rng(1)
    A = -np.eye(2) + 0.1 * rng.normal(size=(2, 2))
    b = rng.normal(size=2)
    x0 = rng.normal(size=2)
    inst = ls.build_ode_qlsp(A, b, x0, 0.05, 20, padded)
    ref = ls.forward_euler([A] * 20, [b] * 20, x0, 0.05)
    seg = ls.ode_segments(inst)
    assert np.allclose(seg[:20], ref, atol=1e-12)
    if padded:
        assert np.allclose(seg[20:], ref[-1], atol=1e-12)


def test_ode_stability_warning():
    with pytest.warns(StabilityViolation):
        ls.build_ode_qlsp(-30 * np.eye(1), [0], [1], 0.1, 3)


@pytest.mark.parametrize("dt,T", [(0.1, 10), (0.05, 5), (0.2, 20)])
def test_ode_condition_bounds(dt, T):
    N = int(round(T / dt))
    kappa, bound = ls.ode_condition_bounds(-1, dt, N)
    assert kappa <= bound
    G = ls.ode_gram(-1, dt, N)
    assert gershgorin_bounds(G).lower >= (dt / 2) ** 2 - 1e-15
    assert np.linalg.eigvalsh(G)[0] >= gershgorin_bounds(G).lower - 1e-12


def test_ode_condition_reference_values():
    kappa, bound = ls.ode_condition_bounds(-1, 0.1, 100)
    assert kappa < 20 and bound == pytest.approx(60)


def test_ode_condition_rejects_unstable():
    with pytest.raises(PreconditionViolated):
        ls.ode_condition_bounds(1.0, 0.1, 10)


def test_heat_decays_and_steps():
    inst = ls.build_heat_qlsp(7, 1, 0.05)
    h = 1 / 8
    assert inst.metadata["dt"] <= h**2 / 8 + 1e-15
    seg = ls.ode_segments(inst)
    norms = np.linalg.norm(seg, axis=1)
    assert np.all(np.diff(norms) <= 0)
    lam = 4 * np.sin(np.pi * h / 2) ** 2 / h**2
    x0 = np.sin(np.pi * h * np.arange(1, 8))
    assert np.allclose(seg[-1], (1 - inst.metadata["dt"] * lam) ** len(seg) * x0, atol=1e-12)


def test_heat_zero_time_is_identity():
    inst = ls.build_heat_qlsp(4, 1, 0.0)
    assert np.allclose(inst.matrix, np.eye(4))
