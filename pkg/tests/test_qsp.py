import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import chebyshev as cheb
from scipy.special import jv

from qlab import qsp
from qlab.errors import (DegreeTooLow, MaxNormViolated, NonConvergence, ParityMismatch,
                         PreconditionViolated, XOutOfRange)

seeds = st.integers(0, 2**31 - 1)
phase_lists = st.lists(st.floats(-np.pi, np.pi), min_size=1, max_size=12)
xs = st.floats(-1, 1)
conventions = ["W", "O", "tilde"]


def random_target(d, seed, maxnorm=0.9):
    rng = np.random.default_rng(seed)
    c = np.zeros(d + 1)
    idx = np.arange(d % 2, d + 1, 2)
    c[idx] = rng.normal(size=len(idx)) / (1 + idx)
    par = qsp.natural_parity(d)
    f = qsp.ChebyshevPoly(c, par)
    return qsp.ChebyshevPoly(c * maxnorm / f.maxnorm(), par)


@given(phase_lists, xs, st.sampled_from(conventions))
def test_qsp_unitary_is_unitary(phases, x, conv):
    U = qsp.qsp_unitary(x, qsp.PhaseFactors(phases, conv))
    assert np.allclose(U.conj().T @ U, np.eye(2), atol=1e-12)


@given(phase_lists, xs)
def test_qsp_parity(phases, x):
    ph = qsp.PhaseFactors(phases)
    d = ph.degree
    assert qsp.qsp_poly([-x], ph)[0] == pytest.approx((-1) ** d * qsp.qsp_poly([x], ph)[0], abs=1e-12)


@given(phase_lists, xs)
def test_qsp_reverse_and_negate(phases, x):
    ph = qsp.PhaseFactors(phases)
    P = qsp.qsp_poly([x], ph)[0]
    rev = qsp.qsp_poly([x], qsp.PhaseFactors(phases[::-1]))[0]
    neg = qsp.qsp_poly([x], qsp.PhaseFactors(-np.array(phases)))[0]
    assert rev == pytest.approx(P, abs=1e-12)
    assert neg == pytest.approx(np.conj(P), abs=1e-12)


@given(phase_lists, st.sampled_from(conventions), st.sampled_from(conventions))
def test_convert_roundtrip_and_invariance(phases, a, b):
    ph = qsp.PhaseFactors(phases, a)
    other = qsp.convert(ph, b)
    back = qsp.convert(other, a)
    assert np.allclose(back.phases, ph.phases, atol=1e-12)
    x = np.linspace(-1, 1, 7)
    assert np.allclose(qsp.qsp_poly(x, ph), qsp.qsp_poly(x, other), atol=1e-12)


@pytest.mark.parametrize("d", list(range(1, 21)))
def test_zero_phases_give_zero(d):
    x = np.linspace(-1, 1, 1001)
    assert np.max(np.abs(qsp.qsp_real(x, qsp.zero_phases(d)))) <= 1e-14


def test_zero_phases_degree_zero_is_identity():
    assert np.allclose(qsp.qsp_poly(np.linspace(-1, 1, 5), qsp.zero_phases(0)), 1)


def test_x_out_of_range():
    with pytest.raises(XOutOfRange):
        qsp.qsp_unitary(1.5, qsp.PhaseFactors([0.1, 0.2]))


def test_unknown_convention():
    with pytest.raises(PreconditionViolated):
        qsp.PhaseFactors([0.0], "Q")


@given(st.integers(1, 60), seeds)
def test_solve_random_targets(d, seed):
    f = random_target(d, seed)
    ph = qsp.solve_phases(f)
    assert ph.residual <= 1e-12 and ph.symmetric
    assert np.allclose(ph.phases, ph.phases[::-1])
    assert qsp.phase_error(ph, f, 1000, seed=seed) <= 1e-8


@pytest.mark.parametrize("d", [80, 100])
def test_solve_high_degree(d):
    f = random_target(d, d)
    ph = qsp.solve_phases(f)
    assert ph.residual <= 1e-12 and qsp.phase_error(ph, f, 1000, seed=1) <= 1e-8


def test_solve_deterministic():
    f = random_target(31, 7)
    a, b = qsp.solve_phases(f), qsp.solve_phases(f)
    assert np.array_equal(a.phases, b.phases)


def test_solve_degree_zero_and_zero_tail():
    ph = qsp.solve_phases(qsp.ChebyshevPoly(np.array([0.3]), "even"))
    assert qsp.qsp_real([0.2], ph)[0] == pytest.approx(0.3)
    f = qsp.ChebyshevPoly(np.array([0, 0.5, 0, 0, 0, 0]), "odd")
    ph = qsp.solve_phases(f)
    assert ph.degree == 5 and qsp.phase_error(ph, f) <= 1e-8


def test_solve_errors():
    with pytest.raises(MaxNormViolated):
        qsp.solve_phases(qsp.ChebyshevPoly(np.array([0, 1.2]), "odd"))
    with pytest.raises(ParityMismatch):
        qsp.solve_phases(qsp.ChebyshevPoly(np.array([0.1, 0.2]), "none"))
    with pytest.raises(NonConvergence) as exc:
        qsp.solve_phases(random_target(40, 3), qsp.SolverOptions(max_iter=1))
    assert exc.value.residual > 1e-12 and exc.value.iterations == 1


def test_phase_json_bit_exact():
    ph = qsp.solve_phases(random_target(17, 2))
    text = json.dumps(ph.to_json())
    back = qsp.PhaseFactors.from_json(json.loads(text))
    assert np.array_equal(back.phases, ph.phases)
    assert back.convention == ph.convention and back.symmetric == ph.symmetric
    assert np.array_equal(back.target.coefficients, ph.target.coefficients)
    assert json.dumps(back.to_json()) == text


@pytest.mark.parametrize("t", [0.0, 0.5, 3.0, 4 * np.pi, 40.0, -2.0])
def test_bessel_matches_reference(t):
    J = qsp.bessel_j(60, t)
    assert np.allclose(J, jv(np.arange(61), t), atol=1e-14, rtol=0)


@pytest.mark.parametrize("nu", [0, 1, 5])
def test_bessel_series_cross_check(nu):
    assert qsp.bessel_j(10, 1.3)[nu] == pytest.approx(qsp.bessel_series(nu, 1.3), abs=1e-15)


@pytest.mark.parametrize("d,tol", [(24, 1e-5), (50, 1e-13)])
def test_jacobi_anger_truncation(d, tol):
    C, S, err = qsp.jacobi_anger(4 * np.pi, d, beta=1.001)
    x = np.linspace(-1, 1, 777)
    assert err <= tol
    assert np.max(np.abs(1.001 * C(x) - np.cos(4 * np.pi * x))) <= err + 1e-15
    assert np.max(np.abs(1.001 * S(x) - np.sin(4 * np.pi * x))) <= err + 1e-15
    assert C.parity == "even" and S.parity == "odd"


def test_jacobi_anger_auto_beta():
    ja = qsp.jacobi_anger(4 * np.pi, 50)
    assert max(ja.cos.maxnorm(), ja.sin.maxnorm()) < 1


@pytest.mark.parametrize("d", [21, 41, 81])
def test_sign_target(d):
    p = qsp.approx_target("sign", d, delta=0.1)
    x = np.linspace(0.1, 1, 500)
    assert p.maxnorm() < 1 and p.parity == "odd"
    assert np.max(np.abs(p(x) - 1)) <= p.error + 1e-12


def test_step_target():
    p = qsp.approx_target("step", 80, a=0.1, b=0.2)
    assert p.parity == "even" and p.maxnorm() < 1
    assert np.max(np.abs(p(np.linspace(0, 0.1, 200)) - 1)) <= p.error + 1e-12
    assert np.max(np.abs(p(np.linspace(0.2, 1, 200)))) <= p.error + 1e-12


def test_inverse_target():
    p = qsp.approx_target("inverse", 81, kappa=10)
    x = np.linspace(0.1, 1, 500)
    assert p.maxnorm() < 1
    assert np.max(np.abs(p(x) - 0.1 / (4 / 3 * x))) <= p.error + 1e-12


def test_target_errors():
    with pytest.raises(ParityMismatch):
        qsp.approx_target("sign", 10, delta=0.1)
    with pytest.raises(ParityMismatch):
        qsp.approx_target("step", 11, a=0.1, b=0.2)
    with pytest.raises(DegreeTooLow) as exc:
        qsp.approx_target("sign", 5, delta=0.01, eps=1e-6)
    assert exc.value.achieved > 1e-6


def test_chebyshev_poly_helpers():
    p = qsp.ChebyshevPoly.from_function(np.cos, 10, "even")
    assert np.all(p.coefficients[1::2] == 0)
    assert p(0.3) == pytest.approx(np.cos(0.3), abs=1e-8)
    assert qsp.ChebyshevPoly(np.array([0, 0, 0.5]), "even").degree == 2
    assert np.isclose(cheb.chebval(1.0, p.coefficients), p(1.0))
