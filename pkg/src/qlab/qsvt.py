"""Quantum eigenvalue and singular value transformations and their applications.

Circuits are written with the rightmost factor acting first. For a block
encoding ``U_A`` with projector ``Pi = |0^m><0^m| (x) I`` the QET/QSVT
circuit with tilde phases is::

    e^{i phi_0 Z_Pi} U_1 e^{i phi_1 Z_Pi} ... U_d e^{i phi_d Z_Pi}

with ``U_d = U_A`` applied first and the ``U_j`` alternating between
``U_A`` and ``U_A^dagger`` (all ``U_A`` for a Hermitian block encoding).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .block_encoding import BlockEncoding, lcu, z_pi
from .errors import (
    ConditionNumberUnderestimated,
    DegreeTooLow,
    GapViolated,
    NonConvergence,
    NotStochastic,
    OverlapBelowDelta,
    PhaseLengthMismatch,
    PhaseSolveFailed,
    PreconditionViolated,
    SubnormalizedInput,
)
from .linalg import complete_unitary, dagger, hermitian_eig, op_norm, svd
from .qsp import (
    ChebyshevPoly,
    PhaseFactors,
    approx_target,
    convert,
    jacobi_anger,
    solve_phases,
)
from .simulator import Circuit, QuantumState, apply, circuit_unitary

MAX_DEGREE = 2001


def _require_exact(be: BlockEncoding) -> None:
    if abs(be.alpha - 1) > 1e-12 or be.epsilon != 0:
        raise SubnormalizedInput(f"need alpha = 1 and epsilon = 0, got {be.alpha}, {be.epsilon}")


def _factor(be: BlockEncoding, d: int, j: int) -> np.ndarray:
    """``U_j`` of the alternating sequence: ``U_A`` when ``d - j`` is even."""
    if be.hermitian or (d - j) % 2 == 0:
        return be.unitary
    return dagger(be.unitary)


# ---------------------------------------------------------------------------
# Qubitization
# ---------------------------------------------------------------------------

def chebyshev_be(be: BlockEncoding, k: int) -> BlockEncoding:
    """Block encoding of ``T_k`` of the encoded matrix.

    A Hermitian block encoding uses ``(U_A Z_Pi)^k``; otherwise the factors
    alternate ``U_A Z_Pi`` (first) and ``U_A^dagger Z_Pi``, which yields
    ``T_k^diamond(A)`` for odd ``k`` and ``T_k^triangleright(A)`` for even ``k``.

    Raises:
        SubnormalizedInput: Unless ``alpha = 1`` and ``epsilon = 0``.
    """
    _require_exact(be)
    Z = np.diag(z_pi(be.m, be.n))
    out = np.eye(be.unitary.shape[0], dtype=complex)
    for j in range(1, k + 1):
        U = be.unitary if be.hermitian or j % 2 == 1 else dagger(be.unitary)
        out = (U * Z[None, :]) @ out
    A = None
    if be.matrix is not None:
        A = chebyshev_transform(be.matrix, k, hermitian_be=be.hermitian)
    return BlockEncoding(out, be.m, be.n, 1.0, 0.0, False, A)


def chebyshev_transform(A, k: int, hermitian_be: bool = False) -> np.ndarray:
    """Oracle for :func:`chebyshev_be`: ``T_k(A)`` or its singular-value analogue."""
    from numpy.polynomial import chebyshev as cheb

    c = np.zeros(k + 1)
    c[k] = 1
    f = lambda x: cheb.chebval(x, c)
    A = np.asarray(A, dtype=complex)
    if hermitian_be:
        return hermitian_eig(A).apply(f)
    S = svd(A)
    return S.apply_odd(f) if k % 2 else S.apply_right(f)


def qubitization_block(be: BlockEncoding, index: int):
    """Walk iterate ``U_A Z_Pi`` restricted to ``span{|0^m>|v>, |perp>}``.

    ``|v>`` is the ``index``-th eigenvector of the encoded Hermitian matrix and
    ``|perp>`` the normalized part of ``U_A|0^m>|v>`` orthogonal to ``|0^m>|v>``.

    Returns:
        ``(observed 2x2 block, expected [[l, -s], [s, l]])``; both are 1x1
        when ``1 - lambda^2 < 1e-10`` and the subspace is numerically one-dimensional.
    """
    _require_exact(be)
    E = hermitian_eig(be.block)
    lam = E.eigenvalues[index]
    v = np.zeros(be.unitary.shape[0], dtype=complex)
    v[: 2**be.n] = E.eigenvectors[:, index]
    w = be.unitary @ v
    perp = w - lam * v
    s = np.linalg.norm(perp)
    O = be.unitary * np.diag(z_pi(be.m, be.n))[None, :]
    if s < 1e-5:
        # |lambda| ~ 1: the walk leaves |0^m>|v> invariant and the remainder
        # is too small to normalize reliably.
        return np.array([[np.vdot(v, O @ v)]]), np.array([[lam]])
    perp = perp / s
    B = np.array([[np.vdot(a, O @ b) for b in (v, perp)] for a in (v, perp)])
    sq = np.sqrt(max(0.0, 1 - lam**2))
    return B, np.array([[lam, -sq], [sq, lam]])


# ---------------------------------------------------------------------------
# QET / QSVT circuits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QetCircuit:
    """A QET/QSVT circuit and the block encoding it produces.

    Attributes:
        base: Input block encoding.
        phases: Tilde-convention phases as applied (including the ``-d pi/2`` shift).
        real_part: Whether the Hadamard-conjugated signal qubit is used.
        circuit: Gate-level circuit (signal qubit first when ``real_part``).
        result: Output block encoding.
    """

    base: BlockEncoding
    phases: PhaseFactors
    real_part: bool
    circuit: Circuit
    result: BlockEncoding


def _zpi_rotation_diag(m: int, n: int, phi: float) -> np.ndarray:
    """Diagonal of ``e^{i phi Z_Pi}`` on the ancilla register only (``2**m`` entries)."""
    d = np.full(2**m, np.exp(-1j * phi))
    d[0] = np.exp(1j * phi)
    return d


def _cr_phi(c: Circuit, m: int, phi: float, signal: int = 0) -> None:
    """``CR_phi``: zero-controlled NOT onto the signal, ``e^{-i phi Z}``, zero-controlled NOT.

    Acts as ``e^{i phi Z_Pi}`` on signal ``|0>`` and ``e^{-i phi Z_Pi}`` on ``|1>``.
    """
    ctrl = [(signal + 1 + q, 0) for q in range(m)]
    c.add("X", [signal], ctrl, label="cpi-not")
    c.add("Rz", [signal], param=2 * phi)
    c.add("X", [signal], ctrl, label="cpi-not")


def qet_circuit(be: BlockEncoding, phases: PhaseFactors, real_part: bool = True,
                degree: int | None = None) -> QetCircuit:
    """Build the QET/QSVT circuit for ``phases`` (any convention).

    The first tilde phase is shifted by ``-d pi / 2`` so the block equals
    ``P(A)`` exactly (not up to the ``i^d`` phase of the bare product). With
    ``real_part`` the result encodes ``(P + P^*)/2`` on ``m + 1`` ancillas;
    otherwise ``P`` on ``m`` ancillas.

    Raises:
        SubnormalizedInput: Unless ``alpha = 1`` and ``epsilon = 0``.
        PhaseLengthMismatch: If ``degree`` is given and differs from the phases.
    """
    _require_exact(be)
    tph = convert(phases, "tilde")
    d = tph.degree
    if degree is not None and degree != d:
        raise PhaseLengthMismatch(f"expected {degree + 1} phases, got {d + 1}")
    ph = tph.phases.copy()
    ph[0] -= d * np.pi / 2
    applied = replace(tph, phases=ph)
    m, n = be.m, be.n
    off = 1 if real_part else 0
    c = Circuit(off + m + n)
    sys_q = list(range(off, off + m + n))

    def rot(phi):
        if real_part:
            _cr_phi(c, m, phi)
        elif m:
            c.custom(np.diag(_zpi_rotation_diag(m, n, phi)), sys_q[:m], label="zpi-rot")
        else:
            c.custom(np.exp(1j * phi) * np.eye(2**n), sys_q, label="zpi-rot")

    if real_part:
        c.h(0)
    rot(ph[d])
    for j in range(d, 0, -1):
        U = _factor(be, d, j)
        c.custom(U, sys_q, label="UA" if U is be.unitary else "UAdg")
        rot(ph[j - 1])
    if real_part:
        c.h(0)
    result = BlockEncoding(circuit_unitary(c), m + off, n, 1.0, 0.0, False, None)
    return QetCircuit(be, applied, real_part, c, result)


def qet_apply(be: BlockEncoding, phases: PhaseFactors, real_part: bool = True) -> BlockEncoding:
    """Block encoding of ``P(A)`` (Hermitian) or ``P^diamond / P^triangleright(A)``.

    See :func:`qet_circuit`.
    """
    return qet_circuit(be, phases, real_part).result


def poly_transform(A, poly, parity: str, hermitian_be: bool = False) -> np.ndarray:
    """Oracle ``P(A)`` for Hermitian encodings or the singular-value transform otherwise."""
    A = np.asarray(A, dtype=complex)
    if hermitian_be:
        return hermitian_eig(A).apply(poly)
    S = svd(A)
    return S.apply_odd(poly) if parity == "odd" else S.apply_right(poly)


def _solve(target: ChebyshevPoly) -> PhaseFactors:
    try:
        return solve_phases(target)
    except NonConvergence as exc:
        raise PhaseSolveFailed(str(exc), residual=exc.residual) from exc


# ---------------------------------------------------------------------------
# Hamiltonian simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HamsimResult:
    """Output of :func:`hamsim_qet`.

    Attributes:
        be: Block encoding with ``alpha = 2 beta`` approximating ``e^{iHt}``.
        beta: Jacobi-Anger scale.
        degree: Truncation degree.
        truncation_error: Scalar truncation error.
        residuals: Phase-solver objectives for the cosine and sine parts.
        error: ``||2 beta B - e^{iHt}||`` against the dense oracle.
    """

    be: BlockEncoding
    beta: float
    degree: int
    truncation_error: float
    residuals: tuple
    error: float


def hamsim_qet(be_H: BlockEncoding, t: float, eps: float = 1e-6, degree: int | None = None) -> HamsimResult:
    """Approximate ``e^{iHt}`` by QET of the Jacobi-Anger cosine and sine series.

    Both parts are applied with the real-part wrapper and combined by an LCU
    with coefficients ``(1, i)``, giving ``m + 2`` ancillas and subnormalization
    ``2 beta``. Without ``degree`` the smallest even degree whose truncation
    error is at most ``eps / 4`` is used.

    Raises:
        SubnormalizedInput: Unless ``alpha = 1`` and ``epsilon = 0``.
        PhaseSolveFailed: If a phase solve does not converge.
    """
    _require_exact(be_H)
    if degree is None:
        degree = 2
        while jacobi_anger(t, degree).truncation_error > eps / 4:
            degree += 2
            if degree > MAX_DEGREE:
                raise DegreeTooLow("Jacobi-Anger degree cap reached", achieved=np.inf)
    ja = jacobi_anger(t, degree)
    d_even = degree - degree % 2
    d_odd = degree - 1 + degree % 2
    ph_c = _solve(_with_min_degree(ja.cos, d_even))
    ph_s = _solve(_with_min_degree(replace(ja.sin, parity="odd"), d_odd))
    be_c = qet_apply(be_H, ph_c, real_part=True)
    be_s = qet_apply(be_H, ph_s, real_part=True)
    combo = lcu([1.0, 1j], [be_c, be_s])
    out = BlockEncoding(combo.unitary, combo.m, combo.n, 2 * ja.beta, 0.0, False, None)
    H = be_H.block
    E = hermitian_eig(H)
    exact = E.apply(lambda x: np.exp(1j * t * x))
    err = op_norm(2 * ja.beta * out.block - exact)
    return HamsimResult(out, ja.beta, degree, ja.truncation_error, (ph_c.residual, ph_s.residual), err)


def _with_min_degree(p: ChebyshevPoly, d: int) -> ChebyshevPoly:
    """Pad coefficients to length ``d + 1`` so a zero tail keeps the nominal degree."""
    c = np.zeros(max(d + 1, len(p.coefficients)))
    c[: len(p.coefficients)] = p.coefficients
    return replace(p, coefficients=c)


# ---------------------------------------------------------------------------
# Ground-state preparation by filtering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FilterResult:
    """Output of :func:`ground_state_filter`.

    Attributes:
        state: Postselected, normalized system state.
        success_prob: Probability of the ancillas reading ``0``.
        degree: Polynomial degree.
        error: Certified polynomial error on the working region.
        p0: Oracle overlap ``|<E0|init>|^2``.
        fidelity: Oracle fidelity with the ground state.
    """

    state: np.ndarray
    success_prob: float
    degree: int
    error: float
    p0: float
    fidelity: float

    def __iter__(self):
        return iter((self.state, self.success_prob))


def step_polynomial(a: float, b: float, eps: float, degree: int | None = None) -> ChebyshevPoly:
    """Even step polynomial: within ``eps`` of 1 on ``[0, a]`` and of 0 on ``[b, 1]``.

    Without ``degree`` the degree grows in steps of 8 until ``eps`` is met.

    Raises:
        DegreeTooLow: If ``eps`` is not reached below the degree cap.
    """
    scale = 1 - eps / 2
    if degree is not None:
        return approx_target("step", degree, a=a, b=b, scale=scale, eps=eps)
    d = 2 * int(np.ceil(1 / (b - a)))
    while d <= MAX_DEGREE:
        p = approx_target("step", d, a=a, b=b, scale=scale)
        if p.error <= eps:
            return p
        d += 8
    raise DegreeTooLow("step polynomial degree cap reached", achieved=p.error)


def ground_state_filter(be_H: BlockEncoding, mu: float, gap: float, eps: float, init) -> FilterResult:
    """Project ``init`` onto the eigenspace below ``mu`` with an even step polynomial.

    The polynomial is within ``eps / 4`` of the ideal step on
    ``[0, mu - gap/2]`` and ``[mu + gap/2, 1]``; it is applied with the
    real-part wrapper and the ancillas are postselected on zero.

    Raises:
        GapViolated: If an eigenvalue of ``H`` lies in ``(mu - gap/2, mu + gap/2)``
            or ``H`` is not in ``[0, 1]``.
    """
    _require_exact(be_H)
    H = be_H.block
    E = hermitian_eig(H)
    lam = E.eigenvalues
    a, b = mu - gap / 2, mu + gap / 2
    if np.any((lam > a + 1e-12) & (lam < b - 1e-12)) or lam[0] < -1e-12 or lam[-1] > 1 + 1e-12:
        raise GapViolated(f"spectrum {lam} violates the gap ({a}, {b}) or [0, 1]")
    if not a >= 0 or not b <= 1:
        raise GapViolated("transition band must lie inside [0, 1]")
    poly = step_polynomial(a, b, eps / 4)
    ph = _solve(poly)
    out = qet_apply(be_H, ph, real_part=True)
    psi0 = init.amplitudes if isinstance(init, QuantumState) else np.asarray(init, dtype=complex)
    psi0 = psi0 / np.linalg.norm(psi0)
    branch = out.block @ psi0
    prob = float(np.vdot(branch, branch).real)
    state = branch / np.sqrt(prob)
    ground = E.eigenvectors[:, lam <= a + 1e-12]
    p0 = float(np.sum(np.abs(dagger(ground) @ psi0) ** 2))
    fid = float(np.sum(np.abs(dagger(ground) @ state) ** 2))
    return FilterResult(state, prob, poly.degree, float(poly.error), p0, fid)


# ---------------------------------------------------------------------------
# Linear systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSolveResult:
    """Output of :func:`qsvt_linear_solve`.

    Attributes:
        state: Normalized postselected state.
        success_prob: ``||p^diamond(A^dagger) b||^2``.
        queries: Number of ``U_A`` / ``U_A^dagger`` applications.
        epsilon_prime: Certified ``|p(x) - delta/(beta x)|`` on ``[delta, 1]``.
        beta: Inverse scale.
        xi: ``||A^{-1} b|| / kappa`` for the normalized ``b``.
        fidelity: Oracle fidelity with ``A^{-1} b / ||A^{-1} b||``.
        bound_error: ``||p^diamond(A^dagger) - (delta/beta) A^{-1}||``.
    """

    state: np.ndarray
    success_prob: float
    queries: int
    epsilon_prime: float
    beta: float
    xi: float
    fidelity: float
    bound_error: float

    def __iter__(self):
        return iter((self.state, self.success_prob, self.queries))


def inverse_polynomial(kappa: float, eps: float, beta: float = 4 / 3,
                       degree: int | None = None) -> ChebyshevPoly:
    """Odd inverse polynomial with ``eps' <= (1 / (beta kappa)) sqrt(eps)``.

    That error budget keeps the output infidelity below ``eps``. Without
    ``degree`` the degree grows in steps of 10 until the budget holds.
    """
    if degree is not None:
        return approx_target("inverse", degree, kappa=kappa, beta=beta)
    budget = np.sqrt(eps) / (beta * kappa)
    d = 2 * int(np.ceil(kappa)) + 1
    while d <= MAX_DEGREE:
        p = approx_target("inverse", d, kappa=kappa, beta=beta)
        if p.error <= budget:
            return p
        d += 10
    raise DegreeTooLow("inverse polynomial degree cap reached", achieved=p.error)


def qsvt_linear_solve(be_A: BlockEncoding, b, kappa: float, eps: float,
                      degree: int | None = None, beta: float = 4 / 3) -> LinearSolveResult:
    """Solve ``A x = b`` by QSVT with an odd inverse polynomial.

    The polynomial is applied to ``U_A^dagger``, which encodes ``A^dagger``, so
    the block is ``p^diamond(A^dagger) ~ (delta / beta) A^{-1}``.

    Args:
        be_A: Exact block encoding of ``A`` with ``||A|| <= 1``.
        b: Right-hand side vector, QuantumState or preparation Circuit.
        kappa: Condition-number bound (``sigma_min >= 1/kappa`` is checked).
        eps: Target infidelity.
        degree: Optional fixed polynomial degree.
        beta: Inverse scale.

    Raises:
        ConditionNumberUnderestimated: If ``sigma_min < 1/kappa``.
    """
    _require_exact(be_A)
    A = be_A.block
    S = svd(A)
    if S.singulars.min() < 1 / kappa - 1e-12:
        raise ConditionNumberUnderestimated(
            f"sigma_min = {S.singulars.min():.3e} < 1/kappa = {1 / kappa:.3e}")
    if isinstance(b, Circuit):
        bv = apply(b, QuantumState.zero(b.n)).amplitudes
    elif isinstance(b, QuantumState):
        bv = b.amplitudes
    else:
        bv = np.asarray(b, dtype=complex).ravel()
    bv = bv / np.linalg.norm(bv)
    poly = inverse_polynomial(kappa, eps, beta, degree)
    ph = _solve(poly)
    out = qet_apply(be_A.dagger(), ph, real_part=True)
    branch = out.block @ bv
    prob = float(np.vdot(branch, branch).real)
    state = branch / np.sqrt(prob)
    x = np.linalg.solve(A, bv)
    xi = float(np.linalg.norm(x) / kappa)
    fid = float(abs(np.vdot(x / np.linalg.norm(x), state)) ** 2)
    bound = op_norm(out.block - (1 / (kappa * beta)) * np.linalg.inv(A))
    return LinearSolveResult(state, prob, poly.degree, float(poly.error), beta, xi, fid, bound)


# ---------------------------------------------------------------------------
# Szegedy walks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SzegedyWalk:
    """Szegedy quantum walk of a Markov chain.

    Attributes:
        P: Row-stochastic transition matrix.
        D: Discriminant ``D_ij = sqrt(P_ij P_ji)``.
        discriminant_be: Hermitian ``(1, n, 0)`` block encoding of ``D``.
        walk_op: ``O_Z = U_D Z_Pi``.
    """

    P: np.ndarray
    D: np.ndarray
    discriminant_be: BlockEncoding
    walk_op: np.ndarray


def complete_graph(N: int, marked: int | None = None) -> np.ndarray:
    """``P = J / N`` (with self loops); a marked vertex becomes absorbing."""
    P = np.full((N, N), 1.0 / N)
    if marked is not None:
        P[marked] = 0
        P[marked, marked] = 1
    return P


def szegedy_walk(P) -> SzegedyWalk:
    """Build the walk: ``O_P = sum_j V_j (x) |j><j|`` with ``V_j|0> = sum_k sqrt(P_jk)|k>``,
    ``U_D = O_P^dagger SWAP O_P`` and ``O_Z = U_D Z_Pi``.

    Raises:
        NotStochastic: If ``P`` has negative entries or rows not summing to one.
    """
    P = np.asarray(P, dtype=float)
    N = P.shape[0]
    if P.shape != (N, N) or np.any(P < -1e-15) or np.max(np.abs(P.sum(axis=1) - 1)) > 1e-12:
        raise NotStochastic("P must be square, nonnegative and row-stochastic")
    n = int(round(np.log2(N)))
    if 2**n != N:
        raise PreconditionViolated("number of states must be a power of two")
    OP = np.zeros((N * N, N * N), dtype=complex)
    for j in range(N):
        V = complete_unitary(np.sqrt(np.clip(P[j], 0, None)))
        Pj = np.zeros((N, N))
        Pj[j, j] = 1
        OP += np.kron(V, Pj)
    SW = np.zeros((N * N, N * N))
    for a in range(N):
        for c in range(N):
            SW[c * N + a, a * N + c] = 1
    UD = dagger(OP) @ SW @ OP
    D = np.sqrt(P * P.T)
    be = BlockEncoding(UD, n, n, 1.0, 0.0, True, D)
    O = UD * np.diag(z_pi(n, n))[None, :]
    return SzegedyWalk(P, D, be, O)


def szegedy(P, marked: int | None = None, k: int = 1, u=None):
    """Walk for ``P`` (absorbing at ``marked``) and ``m_k = <0, u| O_Z^k |0, u>``.

    Args:
        P: Row-stochastic matrix, or an integer ``N`` for the complete graph.
        marked: Optional marked (absorbing) vertex.
        k: Walk steps.
        u: System state, uniform by default.

    Returns:
        ``(walk, m_k)`` with ``m_k = <u| T_k(D) |u>``.
    """
    if np.isscalar(P):
        P = complete_graph(int(P), marked)
    elif marked is not None:
        P = np.array(P, dtype=float)
        P[marked] = 0
        P[marked, marked] = 1
    walk = szegedy_walk(P)
    N = walk.P.shape[0]
    uv = np.full(N, 1 / np.sqrt(N), dtype=complex) if u is None else np.asarray(u, dtype=complex)
    psi = np.zeros(N * N, dtype=complex)
    psi[:N] = uv
    out = psi
    for _ in range(k):
        out = walk.walk_op @ out
    return walk, float(np.vdot(psi, out).real)


def walk_eigenphases(walk: SzegedyWalk) -> tuple:
    """Eigenphases of ``O_Z`` and the predicted ``+- arccos(lambda_i)`` of ``D``."""
    ev = np.linalg.eigvals(walk.walk_op)
    lam = np.clip(np.linalg.eigvalsh(walk.D), -1, 1)
    pred = np.concatenate([np.arccos(lam), -np.arccos(lam)])
    return np.angle(ev), pred


# ---------------------------------------------------------------------------
# Fixed-point amplitude amplification
# ---------------------------------------------------------------------------

def c_pi_not(projector: np.ndarray) -> np.ndarray:
    """``C_Pi NOT = (H (x) I)(|0><0| (x) I + |1><1| (x) R_Pi)(H (x) I)`` with ``R_Pi = I - 2 Pi``.

    Equals ``X (x) Pi + I (x) (I - Pi)``; the signal qubit is first.
    """
    Pi = np.asarray(projector, dtype=complex)
    N = Pi.shape[0]
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    R = np.eye(N) - 2 * Pi
    mid = np.kron(np.diag([1, 0]), np.eye(N)) + np.kron(np.diag([0, 1]), R)
    HI = np.kron(H, np.eye(N))
    return HI @ mid @ HI


@dataclass(frozen=True)
class FixedPointResult:
    """Output of :func:`fixed_point_aa`.

    Attributes:
        circuit: Circuit on signal qubit + system.
        distance: ``|| |0>|psi> - U_Phi |0>|phi_0> ||``.
        degree: Sign-polynomial degree.
        overlap: Oracle ``a = ||Pi' U |phi_0>||``.
        state: Final signal + system state.
    """

    circuit: Circuit
    distance: float
    degree: int
    overlap: float
    state: np.ndarray

    def __iter__(self):
        return iter((self.circuit, self.distance))


def sign_polynomial(delta: float, eps: float, degree: int | None = None) -> ChebyshevPoly:
    """Odd sign polynomial with ``|P - 1| <= eps^2`` on ``[delta, 1]``; adaptive degree."""
    tol = eps**2
    scale = 1 - tol / 2
    if degree is not None:
        return approx_target("sign", degree, delta=delta, scale=scale, eps=tol)
    d = 2 * int(np.ceil(1 / delta)) + 1
    while d <= MAX_DEGREE:
        p = approx_target("sign", d, delta=delta, scale=scale)
        if p.error <= tol:
            return p
        d += 4
    raise DegreeTooLow("sign polynomial degree cap reached", achieved=p.error)


def fixed_point_aa(prep, good_projector, a_lower: float, eps: float,
                   initial_projector=None) -> FixedPointResult:
    """Fixed-point amplitude amplification by projector-based QSVT.

    With ``Pi`` the initial-state projector (``|0><0|`` by default) and
    ``Pi'`` the good projector, the circuit alternates ``U`` and
    ``U^dagger`` with ``e^{i phi Z_Pi}`` applied before each ``U`` and
    ``e^{i phi Z_Pi'}`` after it, each realized as a ``C_Pi NOT`` gadget
    pair around a signal-qubit ``Rz``; the real-part wrapper conjugates the
    signal qubit with Hadamards.

    Args:
        prep: Unitary matrix or Circuit ``U``.
        good_projector: ``Pi'`` as a matrix.
        a_lower: Lower bound ``delta`` on ``a``.
        eps: Target accuracy.
        initial_projector: ``Pi``; defaults to ``|0><0|``.

    Raises:
        OverlapBelowDelta: If ``a < delta``.
    """
    U = circuit_unitary(prep) if isinstance(prep, Circuit) else np.asarray(prep, dtype=complex)
    N = U.shape[0]
    n = int(round(np.log2(N)))
    Pg = np.asarray(good_projector, dtype=complex)
    Pi = np.zeros((N, N), dtype=complex)
    Pi[0, 0] = 1
    if initial_projector is not None:
        Pi = np.asarray(initial_projector, dtype=complex)
    phi0 = np.zeros(N, dtype=complex)
    phi0[0] = 1
    good = Pg @ U @ phi0
    a = float(np.linalg.norm(good))
    if a < a_lower - 1e-12:
        raise OverlapBelowDelta(f"overlap {a:.4f} below delta {a_lower:.4f}")
    poly = sign_polynomial(a_lower, eps)
    ph = convert(_solve(poly), "tilde")
    d = ph.degree
    phases = ph.phases.copy()
    phases[0] -= d * np.pi / 2
    sysq = list(range(1, n + 1))
    c = Circuit(n + 1)

    def c_pi_not_gadget(P):
        c.h(0)
        c.custom(np.eye(N) - 2 * P, sysq, controls=[(0, 1)], label="reflection")
        c.h(0)

    def rot(P, phi):
        c_pi_not_gadget(P)
        c.add("Rz", [0], param=2 * phi)
        c_pi_not_gadget(P)

    c.h(0)
    rot(Pi, phases[d])
    for j in range(d, 0, -1):
        forward = (d - j) % 2 == 0
        c.custom(U if forward else dagger(U), sysq, label="U" if forward else "Udg")
        rot(Pg if forward else Pi, phases[j - 1])
    c.h(0)
    full = np.zeros(2 * N, dtype=complex)
    full[:N] = phi0
    out = apply(c, QuantumState(n + 1, full)).amplitudes
    target = np.zeros(2 * N, dtype=complex)
    target[:N] = good / a
    dist = float(np.linalg.norm(target - out))
    return FixedPointResult(c, dist, d, a, out)
