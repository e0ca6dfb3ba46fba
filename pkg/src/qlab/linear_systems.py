"""HHL, controlled rotations, and quantum linear-system problem (QLSP)
builders for the Poisson equation, linear ODEs and the heat equation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    CTooLarge,
    DimensionCap,
    DimensionMismatch,
    EigenvalueNotRepresentable,
    PreconditionViolated,
    StabilityViolation,
)
from .linalg import HermEig, hermitian_eig, op_norm
from .phase_estimation import qft
from .simulator import Circuit, QuantumState, apply, ry

QLSP_CAP = 2**12


@dataclass(frozen=True)
class QlspInstance:
    """Linear system ``A x = b`` with unit-norm ``b``.

    Attributes:
        matrix: System matrix.
        rhs: Unit right-hand side.
        kappa: Condition number from singular values.
        xi: ``||A^{-1} b||``.
        metadata: Source description, scale factors and sizes.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    kappa: float
    xi: float
    metadata: dict = field(default_factory=dict, compare=False)

    def solve(self) -> np.ndarray:
        """Dense solution ``A^{-1} b``."""
        return np.linalg.solve(self.matrix, self.rhs)


def make_instance(A: np.ndarray, b: np.ndarray, **metadata) -> QlspInstance:
    """Build a QlspInstance, normalizing ``b`` and recording ``rhs_scale``."""
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex).ravel()
    if A.shape[0] != A.shape[1] or A.shape[0] != b.shape[0]:
        raise DimensionMismatch("matrix and rhs sizes differ")
    if A.shape[0] > QLSP_CAP:
        raise DimensionCap(f"QLSP dimension {A.shape[0]} exceeds {QLSP_CAP}")
    nb = np.linalg.norm(b)
    if nb > 0:
        b = b / nb
    s = np.linalg.svd(A, compute_uv=False)
    kappa = float(s[0] / s[-1]) if s[-1] > 1e-13 else float("inf")
    xi = float(np.linalg.norm(np.linalg.solve(A, b))) if np.isfinite(kappa) else float("inf")
    metadata.setdefault("rhs_scale", float(nb))
    return QlspInstance(A, b, kappa, xi, metadata)


# ---------------------------------------------------------------------------
# Controlled rotation and HHL
# ---------------------------------------------------------------------------

def controlled_rotation(d: int) -> Circuit:
    """``|0>|theta> -> (cos(pi theta)|0> + sin(pi theta)|1>)|theta>``.

    Qubit 0 is the signal; qubits ``1..d`` hold ``theta = 0.theta_{d-1}...theta_0``
    with the most significant bit first. Bit ``k`` from the top controls
    ``Ry(pi / 2^k)``.

    Raises:
        DimensionCap: If ``d`` is outside ``[1, 10]``.
    """
    if not 1 <= d <= 10:
        raise DimensionCap("controlled_rotation supports 1 <= d <= 10")
    c = Circuit(d + 1)
    for k in range(d):
        c.add("Ry", [0], [(1 + k, 1)], param=np.pi / 2**k)
    return c


def _lookup_rotation(d: int, angle: Callable[[int], float]) -> np.ndarray:
    """Unitary ``sum_k Ry(2 angle(k)) (x) |k><k|`` on signal + d-bit register."""
    D = 2**d
    U = np.zeros((2 * D, 2 * D), dtype=complex)
    for k in range(D):
        R = ry(2 * angle(k))
        for a in range(2):
            for b in range(2):
                U[a * D + k, b * D + k] = R[a, b]
    return U


@dataclass(frozen=True)
class HhlOutput:
    """Result of the HHL circuit.

    Attributes:
        solution_state: Normalized postselected system state.
        p1: Probability of measuring the signal qubit in 1.
        C: Normalization constant.
        d: Eigenvalue-register bits.
        register_leak: Weight left on nonzero eigenvalue-register states after
            uncomputation (zero up to rounding).
    """

    solution_state: QuantumState
    p1: float
    C: float
    d: int
    register_leak: float


def hhl_solve(A, b, d: int, C: float, angle_bits: int | None = None) -> HhlOutput:
    """Solve ``A x = b`` with the HHL circuit for exactly ``d``-bit spectra.

    Register layout: signal qubit, ``d``-qubit eigenvalue register, system.
    The circuit runs QPE with ``U = exp(i 2 pi A)``, a rotation
    ``|0> -> sqrt(1 - C^2/lambda^2)|0> + (C/lambda)|1>`` keyed on the
    eigenvalue register, then inverse QPE, and postselects the signal on 1.

    With ``angle_bits=None`` the rotation angle ``arcsin(C/lambda)`` is looked
    up exactly for every register value. With ``angle_bits = d'`` the angle is
    rounded to ``d'`` bits and applied through ``controlled_rotation(d')``
    on an extra angle register, computed and uncomputed by a permutation.

    Raises:
        EigenvalueNotRepresentable: If an eigenvalue is not ``k / 2^d`` with
            ``1 <= k < 2^d``.
        CTooLarge: If ``C`` exceeds the smallest eigenvalue.
    """
    E = hermitian_eig(A)
    lam = E.eigenvalues
    scaled = lam * 2**d
    if np.any(np.abs(scaled - np.round(scaled)) > 1e-12 * 2**d) or np.any(np.round(scaled) < 1) \
            or np.any(np.round(scaled) >= 2**d):
        raise EigenvalueNotRepresentable(f"eigenvalues {lam} are not exact {d}-bit fractions in (0,1)")
    if C > lam[0] + 1e-12 or C <= 0:
        raise CTooLarge(f"C={C} must lie in (0, lambda_min={lam[0]}]")
    b = np.asarray(b, dtype=complex).ravel()
    b = b / np.linalg.norm(b)
    n = int(round(np.log2(len(b))))
    U = E.apply(lambda x: np.exp(2j * np.pi * x))

    def angle(k):
        return 0.0 if k == 0 else float(np.arcsin(min(1.0, C * 2**d / k)))

    extra = angle_bits or 0
    nq = 1 + extra + d + n
    if nq > 14:
        raise DimensionCap(f"HHL circuit needs {nq} qubits")
    reg = list(range(1 + extra, 1 + extra + d))
    sys = list(range(1 + extra + d, nq))

    qpe_c = Circuit(nq).h(*reg)
    P = U.copy()
    powers = {}
    for i in reversed(range(d)):
        powers[i] = P
        P = P @ P
    for i in reversed(range(d)):
        qpe_c.custom(powers[i], sys, [(reg[i], 1)])
    qpe_c.extend(qft(d, inverse=True), offset=reg[0])

    c = Circuit(nq).extend(qpe_c)
    if angle_bits is None:
        c.custom(_lookup_rotation(d, angle), [0] + reg)
    else:
        ang = list(range(1, 1 + extra))
        perm = np.zeros((2 ** (extra + d),) * 2, dtype=complex)
        for k in range(2**d):
            code = int(round(angle(k) / np.pi * 2**extra)) % 2**extra
            for a in range(2**extra):
                perm[((a ^ code) << d) | k, (a << d) | k] = 1
        c.custom(perm, ang + reg)
        c.extend(controlled_rotation(extra))
        c.custom(perm, ang + reg)
    c.extend(qpe_c.inverse())
    psi0 = QuantumState(nq, np.kron(np.eye(2 ** (1 + extra + d))[0], b))
    out = apply(c, psi0).amplitudes.reshape(2, 2**extra, 2**d, 2**n)
    branch = out[1]
    p1 = float(np.sum(np.abs(branch) ** 2))
    sol = branch[0, 0]
    leak = float(p1 - np.sum(np.abs(sol) ** 2))
    return HhlOutput(QuantumState(n, sol / np.linalg.norm(sol)), p1, C, d, leak)


# ---------------------------------------------------------------------------
# Poisson
# ---------------------------------------------------------------------------

def tridiag_matrix(a: complex, b: complex, N: int) -> np.ndarray:
    """Toeplitz tridiagonal matrix with ``a`` on the diagonal, ``b`` below and
    ``conj(b)`` above."""
    T = np.diag(np.full(N, a, dtype=complex))
    T += np.diag(np.full(N - 1, b, dtype=complex), -1)
    T += np.diag(np.full(N - 1, np.conj(b), dtype=complex), 1)
    return T


def tridiag_eigs(a: complex, b: complex, N: int) -> HermEig:
    """Analytic eigenpairs of :func:`tridiag_matrix`.

    ``lambda_k = a + 2|b| cos(k pi/(N+1))`` and
    ``v_{j,k} = sin(j k pi/(N+1)) e^{i j theta}`` with ``b = |b| e^{i theta}``.
    Eigenvalues are returned ascending with normalized eigenvectors.
    """
    a = complex(a).real
    theta = np.angle(b) if b != 0 else 0.0
    k = np.arange(1, N + 1)
    j = np.arange(1, N + 1)
    lam = a + 2 * abs(b) * np.cos(k * np.pi / (N + 1))
    V = np.sin(np.outer(j, k) * np.pi / (N + 1)) * np.exp(1j * j * theta)[:, None]
    V = V / np.linalg.norm(V, axis=0)
    order = np.argsort(lam, kind="stable")
    return HermEig(lam[order], V[:, order])


def poisson_operator(N: int, dims: int = 1) -> np.ndarray:
    """Unscaled finite-difference Laplacian ``(1/h^2) tridiag(-1, 2, -1)`` as a
    Kronecker sum over ``dims`` dimensions."""
    h = 1 / (N + 1)
    A1 = tridiag_matrix(2, -1, N) / h**2
    A = np.zeros((N**dims, N**dims), dtype=complex)
    for axis in range(dims):
        term = np.array([[1.0 + 0j]])
        for k in range(dims):
            term = np.kron(term, A1 if k == axis else np.eye(N))
        A += term
    return A


def build_poisson(N: int, dims: int = 1, b=None) -> QlspInstance:
    """Poisson QLSP scaled to unit operator norm.

    Args:
        N: Interior grid points per dimension.
        dims: Spatial dimension.
        b: Optional right-hand side (uniform by default).

    Raises:
        DimensionCap: If ``N**dims > 4096``.
    """
    if N**dims > QLSP_CAP:
        raise DimensionCap(f"N^dims = {N ** dims} exceeds {QLSP_CAP}")
    h = 1 / (N + 1)
    A = poisson_operator(N, dims)
    lam_max = dims * (2 + 2 * np.cos(np.pi / (N + 1))) / h**2
    lam_min = dims * (2 - 2 * np.cos(np.pi / (N + 1))) / h**2
    if b is None:
        b = np.ones(N**dims)
    inst = make_instance(A / lam_max, b, source="poisson", N=N, dims=dims, h=h,
                         scale=float(lam_max), kappa_analytic=float(lam_max / lam_min))
    return inst


# ---------------------------------------------------------------------------
# Linear ODE
# ---------------------------------------------------------------------------

def _seq(obj, N: int, shape) -> list:
    if callable(obj):
        return [np.asarray(obj(k), dtype=complex).reshape(shape) for k in range(N)]
    arr = np.asarray(obj, dtype=complex)
    if arr.shape == shape:
        return [arr] * N
    if len(arr) != N:
        raise DimensionMismatch(f"expected {N} entries of shape {shape}")
    return [np.asarray(x, dtype=complex).reshape(shape) for x in arr]


def forward_euler(A_list: Sequence, b_list: Sequence, x0, dt: float) -> np.ndarray:
    """Classical iterates ``x_{k+1} = (I + dt A_k) x_k + dt b_k``; rows ``x_1..x_N``."""
    x = np.asarray(x0, dtype=complex)
    out = []
    for A, b in zip(A_list, b_list):
        x = x + dt * (A @ x) + dt * b
        out.append(x)
    return np.array(out)


def build_ode_qlsp(A_fn, b_fn, x0, dt: float, N: int, padded: bool = False) -> QlspInstance:
    """Forward-Euler discretization of ``x' = A(t) x + b(t)`` as one linear system.

    The block-bidiagonal matrix has identity diagonal blocks and
    ``-(I + dt A_k)`` subdiagonal blocks; the first right-hand-side block is
    ``(I + dt A_0) x0 + dt b_0`` and the rest ``dt b_k``. The padded variant
    appends ``N`` copy blocks ``x_{k+1} - x_k = 0``.

    Args:
        A_fn: Constant matrix, list of ``N`` matrices, or callable ``k -> A_k``.
        b_fn: Constant vector, list, or callable.
        x0: Initial condition.
        dt: Time step.
        N: Number of steps.
        padded: Append ``N`` copy blocks.

    Raises:
        DimensionCap: If the system exceeds 4096 unknowns.
    """
    x0 = np.asarray(x0, dtype=complex).ravel()
    d = len(x0)
    if N == 0:
        return make_instance(np.eye(d), x0, source="ode", dt=dt, N=0, d=d, padded=padded,
                             stable=True)
    A_list = _seq(A_fn, N, (d, d))
    b_list = _seq(b_fn, N, (d,))
    blocks = 2 * N if padded else N
    if blocks * d > QLSP_CAP:
        raise DimensionCap(f"ODE system size {blocks * d} exceeds {QLSP_CAP}")
    stable = all(op_norm(A) * dt < 1 for A in A_list)
    if not stable:
        warnings.warn("forward-Euler step outside ||A|| dt < 1", StabilityViolation, stacklevel=2)
    I = np.eye(d)
    M = np.eye(blocks * d, dtype=complex)
    for k in range(1, N):
        M[k * d:(k + 1) * d, (k - 1) * d:k * d] = -(I + dt * A_list[k])
    for k in range(N, blocks):
        M[k * d:(k + 1) * d, (k - 1) * d:k * d] = -I
    rhs = np.zeros(blocks * d, dtype=complex)
    rhs[:d] = (I + dt * A_list[0]) @ x0 + dt * b_list[0]
    for k in range(1, N):
        rhs[k * d:(k + 1) * d] = dt * b_list[k]
    meta = dict(source="ode", dt=dt, N=N, d=d, padded=padded, stable=stable)
    A0 = A_list[0]
    if all(np.array_equal(A, A0) for A in A_list):
        w, V = np.linalg.eig(A0)
        meta["kappa_V"] = float(np.linalg.cond(V))
        inv_norms = [op_norm(np.linalg.inv(_scalar_block(lam, dt, N))) for lam in w]
        meta["kappa_bound"] = float(meta["kappa_V"] * op_norm(M) * max(inv_norms))
    return make_instance(M, rhs, **meta)


def _scalar_block(a: complex, dt: float, N: int) -> np.ndarray:
    xi = 1 + dt * a
    return np.eye(N, dtype=complex) - xi * np.eye(N, k=-1)


def ode_segments(inst: QlspInstance) -> np.ndarray:
    """Solution blocks ``x_1..x_N`` (or ``2N`` padded) in physical units."""
    x = inst.solve() * inst.metadata["rhs_scale"]
    return x.reshape(-1, inst.metadata["d"])


def ode_condition_bounds(a: complex, dt: float, N: int):
    """Exact condition number of the scalar ODE matrix and its upper bound.

    Returns:
        ``(kappa_exact, 3 / (dt (-Re a) / 2))``.

    Raises:
        PreconditionViolated: Unless ``Re a < 0`` and ``dt |a| < -Re a / |a|``.
    """
    a = complex(a)
    if a.real >= 0 or dt * abs(a) >= -a.real / abs(a):
        raise PreconditionViolated("need Re a < 0 and dt |a| < (-Re a)/|a|")
    M = _scalar_block(a, dt, N)
    s = np.linalg.svd(M, compute_uv=False)
    return float(s[0] / s[-1]), float(3 / (dt * (-a.real) / 2))


def ode_gram(a: complex, dt: float, N: int) -> np.ndarray:
    """``M^dagger M`` for the scalar ODE matrix."""
    M = _scalar_block(complex(a), dt, N)
    return M.conj().T @ M


# ---------------------------------------------------------------------------
# Heat equation
# ---------------------------------------------------------------------------

def build_heat_qlsp(N: int, dims: int = 1, T: float = 0.1, x0=None) -> QlspInstance:
    """Heat equation ``u_t = -A u`` with forward Euler at ``dt <= h^2/8``.

    Args:
        N: Interior points per dimension.
        dims: Spatial dimension.
        T: Final time; zero steps give the identity system.
        x0: Initial condition (product of ``sin(pi x)`` by default).

    Raises:
        DimensionCap: If ``N^dims * steps > 4096``.
    """
    h = 1 / (N + 1)
    A = poisson_operator(N, dims)
    steps = int(np.ceil(T / (h**2 / 8) - 1e-12)) if T > 0 else 0
    dt = T / steps if steps else h**2 / 8
    if x0 is None:
        g = np.sin(np.pi * h * np.arange(1, N + 1))
        x0 = np.array([1.0])
        for _ in range(dims):
            x0 = np.kron(x0, g)
    if N**dims * max(steps, 1) > QLSP_CAP:
        raise DimensionCap("heat system too large")
    inst = build_ode_qlsp(-A, np.zeros(N**dims), x0, dt, steps)
    meta = dict(inst.metadata, source="heat", h=h, dims=dims, T=T, kappa_V=1.0,
                spatial_norm=op_norm(A))
    return QlspInstance(inst.matrix, inst.rhs, inst.kappa, inst.xi, meta)
