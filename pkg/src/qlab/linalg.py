"""Dense complex linear-algebra kernel used as the ground-truth oracle.

All matrices are numpy ``complex128`` arrays. Dimensions are capped at
``DIM_CAP`` so every experiment stays at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionCap, DimensionMismatch, NotHermitian, NotSquare, NotUnitary

DIM_CAP = 2**14
HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
SINGULAR_TOL = 1e-13


def as_matrix(A, square: bool = True) -> np.ndarray:
    """Convert input to a complex 2-D array and enforce the dimension cap.

    Args:
        A: Array-like matrix.
        square: Require a square matrix.

    Returns:
        A ``complex128`` copy of ``A``.

    Raises:
        NotSquare: If ``square`` and the matrix is not square.
        DimensionCap: If a side exceeds ``DIM_CAP``.
    """
    M = np.array(A, dtype=complex)
    if M.ndim != 2:
        raise NotSquare(f"expected a 2-D matrix, got shape {M.shape}")
    if max(M.shape) > DIM_CAP:
        raise DimensionCap(f"dimension {max(M.shape)} exceeds cap {DIM_CAP}")
    if square and M.shape[0] != M.shape[1]:
        raise NotSquare(f"matrix of shape {M.shape} is not square")
    return M


def dagger(A: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(A)).T


def kron(*mats) -> np.ndarray:
    """Kronecker product of the arguments, left factor most significant."""
    out = np.array([[1.0 + 0j]])
    for M in mats:
        out = np.kron(out, np.asarray(M, dtype=complex))
    return out


def op_norm(A) -> float:
    """Operator 2-norm (largest singular value)."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    """Return True when ``||A - A^dagger|| <= tol``."""
    A = np.asarray(A, dtype=complex)
    return A.shape[0] == A.shape[1] and op_norm(A - dagger(A)) <= tol


def is_unitary(U, tol: float = UNITARY_TOL) -> bool:
    """Return True when ``||U^dagger U - I|| <= tol``."""
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return op_norm(dagger(U) @ U - np.eye(U.shape[0])) <= tol


def check_unitary(U, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate and return ``U`` as a complex matrix.

    Raises:
        NotUnitary: If the unitarity check fails.
    """
    U = as_matrix(U)
    if not is_unitary(U, tol):
        raise NotUnitary("matrix fails ||U^dagger U - I|| <= %g" % tol)
    return U


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    V = vectors.copy()
    for i in range(V.shape[1]):
        col = V[:, i]
        k = int(np.argmax(np.abs(col) - 1e-12 * np.arange(len(col))))
        if abs(col[k]) > 0:
            V[:, i] = col * (abs(col[k]) / col[k])
    return V


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition ``A = V diag(lambda) V^dagger`` of a Hermitian matrix.

    Attributes:
        eigenvalues: Real eigenvalues in ascending order.
        eigenvectors: Unitary matrix whose columns are the eigenvectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Matrix function ``V f(Lambda) V^dagger``."""
        V = self.eigenvectors
        return (V * f(self.eigenvalues)) @ dagger(V)


def hermitian_eig(A) -> HermEig:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        A: Hermitian matrix.

    Returns:
        HermEig with ascending eigenvalues and gauge-fixed eigenvectors.

    Raises:
        NotSquare: If ``A`` is not square.
        NotHermitian: If ``||A - A^dagger|| > 1e-10``.
    """
    A = as_matrix(A)
    if not is_hermitian(A):
        raise NotHermitian("matrix is not Hermitian within %g" % HERMITIAN_TOL)
    A = (A + dagger(A)) / 2
    w, V = np.linalg.eigh(A)
    return HermEig(eigenvalues=w, eigenvectors=_fix_gauge(V))


@dataclass(frozen=True)
class Svd:
    """Singular value decomposition ``A = W diag(sigma) V^dagger``.

    Attributes:
        left: Unitary ``W`` (left singular vectors as columns).
        singulars: Nonnegative singular values in descending order.
        right: Unitary ``V`` (right singular vectors as columns).
    """

    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray

    def apply_odd(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Generalized transform ``W f(Sigma) V^dagger`` (diamond)."""
        return (self.left * f(self.singulars)) @ dagger(self.right)

    def apply_right(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Right transform ``V f(Sigma) V^dagger`` (triangle-right)."""
        return (self.right * f(self.singulars)) @ dagger(self.right)

    def apply_left(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Left transform ``W f(Sigma) W^dagger`` (triangle-left)."""
        return (self.left * f(self.singulars)) @ dagger(self.left)


def svd(A) -> Svd:
    """Singular value decomposition of a square matrix with a fixed gauge.

    The largest-magnitude entry of every right singular vector is real
    positive; the matching left vector absorbs the same phase.

    Raises:
        NotSquare: If ``A`` is not square.
    """
    A = as_matrix(A)
    W, s, Vh = np.linalg.svd(A)
    V = dagger(Vh)
    Vf = _fix_gauge(V)
    # Vf = V * c with |c| = 1 per column, so W takes the same phase.
    c = np.einsum("ij,ij->j", np.conj(V), Vf)
    return Svd(left=W * c, singulars=s, right=Vf)


def condition_number(A) -> float:
    """Ratio of extreme singular values; ``inf`` when sigma_min < 1e-13."""
    s = np.linalg.svd(as_matrix(A), compute_uv=False)
    if s[-1] < SINGULAR_TOL:
        return float("inf")
    return float(s[0] / s[-1])


def matrix_exp_i(H, t: float) -> np.ndarray:
    """Time-evolution operator ``exp(-i H t)`` via eigendecomposition.

    Raises:
        NotHermitian: If ``H`` is not Hermitian.
    """
    E = hermitian_eig(H)
    return E.apply(lambda lam: np.exp(-1j * lam * t))


def matrix_function(A, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Hermitian matrix function ``V f(Lambda) V^dagger``."""
    return hermitian_eig(A).apply(f)


@dataclass(frozen=True)
class IntervalUnion:
    """Union of closed real intervals, sorted by left endpoint.

    Attributes:
        intervals: Tuple of ``(left, right)`` pairs.
    """

    intervals: tuple

    def contains(self, x: float, tol: float = 1e-10) -> bool:
        """Return True if ``x`` lies in some interval (with slack ``tol``)."""
        return any(lo - tol <= x <= hi + tol for lo, hi in self.intervals)

    @property
    def lower(self) -> float:
        """Smallest left endpoint."""
        return min(lo for lo, _ in self.intervals)

    @property
    def upper(self) -> float:
        """Largest right endpoint."""
        return max(hi for _, hi in self.intervals)


def gershgorin_bounds(A) -> IntervalUnion:
    """Gershgorin discs projected on the real axis.

    Each row gives the interval ``[Re a_ii - R_i, Re a_ii + R_i]`` with
    ``R_i = sum_{j != i} |a_ij|``.

    Raises:
        NotSquare: If ``A`` is not square.
    """
    A = as_matrix(A)
    centers = np.real(np.diag(A))
    radii = np.sum(np.abs(A), axis=1) - np.abs(np.diag(A))
    ivs = sorted((float(c - r), float(c + r)) for c, r in zip(centers, radii))
    return IntervalUnion(tuple(ivs))


def ordered_product(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Product ``U_K ... U_2 U_1`` where ``mats[0]`` acts first."""
    out = np.eye(np.asarray(mats[0]).shape[0], dtype=complex)
    for M in mats:
        out = np.asarray(M) @ out
    return out


def compose_error(exact: Sequence, approx: Sequence) -> float:
    """Error of a product of approximate unitaries.

    Args:
        exact: Unitaries ``U_1..U_K`` (``U_1`` applied first).
        approx: Approximations of the same length and dimension.

    Returns:
        ``||prod exact - prod approx||``, which never exceeds the sum of the
        individual errors (checked).

    Raises:
        DimensionMismatch: On length or dimension disagreement.
    """
    if len(exact) != len(approx) or len(exact) == 0:
        raise DimensionMismatch("lists must be nonempty and of equal length")
    shapes = {np.asarray(M).shape for M in list(exact) + list(approx)}
    if len(shapes) != 1:
        raise DimensionMismatch(f"inconsistent shapes {sorted(shapes)}")
    err = op_norm(ordered_product(exact) - ordered_product(approx))
    bound = sum(op_norm(np.asarray(u) - np.asarray(v)) for u, v in zip(exact, approx))
    assert err <= bound + 1e-12, "hybrid-argument bound violated"
    return err


def complete_unitary(first_column) -> np.ndarray:
    """Unitary whose first column is the given unit vector.

    Uses a Householder reflection, so the result is deterministic.
    """
    v = np.asarray(first_column, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    n = len(v)
    e = np.zeros(n, dtype=complex)
    e[0] = 1
    # Choose phase so that H e_0 = v exactly: H = I - 2 w w^dagger, then fix phase.
    ph = v[0] / abs(v[0]) if abs(v[0]) > 1e-300 else 1.0
    u = e * ph - v
    nu = np.linalg.norm(u)
    if nu < 1e-15:
        Hm = np.eye(n, dtype=complex)
    else:
        w = u / nu
        Hm = np.eye(n, dtype=complex) - 2 * np.outer(w, np.conj(w))
    # Hm maps ph*e_0 to v, so Hm e_0 = v / ph; scale the first column back.
    Q = Hm.copy()
    Q[:, 0] *= ph
    return Q


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix from the Gaussian unitary ensemble."""
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (Z + dagger(Z)) / 2


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random unit vector drawn from the complex Gaussian distribution."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
