"""Pauli-string Hamiltonians, Jordan-Wigner fermions and Trotter evolution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionCap, DimensionMismatch, IndexOutOfRange, NoSplit, NotHermitian
from .linalg import matrix_exp_i, op_norm

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
MAX_DENSE_QUBITS = 10


@dataclass(frozen=True)
class PauliString:
    """``coefficient * P_0 (x) P_1 (x) ... (x) P_{n-1}``.

    Attributes:
        letters: String over ``IXYZ``; letter ``i`` acts on qubit ``i``.
        coefficient: Complex prefactor.
    """

    letters: str
    coefficient: complex = 1.0

    def __post_init__(self):
        if not self.letters or set(self.letters) - set("IXYZ"):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")

    @property
    def n(self) -> int:
        """Qubit count."""
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        """Dense matrix."""
        if self.n > MAX_DENSE_QUBITS:
            raise DimensionCap(f"{self.n} qubits exceed {MAX_DENSE_QUBITS}")
        out = np.array([[complex(self.coefficient)]])
        for ch in self.letters:
            out = np.kron(out, PAULI[ch])
        return out

    def commutes_with(self, other: "PauliString") -> bool:
        """True if the two Pauli words commute."""
        anti = sum(1 for a, b in zip(self.letters, other.letters)
                   if a != "I" and b != "I" and a != b)
        return anti % 2 == 0


@dataclass(frozen=True)
class PauliSum:
    """Sum of Pauli strings on a common register.

    Attributes:
        terms: Tuple of PauliString.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if terms and len({t.n for t in terms}) != 1:
            raise DimensionMismatch("terms act on different qubit counts")
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        """Qubit count."""
        return self.terms[0].n

    def matrix(self) -> np.ndarray:
        """Dense matrix."""
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for t in self.terms:
            out += t.matrix()
        return out

    def mutually_commuting(self) -> bool:
        """True if every pair of terms commutes."""
        return all(a.commutes_with(b) for i, a in enumerate(self.terms) for b in self.terms[i + 1:])

    def to_json(self) -> list:
        """Term list ``[{letters, coefficient: [re, im]}]``."""
        return [{"letters": t.letters, "coefficient": [complex(t.coefficient).real,
                                                      complex(t.coefficient).imag]}
                for t in self.terms]


@dataclass(frozen=True)
class PauliHamiltonian(PauliSum):
    """Hermitian Pauli sum with an optional two-part split.

    Attributes:
        split: ``(indices_1, indices_2)`` partitioning ``terms`` into H1, H2.
    """

    split: tuple | None = None

    def __post_init__(self):
        super().__post_init__()
        if any(abs(complex(t.coefficient).imag) > 1e-12 for t in self.terms):
            raise NotHermitian("Pauli Hamiltonian coefficients must be real")

    def parts(self):
        """``(H1, H2)`` as PauliHamiltonians.

        Raises:
            NoSplit: If no split is attached.
        """
        if self.split is None:
            raise NoSplit("Hamiltonian has no split")
        return tuple(PauliHamiltonian(tuple(self.terms[i] for i in idx)) for idx in self.split)

    @staticmethod
    def from_json(data: Sequence[dict], split=None) -> "PauliHamiltonian":
        """Inverse of :meth:`PauliSum.to_json`."""
        terms = tuple(PauliString(d["letters"], complex(*d["coefficient"])) for d in data)
        return PauliHamiltonian(terms, split)


def _word(n: int, ops: dict) -> str:
    return "".join(ops.get(i, "I") for i in range(n))


def tfim(n: int, g: float, periodic: bool = False) -> PauliHamiltonian:
    """Transverse-field Ising model ``-sum Z_i Z_{i+1} - g sum X_i``.

    The split is ``(ZZ part, X part)``.

    Raises:
        DimensionCap: If ``n`` is outside ``[2, 10]``.
    """
    if not 2 <= n <= MAX_DENSE_QUBITS:
        raise DimensionCap("tfim supports 2 <= n <= 10")
    bonds = [(i, i + 1) for i in range(n - 1)] + ([(n - 1, 0)] if periodic else [])
    zz = [PauliString(_word(n, {i: "Z", j: "Z"}), -1.0) for i, j in bonds]
    xs = [PauliString(_word(n, {i: "X"}), -float(g)) for i in range(n)]
    terms = tuple(zz + xs)
    split = (tuple(range(len(zz))), tuple(range(len(zz), len(terms))))
    return PauliHamiltonian(terms, split)


def jordan_wigner(i: int, n: int, kind: str) -> PauliSum:
    """Jordan-Wigner image of a fermionic operator on mode ``i`` (1-based).

    ``a_i = Z^{(i-1)} (x) (X + iY)/2 (x) I^{(n-i)}``, ``a_i^dagger`` uses
    ``(X - iY)/2`` and ``n_i = (I - Z_i)/2``.

    Raises:
        IndexOutOfRange: Unless ``1 <= i <= n <= 6``.
    """
    if not (1 <= i <= n <= 6):
        raise IndexOutOfRange(f"need 1 <= i <= n <= 6, got i={i}, n={n}")
    zs = {k: "Z" for k in range(i - 1)}
    if kind == "annihilate":
        return PauliSum((PauliString(_word(n, {**zs, i - 1: "X"}), 0.5),
                         PauliString(_word(n, {**zs, i - 1: "Y"}), 0.5j)))
    if kind == "create":
        return PauliSum((PauliString(_word(n, {**zs, i - 1: "X"}), 0.5),
                         PauliString(_word(n, {**zs, i - 1: "Y"}), -0.5j)))
    if kind == "number":
        return PauliSum((PauliString("I" * n, 0.5), PauliString(_word(n, {i - 1: "Z"}), -0.5)))
    raise ValueError(f"unknown kind {kind!r}")


def pauli_exp(term: PauliString, tau: float) -> np.ndarray:
    """``exp(-i tau c P) = cos(tau c) I - i sin(tau c) P`` for a real ``c``."""
    c = complex(term.coefficient).real
    P = PauliString(term.letters, 1.0).matrix()
    return np.cos(tau * c) * np.eye(P.shape[0]) - 1j * np.sin(tau * c) * P


def part_exp(H, tau: float) -> np.ndarray:
    """``exp(-i tau H)``; a product of single-term exponentials when all terms commute."""
    if isinstance(H, PauliSum):
        if H.mutually_commuting():
            out = np.eye(2**H.n, dtype=complex)
            for t in H.terms:
                out = pauli_exp(t, tau) @ out
            return out
        H = H.matrix()
    return matrix_exp_i(H, tau)


def trotter_evolve(H: PauliHamiltonian, t: float, L: int, order: int = 1) -> np.ndarray:
    """Trotter approximation of ``exp(-i H t)`` with ``L`` steps.

    Order 1: ``(e^{-i dt H1} e^{-i dt H2})^L``. Order 2:
    ``(e^{-i dt H2 / 2} e^{-i dt H1} e^{-i dt H2 / 2})^L``.

    Raises:
        NoSplit: If ``H`` has no split.
        DimensionCap: If ``H`` acts on more than 10 qubits.
    """
    if not isinstance(H, PauliHamiltonian) or H.split is None:
        raise NoSplit("trotter_evolve needs a split Hamiltonian")
    if H.n > MAX_DENSE_QUBITS:
        raise DimensionCap("dimension exceeds 2^10")
    H1, H2 = H.parts()
    dt = t / L
    if order == 1:
        step = part_exp(H1, dt) @ part_exp(H2, dt)
    elif order == 2:
        half = part_exp(H2, dt / 2)
        step = half @ part_exp(H1, dt) @ half
    else:
        raise ValueError("order must be 1 or 2")
    return np.linalg.matrix_power(step, L)


def _dense(H) -> np.ndarray:
    return H.matrix() if isinstance(H, PauliSum) else np.asarray(H, dtype=complex)


def commutator_norm(H1, H2) -> float:
    """``||[H1, H2]||``."""
    A, B = _dense(H1), _dense(H2)
    if A.shape != B.shape:
        raise DimensionMismatch("operands differ in dimension")
    return op_norm(A @ B - B @ A)


def trotter_error_bounds(H1, H2, dt: float):
    """One-step first-order Trotter error and its two upper bounds.

    Returns:
        ``(actual, dt^2/2 ||[H1,H2]||, dt^2 nu^2)`` with
        ``nu = max(||H1||, ||H2||)``.

    Raises:
        DimensionMismatch: If the parts act on different spaces.
    """
    A, B = _dense(H1), _dense(H2)
    if A.shape != B.shape:
        raise DimensionMismatch("operands differ in dimension")
    exact = matrix_exp_i(A + B, dt)
    approx = part_exp(H1, dt) @ part_exp(H2, dt)
    actual = op_norm(exact - approx)
    comm = dt**2 / 2 * op_norm(A @ B - B @ A)
    nu = max(op_norm(A), op_norm(B))
    return actual, comm, dt**2 * nu**2


def duhamel_bound(H1, H2, t: float, nodes: int = 64) -> float:
    """``int_0^t ||E(s)|| ds`` for the first-order Trotter defect.

    With ``U~(s) = e^{-i s H1} e^{-i s H2}``, the defect is
    ``E(s) = d/ds U~ + i H U~ = i (e^{-i s H1} H2 - H2 e^{-i s H1}) e^{-i s H2}``,
    so ``||E(s)|| = ||[e^{-i s H1}, H2]||``. Gauss-Legendre quadrature.
    """
    A, B = _dense(H1), _dense(H2)
    x, w = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * t * (x + 1)
    vals = []
    for si in s:
        E = matrix_exp_i(A, si)
        vals.append(op_norm(E @ B - B @ E))
    return float(0.5 * t * np.dot(w, vals))
