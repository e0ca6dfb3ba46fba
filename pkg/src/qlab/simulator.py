"""Gate-level state-vector simulator.

Qubit 0 is the most significant bit of a basis index (row-major order), so
``(X (x) I)|00> = |10>``. Gates are applied by reshaping the amplitude vector
into a ``(2,) * n`` tensor and contracting on the target axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionCap,
    DimensionMismatch,
    EmptyKeepSet,
    NotNormalized,
    NotUnitary,
    QubitIndexOutOfRange,
    ZeroProbabilityBranch,
)
from .linalg import dagger, is_unitary

MAX_QUBITS = 14
NORM_TOL = 1e-10

_SQ2 = 1 / np.sqrt(2)
_FIXED = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_INVERSE_KIND = {"S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T"}


def rz(theta: float) -> np.ndarray:
    """``Rz(theta) = exp(-i theta Z / 2)``."""
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta: float) -> np.ndarray:
    """``Ry(theta) = exp(-i theta Y / 2)``, mapping |0> to cos|0> + sin|1>."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    """``Rx(theta) = exp(-i theta X / 2)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """One gate: a base matrix on ``targets``, conditioned on ``controls``.

    Attributes:
        kind: Gate name (H, X, Y, Z, S, Sdg, T, Tdg, Rz, Ry, Rx, CNOT, SWAP,
            Toffoli, Custom).
        targets: Target qubits; the base matrix acts on them in this order.
        controls: Pairs ``(qubit, polarity)``; the gate fires when every
            control qubit equals its polarity.
        param: Rotation angle for Rz, Ry, Rx.
        matrix: Dense matrix for Custom gates.
        label: Free-form tag (used for oracle query accounting).
    """

    kind: str
    targets: tuple
    controls: tuple = ()
    param: float | None = None
    matrix: np.ndarray | None = field(default=None, compare=False)
    label: str = ""

    def base_matrix(self) -> np.ndarray:
        """Matrix acting on the target qubits (without controls)."""
        k = self.kind
        if k in _FIXED:
            return _FIXED[k]
        if k in ("CNOT", "Toffoli"):
            return _FIXED["X"]
        if k == "Rz":
            return rz(self.param)
        if k == "Ry":
            return ry(self.param)
        if k == "Rx":
            return rx(self.param)
        if k == "Custom":
            return self.matrix
        raise ValueError(f"unknown gate kind {k!r}")

    def qubits(self) -> list:
        """All qubits touched by the gate."""
        return list(self.targets) + [q for q, _ in self.controls]

    def inverse(self) -> "GateOp":
        """The inverse gate."""
        k = self.kind
        if k in _INVERSE_KIND:
            return GateOp(_INVERSE_KIND[k], self.targets, self.controls, label=self.label)
        if k in ("Rz", "Ry", "Rx"):
            return GateOp(k, self.targets, self.controls, -self.param, label=self.label)
        if k == "Custom":
            return GateOp(k, self.targets, self.controls, matrix=dagger(self.matrix), label=self.label)
        return self


def _normalize_op(kind: str, targets, controls, param, matrix, label) -> GateOp:
    targets = tuple(int(t) for t in (targets if isinstance(targets, Iterable) else [targets]))
    ctrl = []
    for c in controls:
        if isinstance(c, (tuple, list)):
            ctrl.append((int(c[0]), int(c[1])))
        else:
            ctrl.append((int(c), 1))
    if kind == "CNOT" and len(targets) == 2 and not ctrl:
        ctrl, targets = [(targets[0], 1)], (targets[1],)
    if kind == "Toffoli" and len(targets) == 3 and not ctrl:
        ctrl, targets = [(targets[0], 1), (targets[1], 1)], (targets[2],)
    if matrix is not None:
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (2 ** len(targets),) * 2:
            raise DimensionMismatch("custom matrix size does not match target count")
        if not is_unitary(matrix):
            raise NotUnitary("custom gate matrix is not unitary")
    tset = set(targets)
    cset = {q for q, _ in ctrl}
    if len(tset) != len(targets) or len(cset) != len(ctrl) or tset & cset:
        raise QubitIndexOutOfRange("target and control qubits must be distinct")
    return GateOp(kind, targets, tuple(ctrl), param, matrix, label)


@dataclass
class Circuit:
    """Ordered list of gates on ``n`` qubits; the first gate acts first.

    Attributes:
        n: Qubit count.
        ops: Gate list.
    """

    n: int
    ops: list = field(default_factory=list)

    def add(self, kind: str, targets, controls=(), param=None, matrix=None, label="") -> "Circuit":
        """Append a gate and return ``self`` for chaining.

        Raises:
            QubitIndexOutOfRange: If an index is outside ``[0, n)``.
        """
        op = _normalize_op(kind, targets, controls, param, matrix, label)
        for q in op.qubits():
            if not 0 <= q < self.n:
                raise QubitIndexOutOfRange(f"qubit {q} outside register of {self.n}")
        self.ops.append(op)
        return self

    def h(self, *qs):
        """Hadamard on each listed qubit."""
        for q in qs:
            self.add("H", q)
        return self

    def x(self, *qs):
        """Pauli X on each listed qubit."""
        for q in qs:
            self.add("X", q)
        return self

    def custom(self, matrix, targets, controls=(), label="") -> "Circuit":
        """Append a dense unitary acting on ``targets``."""
        return self.add("Custom", targets, controls, matrix=matrix, label=label)

    def extend(self, other: "Circuit", offset: int = 0) -> "Circuit":
        """Append all gates of ``other`` shifted by ``offset`` qubits."""
        for op in other.ops:
            t = tuple(q + offset for q in op.targets)
            c = tuple((q + offset, p) for q, p in op.controls)
            self.add(op.kind, t, c, op.param, op.matrix, op.label)
        return self

    def inverse(self) -> "Circuit":
        """Circuit implementing the inverse unitary."""
        return Circuit(self.n, [op.inverse() for op in reversed(self.ops)])

    def count(self, label: str) -> int:
        """Number of gates carrying ``label``."""
        return sum(1 for op in self.ops if op.label == label)


@dataclass(frozen=True)
class QuantumState:
    """Amplitude vector of ``n`` qubits.

    Attributes:
        n: Qubit count.
        amplitudes: Complex vector of length ``2**n``.
        normalized: Whether the vector is declared to have unit norm.
    """

    n: int
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.shape[0] != 2**self.n:
            raise DimensionMismatch(f"{amps.shape[0]} amplitudes for {self.n} qubits")
        if self.n > MAX_QUBITS:
            raise DimensionCap(f"{self.n} qubits exceed cap {MAX_QUBITS}")
        if self.normalized and abs(np.linalg.norm(amps) - 1) > NORM_TOL:
            raise NotNormalized(f"norm {np.linalg.norm(amps)} != 1")
        object.__setattr__(self, "amplitudes", amps)

    @staticmethod
    def from_vector(v, normalize: bool = False) -> "QuantumState":
        """Wrap a vector whose length is a power of two."""
        v = np.asarray(v, dtype=complex).ravel()
        n = int(round(np.log2(len(v))))
        if 2**n != len(v):
            raise DimensionMismatch("length is not a power of two")
        if normalize:
            v = v / np.linalg.norm(v)
        return QuantumState(n, v)

    @staticmethod
    def basis(n: int, index) -> "QuantumState":
        """Computational basis state from an integer or a bitstring."""
        if isinstance(index, str):
            index = int(index, 2) if index else 0
        v = np.zeros(2**n, dtype=complex)
        v[index] = 1
        return QuantumState(n, v)

    @staticmethod
    def zero(n: int) -> "QuantumState":
        """The all-zero state."""
        return QuantumState.basis(n, 0)

    def tensor(self, other: "QuantumState") -> "QuantumState":
        """Tensor product ``self (x) other``."""
        return QuantumState(self.n + other.n, np.kron(self.amplitudes, other.amplitudes),
                            self.normalized and other.normalized)

    def norm(self) -> float:
        """Euclidean norm of the amplitude vector."""
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self, qubits: Sequence[int] | None = None) -> np.ndarray:
        """Marginal distribution over the listed qubits (all by default)."""
        p = np.abs(self.amplitudes) ** 2
        if qubits is None:
            return p
        return marginal(p, self.n, qubits)


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator.

    Attributes:
        matrix: Hermitian, positive semidefinite, unit-trace matrix.
    """

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        """Matrix dimension."""
        return self.matrix.shape[0]

    def check(self, tol: float = 1e-10) -> bool:
        """Return True if trace, Hermiticity and positivity hold within ``tol``."""
        M = self.matrix
        herm = np.max(np.abs(M - dagger(M))) <= tol
        return bool(abs(np.trace(M) - 1) <= tol and herm
                    and np.linalg.eigvalsh((M + dagger(M)) / 2)[0] >= -tol)


def marginal(p: np.ndarray, n: int, qubits: Sequence[int]) -> np.ndarray:
    """Marginal of a distribution over ``n`` qubits onto ``qubits`` (in order)."""
    for q in qubits:
        if not 0 <= q < n:
            raise QubitIndexOutOfRange(f"qubit {q} outside register of {n}")
    t = p.reshape((2,) * n)
    others = tuple(q for q in range(n) if q not in qubits)
    m = t.sum(axis=others) if others else t
    kept = sorted(qubits)
    m = np.transpose(m, [kept.index(q) for q in qubits])
    return m.ravel()


def _apply_op(psi: np.ndarray, n: int, op: GateOp) -> np.ndarray:
    """Apply one gate to a tensor of shape ``(2,)*n + extra``."""
    idx = [slice(None)] * psi.ndim
    for q, pol in op.controls:
        idx[q] = pol
    idx = tuple(idx)
    sub = psi[idx]
    removed = sorted(q for q, _ in op.controls)
    axes = [t - sum(1 for r in removed if r < t) for t in op.targets]
    k = len(op.targets)
    G = op.base_matrix().reshape((2,) * (2 * k))
    out = np.tensordot(G, sub, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    if op.controls:
        psi = psi.copy()
        psi[idx] = out
        return psi
    return out


def _run(circuit: Circuit, tensor: np.ndarray) -> np.ndarray:
    for op in circuit.ops:
        tensor = _apply_op(tensor, circuit.n, op)
    return tensor


def apply(circuit: Circuit, state: QuantumState) -> QuantumState:
    """Apply a circuit to a state.

    Raises:
        DimensionMismatch: If qubit counts differ.
    """
    if circuit.n != state.n:
        raise DimensionMismatch(f"circuit on {circuit.n} qubits, state on {state.n}")
    out = _run(circuit, state.amplitudes.reshape((2,) * state.n))
    return QuantumState(state.n, out.ravel(), state.normalized)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit.

    Raises:
        DimensionCap: If the circuit has more than 14 qubits.
    """
    n = circuit.n
    if n > MAX_QUBITS:
        raise DimensionCap(f"{n} qubits exceed cap {MAX_QUBITS}")
    N = 2**n
    U = np.eye(N, dtype=complex).reshape((2,) * n + (N,))
    return _run(circuit, U).reshape(N, N)


def measure(state: QuantumState, qubits: Sequence[int], seed: int):
    """Projective computational-basis measurement of ``qubits``.

    Args:
        state: Normalized input state.
        qubits: Measured qubits; the outcome bitstring follows this order.
        seed: Seed for ``numpy.random.default_rng``.

    Returns:
        ``(outcome, collapsed_state, probability)``.

    Raises:
        NotNormalized: If the state is not normalized.
    """
    if not state.normalized or abs(state.norm() - 1) > NORM_TOL:
        raise NotNormalized("measurement requires a normalized state")
    p = state.probabilities(qubits)
    p = p / p.sum()
    k = int(np.random.default_rng(seed).choice(len(p), p=p))
    outcome = format(k, f"0{len(qubits)}b") if qubits else ""
    collapsed, prob = postselect(state, qubits, outcome)
    return outcome, collapsed, prob


def project(amplitudes: np.ndarray, n: int, qubits: Sequence[int], outcome: str) -> np.ndarray:
    """Zero every amplitude inconsistent with ``outcome`` on ``qubits``."""
    if len(outcome) != len(qubits):
        raise DimensionMismatch("outcome length differs from qubit count")
    for q in qubits:
        if not 0 <= q < n:
            raise QubitIndexOutOfRange(f"qubit {q} outside register of {n}")
    t = amplitudes.reshape((2,) * n).copy()
    for q, b in zip(qubits, outcome):
        idx = [slice(None)] * n
        idx[q] = 1 - int(b)
        t[tuple(idx)] = 0
    return t.ravel()


def postselect(state: QuantumState, qubits: Sequence[int], outcome: str):
    """Project onto ``outcome`` for ``qubits`` and renormalize.

    Returns:
        ``(state, probability)``; the returned state keeps all ``n`` qubits.

    Raises:
        ZeroProbabilityBranch: If the outcome has probability below 1e-300.
    """
    v = project(state.amplitudes, state.n, qubits, outcome)
    prob = float(np.vdot(v, v).real)
    if prob <= 1e-300:
        raise ZeroProbabilityBranch(f"outcome {outcome} on {list(qubits)} has probability 0")
    return QuantumState(state.n, v / np.sqrt(prob)), prob


def reduce_state(amplitudes: np.ndarray, n: int, qubits: Sequence[int], outcome: str) -> np.ndarray:
    """Amplitudes of the remaining qubits given ``outcome`` (no renormalization)."""
    t = amplitudes.reshape((2,) * n)
    idx = [slice(None)] * n
    for q, b in zip(qubits, outcome):
        idx[q] = int(b)
    return t[tuple(idx)].ravel()


def partial_trace(state: QuantumState, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on ``keep`` (ordered as given).

    Raises:
        EmptyKeepSet: If ``keep`` is empty.
    """
    return partial_trace_rho(np.outer(state.amplitudes, np.conj(state.amplitudes)), state.n, keep)


def partial_trace_rho(rho: np.ndarray, n: int, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix of a density operator on ``n`` qubits."""
    keep = list(keep)
    if not keep:
        raise EmptyKeepSet("keep set is empty")
    for q in keep:
        if not 0 <= q < n:
            raise QubitIndexOutOfRange(f"qubit {q} outside register of {n}")
    drop = [q for q in range(n) if q not in keep]
    t = np.asarray(rho).reshape((2,) * (2 * n))
    perm = keep + drop + [n + q for q in keep] + [n + q for q in drop]
    t = np.transpose(t, perm)
    dk, dd = 2 ** len(keep), 2 ** len(drop)
    t = t.reshape(dk, dd, dk, dd)
    return DensityMatrix(np.einsum("ajbj->ab", t))


def dephase(rho: np.ndarray, n: int, qubits: Sequence[int]) -> np.ndarray:
    """Nonselective measurement channel ``sum_i P_i rho P_i`` on ``qubits``."""
    out = np.zeros_like(rho, dtype=complex)
    m = len(qubits)
    for k in range(2**m):
        bits = format(k, f"0{m}b")
        mask = project(np.ones(2**n, dtype=complex), n, qubits, bits)
        out += (mask[:, None] * rho) * mask[None, :]
    return out
