"""Query-model primitives: Deutsch, Grover, amplitude amplification and
damping, the search lower-bound experiment, Hadamard and swap tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadFlagStructure, DimensionMismatch, PreconditionViolated
from .linalg import check_unitary, random_unitary
from .simulator import Circuit, QuantumState, apply


# ---------------------------------------------------------------------------
# Deutsch
# ---------------------------------------------------------------------------

def deutsch_oracle(f_table) -> np.ndarray:
    """Oracle ``U_f|x, y> = |x, y XOR f(x)>`` on two qubits."""
    U = np.zeros((4, 4), dtype=complex)
    for x in (0, 1):
        for y in (0, 1):
            U[2 * x + (y ^ int(f_table[x])), 2 * x + y] = 1
    return U


def deutsch(f_table) -> str:
    """Classify ``f: {0,1} -> {0,1}`` with one oracle query.

    Args:
        f_table: Mapping or sequence with entries for 0 and 1.

    Returns:
        ``"constant"`` or ``"balanced"``.
    """
    c = Circuit(2).x(1).h(0, 1)
    c.custom(deutsch_oracle(f_table), [0, 1], label="oracle")
    c.h(0)
    assert c.count("oracle") == 1
    p1 = apply(c, QuantumState.zero(2)).probabilities([0])[1]
    return "balanced" if p1 > 0.5 else "constant"


# ---------------------------------------------------------------------------
# Grover search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchProblem:
    """Unstructured search over ``2**n`` items.

    Attributes:
        n: Qubit count.
        marked: Marked basis indices.
    """

    n: int
    marked: tuple

    def __post_init__(self):
        marked = tuple(sorted(set(int(x) for x in self.marked)))
        if not marked or marked[0] < 0 or marked[-1] >= 2**self.n:
            raise PreconditionViolated("marked set must be nonempty with indices < 2**n")
        object.__setattr__(self, "marked", marked)

    @property
    def N(self) -> int:
        """Search space size."""
        return 2**self.n

    @property
    def theta(self) -> float:
        """Rotation angle ``2 arcsin(sqrt(M/N))``."""
        return 2 * np.arcsin(np.sqrt(len(self.marked) / self.N))

    def recommended_k(self) -> int:
        """Iteration count ``round(pi/(2 theta) - 1/2)``."""
        return int(round(np.pi / (2 * self.theta) - 0.5))


@dataclass(frozen=True)
class GroverRun:
    """Result of ``k`` Grover iterations.

    Attributes:
        k: Iteration count.
        theta: Rotation angle.
        success_prob: Simulated probability of measuring a marked item.
    """

    k: int
    theta: float
    success_prob: float

    @property
    def closed_form(self) -> float:
        """``sin^2((2k+1) theta / 2)``."""
        return float(np.sin((2 * self.k + 1) * self.theta / 2) ** 2)


def flip_pattern(c: Circuit, qubits: Sequence[int], bits: str) -> Circuit:
    """Append ``I - 2|bits><bits|`` on ``qubits`` (identity elsewhere).

    Built from X conjugation and a multi-controlled Z.
    """
    t = qubits[-1]
    ctrl = [(q, int(b)) for q, b in zip(qubits[:-1], bits[:-1])]
    if bits[-1] == "0":
        c.x(t)
    c.add("Z", [t], ctrl)
    if bits[-1] == "0":
        c.x(t)
    return c


def oracle_circuit(problem: SearchProblem) -> Circuit:
    """Phase oracle ``R_x0 = I - 2 sum_x0 |x0><x0|`` on ``n`` qubits."""
    c = Circuit(problem.n)
    for x in problem.marked:
        flip_pattern(c, list(range(problem.n)), format(x, f"0{problem.n}b"))
    return c


def diffusion_circuit(n: int) -> Circuit:
    """``H^n (I - 2|0><0|) H^n``, which equals ``-R_psi0``."""
    c = Circuit(n).h(*range(n))
    c.x(*range(n))
    c.add("Z", [n - 1], [(q, 1) for q in range(n - 1)])
    c.x(*range(n))
    return c.h(*range(n))


def grover_kickback_circuit(problem: SearchProblem, k: int) -> Circuit:
    """``k`` Grover iterations with a ``|->`` signal qubit (index ``n``).

    The oracle flips the signal qubit when the register holds a marked item,
    kicking back a ``-1`` phase. The zero reflection uses a zero-controlled X
    on the same signal qubit.
    """
    n = problem.n
    c = Circuit(n + 1).x(n).h(n)
    c.h(*range(n))
    for _ in range(k):
        for x in problem.marked:
            bits = format(x, f"0{n}b")
            c.add("X", [n], [(q, int(b)) for q, b in enumerate(bits)], label="oracle")
        c.h(*range(n))
        c.add("X", [n], [(q, 0) for q in range(n)])
        c.h(*range(n))
    return c


def reflection_matrices(problem: SearchProblem):
    """Dense ``(R_psi0, R_x0)`` with ``R_psi0 = 2|psi0><psi0| - I``."""
    N = problem.N
    psi0 = np.full(N, 1 / np.sqrt(N))
    R_psi0 = 2 * np.outer(psi0, psi0) - np.eye(N)
    R_x0 = np.eye(N, dtype=complex)
    for x in problem.marked:
        R_x0[x, x] = -1
    return R_psi0.astype(complex), R_x0


def grover_search(problem: SearchProblem, k: int) -> GroverRun:
    """Simulate ``G^k|psi0>`` from gates and measure the marked probability.

    Args:
        problem: Search instance.
        k: Iteration count (``k >= 0``).

    Returns:
        GroverRun with the simulated success probability.
    """
    if k < 0:
        raise PreconditionViolated("k must be nonnegative")
    c = grover_kickback_circuit(problem, k)
    p = apply(c, QuantumState.zero(problem.n + 1)).probabilities(list(range(problem.n)))
    return GroverRun(k, problem.theta, float(sum(p[x] for x in problem.marked)))


# ---------------------------------------------------------------------------
# Amplitude amplification and damping
# ---------------------------------------------------------------------------

def _good_split(psi: np.ndarray, n_total: int, m: int, outcome: str):
    """Split ``psi`` into good (flag == outcome) and bad components."""
    mask = np.zeros(2**n_total, dtype=bool)
    block = 2 ** (n_total - m)
    start = int(outcome, 2) * block if m else 0
    mask[start:start + block] = True
    good = np.where(mask, psi, 0)
    return good, psi - good, mask


def _flag(good_flag, n_total: int):
    if isinstance(good_flag, int):
        m, outcome = good_flag, "0" * good_flag
    else:
        m, outcome = good_flag
        outcome = str(outcome)
    if len(outcome) != m or set(outcome) - {"0", "1"} or not 1 <= m < n_total + 1:
        raise BadFlagStructure(f"bad flag ({m}, {outcome!r}) for {n_total} qubits")
    return m, outcome


def amplitude_amplify(prepare: Circuit, good_flag, k: int, mode: str = "amplify",
                      alpha: float | None = None):
    """Amplify or dampen the good branch of a prepared state.

    The good branch is where the leading ``m`` qubits equal ``outcome``.

    Args:
        prepare: Circuit ``U`` with ``U|0> = sqrt(p0)|good> + sqrt(1-p0)|bad>``.
        good_flag: ``m`` (outcome ``0^m``) or ``(m, outcome)``.
        k: Grover iterations (amplify mode).
        mode: ``"amplify"`` or ``"dampen"``.
        alpha: Target good-branch amplitude in dampen mode (``alpha <= sqrt(p0)``).

    Returns:
        ``(final_state, good_probability)``. In dampen mode one extra leading
        signal qubit is added and the good branch requires it to be 0.

    Raises:
        BadFlagStructure: If the flag is malformed or the split is inconsistent.
    """
    n = prepare.n
    m, outcome = _flag(good_flag, n)
    psi = apply(prepare, QuantumState.zero(n)).amplitudes
    good, bad, mask = _good_split(psi, n, m, outcome)
    if np.linalg.norm(bad[mask]) > 1e-10:
        raise BadFlagStructure("bad branch has weight inside the good subspace")
    p0 = float(np.vdot(good, good).real)

    if mode == "dampen":
        if alpha is None or alpha < 0 or alpha > np.sqrt(p0) + 1e-12:
            raise PreconditionViolated("dampen requires 0 <= alpha <= sqrt(p0)")
        theta = np.arccos(min(1.0, alpha / np.sqrt(p0))) if p0 > 0 else 0.0
        c = Circuit(n + 1).add("Ry", [0], param=2 * theta)
        c.extend(prepare, offset=1)
        state = apply(c, QuantumState.zero(n + 1))
        _, _, mask2 = _good_split(state.amplitudes, n + 1, m + 1, "0" + outcome)
        return state, float(np.sum(np.abs(state.amplitudes[mask2]) ** 2))
    if mode != "amplify":
        raise PreconditionViolated(f"unknown mode {mode!r}")

    # G = R_psi0 R_good. Both reflections built from gates; the zero reflection
    # circuit U (I - 2|0><0|) U^dagger equals -R_psi0, so the state carries the
    # global sign (-1)^k, which does not affect probabilities.
    G = Circuit(n)
    flip_pattern(G, list(range(m)), outcome)
    G.extend(prepare.inverse())
    flip_pattern(G, list(range(n)), "0" * n)
    G.extend(prepare)
    state = QuantumState(n, psi)
    for _ in range(k):
        state = apply(G, state)
    return state, float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


# ---------------------------------------------------------------------------
# Lower bound experiment
# ---------------------------------------------------------------------------

def lower_bound_trajectory(n: int, k: int, seed: int) -> np.ndarray:
    """``D_0, ..., D_k`` for random query algorithms on ``n`` qubits.

    ``D_j = sum_x0 || |psi_j^{x0}> - |psi_j> ||^2`` where the oracle-free run
    applies ``U_j ... U_1`` and the oracle run interleaves ``R_x0`` before
    each ``U_i``. The initial state is the uniform superposition and the
    ``U_i`` are Haar random (QR of Gaussian matrices).
    """
    if k < 0:
        raise PreconditionViolated("k must be nonnegative")
    rng = np.random.default_rng(seed)
    N = 2**n
    Us = [random_unitary(N, rng) for _ in range(k)]
    psi = np.full(N, 1 / np.sqrt(N), dtype=complex)
    # Columns are the oracle runs for every x0.
    runs = np.tile(psi[:, None], (1, N))
    D = [0.0]
    for U in Us:
        runs[np.arange(N), np.arange(N)] *= -1
        runs = U @ runs
        psi = U @ psi
        D.append(float(np.sum(np.abs(runs - psi[:, None]) ** 2)))
    return np.array(D)


def lower_bound_experiment(n: int, k: int, seed: int) -> float:
    """Return ``D_k``, which always satisfies ``D_k <= 4 k^2``."""
    return float(lower_bound_trajectory(n, k, seed)[-1])


# ---------------------------------------------------------------------------
# Hadamard and swap tests
# ---------------------------------------------------------------------------

def hadamard_test_circuit(U: np.ndarray, imag: bool = False) -> Circuit:
    """Hadamard-test circuit: ancilla 0 controls ``U`` on the remaining qubits."""
    n = int(round(np.log2(U.shape[0])))
    c = Circuit(n + 1).h(0)
    if imag:
        c.add("Sdg", [0])
    c.custom(U, list(range(1, n + 1)), [(0, 1)], label="oracle")
    return c.h(0)


def swap_test_circuit(n: int) -> Circuit:
    """Swap test on two ``n``-qubit registers after ancilla 0."""
    c = Circuit(2 * n + 1).h(0)
    for q in range(n):
        c.add("SWAP", [1 + q, 1 + n + q], [(0, 1)])
    return c.h(0)


def overlap_test(mode: str, psi, U=None, phi=None) -> float:
    """Exact probability of measuring 0 on the test ancilla.

    Args:
        mode: ``hadamard_real``, ``hadamard_imag`` or ``swap``.
        psi: Normalized input state (vector or QuantumState).
        U: Unitary for the Hadamard tests.
        phi: Second state for the swap test.

    Returns:
        ``(1 + Re<psi|U|psi>)/2``, ``(1 + Im<psi|U|psi>)/2`` or
        ``(1 + |<phi|psi>|^2)/2``.

    Raises:
        NotUnitary: If ``U`` is not unitary.
    """
    psi = psi.amplitudes if isinstance(psi, QuantumState) else np.asarray(psi, dtype=complex)
    n = int(round(np.log2(len(psi))))
    if mode in ("hadamard_real", "hadamard_imag"):
        U = check_unitary(U)
        if U.shape[0] != len(psi):
            raise DimensionMismatch("U and psi dimensions differ")
        c = hadamard_test_circuit(U, imag=(mode == "hadamard_imag"))
        state = QuantumState(n + 1, np.kron([1, 0], psi))
    elif mode == "swap":
        phi = phi.amplitudes if isinstance(phi, QuantumState) else np.asarray(phi, dtype=complex)
        c = swap_test_circuit(n)
        state = QuantumState(2 * n + 1, np.kron([1, 0], np.kron(phi, psi)))
    else:
        raise PreconditionViolated(f"unknown mode {mode!r}")
    return float(apply(c, state).probabilities([0])[0])


__all__ = [
    "SearchProblem", "GroverRun", "deutsch", "deutsch_oracle", "grover_search",
    "grover_kickback_circuit", "oracle_circuit", "diffusion_circuit", "flip_pattern",
    "reflection_matrices", "amplitude_amplify", "lower_bound_experiment",
    "lower_bound_trajectory", "overlap_test", "hadamard_test_circuit", "swap_test_circuit",
]
