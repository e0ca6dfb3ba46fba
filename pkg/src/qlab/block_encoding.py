"""Block encodings: constructors, verification, LCU and dilation.

Ancilla qubits are always the leading (most significant) qubits, so the
encoded block is the top-left ``2**n x 2**n`` corner of the unitary.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InhomogeneousBlocks,
    MaxNormExceeded,
    NormExceedsOne,
    NotBanded,
    NotHermitian,
    NotUnitary,
    PreconditionViolated,
)
from .linalg import (
    complete_unitary,
    dagger,
    is_hermitian,
    is_unitary,
    matrix_exp_i,
    op_norm,
    svd,
)
from .simulator import Circuit, QuantumState, circuit_unitary

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class BlockEncoding:
    """An ``(alpha, m, epsilon)`` block encoding.

    Attributes:
        unitary: Unitary on ``m + n`` qubits (ancillas first).
        m: Ancilla qubits.
        n: System qubits.
        alpha: Subnormalization.
        epsilon: Certified error.
        hermitian: Whether the unitary itself is Hermitian.
        matrix: The encoded matrix ``A`` when known.
    """

    unitary: np.ndarray
    m: int
    n: int
    alpha: float = 1.0
    epsilon: float = 0.0
    hermitian: bool = False
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        U = np.asarray(self.unitary, dtype=complex)
        if U.shape != (2 ** (self.m + self.n),) * 2:
            raise DimensionMismatch(f"unitary shape {U.shape} vs m={self.m}, n={self.n}")
        object.__setattr__(self, "unitary", U)

    @property
    def block(self) -> np.ndarray:
        """Top-left block ``(<0^m| (x) I) U (|0^m> (x) I)``."""
        N = 2**self.n
        return self.unitary[:N, :N]

    @property
    def encoded(self) -> np.ndarray:
        """``alpha`` times the top-left block."""
        return self.alpha * self.block

    def dagger(self) -> "BlockEncoding":
        """Block encoding of ``A^dagger`` given by ``U^dagger``."""
        A = None if self.matrix is None else dagger(self.matrix)
        return replace(self, unitary=dagger(self.unitary), matrix=A)


def topleft(U: np.ndarray, n: int) -> np.ndarray:
    """Top-left ``2**n`` block."""
    return np.asarray(U)[: 2**n, : 2**n]


def z_pi(m: int, n: int) -> np.ndarray:
    """``Z_Pi = 2 Pi - I`` with ``Pi = |0^m><0^m| (x) I_n`` (dense diagonal)."""
    d = -np.ones(2 ** (m + n), dtype=complex)
    d[: 2**n] = 1
    return np.diag(d)


def z_pi_circuit(m: int, n: int) -> Circuit:
    """Circuit for ``Z_Pi`` using one work qubit (last) prepared in ``|1>``.

    A zero-controlled NOT from the ancillas flips the work qubit to ``|0>``
    only when the ancillas are ``0^m``; a Z on the work qubit then marks
    every other ancilla state with ``-1``; the controlled NOT is undone.
    """
    w = m + n
    c = Circuit(m + n + 1)
    c.add("X", [w], [(q, 0) for q in range(m)])
    c.add("Z", [w])
    c.add("X", [w], [(q, 0) for q in range(m)])
    return c


def z_pi_from_circuit(m: int, n: int) -> np.ndarray:
    """Restriction of :func:`z_pi_circuit` to the work qubit in ``|1>``."""
    U = circuit_unitary(z_pi_circuit(m, n))
    idx = np.arange(2 ** (m + n)) * 2 + 1
    return U[np.ix_(idx, idx)]


def be_verify(be: BlockEncoding, A) -> float:
    """Return ``||A - alpha * topleft(U)||`` after checking unitarity.

    Raises:
        DimensionMismatch: If ``A`` does not match the system size.
        NotUnitary: If the unitary fails the unitarity check.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape != (2**be.n,) * 2:
        raise DimensionMismatch(f"A shape {A.shape} vs n={be.n}")
    if not is_unitary(be.unitary):
        raise NotUnitary("block-encoding unitary is not unitary")
    return op_norm(A - be.alpha * be.block)


def postselect_apply(be: BlockEncoding, b) -> tuple:
    """Apply ``U`` to ``|0^m>|b>`` and postselect the ancillas on ``0^m``.

    Returns:
        ``(normalized system state, probability)``.
    """
    b = np.asarray(b, dtype=complex).ravel()
    out = be.unitary[:, : 2**be.n] @ b
    branch = out[: 2**be.n]
    p = float(np.vdot(branch, branch).real)
    return branch / np.sqrt(p) if p > 0 else branch, p


def _n_qubits(N: int) -> int:
    n = int(round(np.log2(N)))
    if 2**n != N:
        raise DimensionMismatch(f"dimension {N} is not a power of two")
    return n


# ---------------------------------------------------------------------------
# Exact constructions
# ---------------------------------------------------------------------------

def be_exact(A, mode: str = "svd_completion") -> BlockEncoding:
    """One-ancilla exact block encoding of a contraction.

    ``svd_completion`` builds ``[[A, W S], [S V^dagger, -Sigma]]`` with
    ``S = sqrt(I - Sigma^2)``. ``diagonal`` builds the controlled rotation
    ``O_A|0>|i> = a_i|0>|i> + sqrt(1 - |a_i|^2)|1>|i>``.

    Raises:
        NormExceedsOne: If ``||A|| > 1`` (or some ``|a_ii| > 1``).
    """
    A = np.asarray(A, dtype=complex)
    n = _n_qubits(A.shape[0])
    if mode == "svd_completion":
        if op_norm(A) > 1 + 1e-12:
            raise NormExceedsOne(f"||A|| = {op_norm(A)} > 1")
        S = svd(A)
        sig = np.clip(S.singulars, 0, 1)
        comp = np.sqrt(1 - sig**2)
        U = np.block([[A, S.left * comp], [comp[:, None] * dagger(S.right), -np.diag(sig).astype(complex)]])
        # Exact form: (W (+) I) [[Sigma, S], [S, -Sigma]] (V^dagger (+) I).
        return BlockEncoding(U, 1, n, 1.0, 0.0, False, A)
    if mode == "diagonal":
        if np.count_nonzero(A - np.diag(np.diag(A))):
            raise PreconditionViolated("diagonal mode needs a diagonal matrix")
        a = np.diag(A)
        if np.max(np.abs(a)) > 1 + 1e-12:
            raise NormExceedsOne("diagonal entry larger than one in magnitude")
        r = np.sqrt(np.clip(1 - np.abs(a) ** 2, 0, None))
        U = np.block([[np.diag(a), -np.diag(r)], [np.diag(r), np.diag(np.conj(a))]])
        return BlockEncoding(U, 1, n, 1.0, 0.0, False, A)
    raise PreconditionViolated(f"unknown mode {mode!r}")


def racbem(n: int, depth: int, seed: int) -> BlockEncoding:
    """Random circuit block encoding on ``n + 1`` qubits.

    Each of ``depth`` gates is either a random Ry/Rz rotation on a random
    qubit or a CNOT between random distinct qubits; qubit 0 is the ancilla.
    """
    if not 1 <= n <= 8:
        raise PreconditionViolated("racbem supports 1 <= n <= 8")
    rng = np.random.default_rng(seed)
    c = Circuit(n + 1)
    for _ in range(depth):
        kind = rng.integers(3)
        if kind < 2:
            q = int(rng.integers(n + 1))
            c.add("Ry" if kind == 0 else "Rz", [q], param=float(rng.uniform(0, 2 * np.pi)))
        else:
            q1, q2 = (int(x) for x in rng.choice(n + 1, size=2, replace=False))
            c.add("CNOT", [q1, q2])
    U = circuit_unitary(c)
    return BlockEncoding(U, 1, n, 1.0, 0.0, False, topleft(U, n).copy())


# ---------------------------------------------------------------------------
# Sparse constructions
# ---------------------------------------------------------------------------

def _entry_rotation(values: np.ndarray) -> np.ndarray:
    """``O_A`` on a signal qubit (leading) times a register indexed by ``values``.

    ``|0>|r> -> v_r|0>|r> + sqrt(1 - |v_r|^2)|1>|r>``.
    """
    v = np.asarray(values, dtype=complex).ravel()
    r = np.sqrt(np.clip(1 - np.abs(v) ** 2, 0, None))
    return np.block([[np.diag(v), -np.diag(r)], [np.diag(r), np.diag(np.conj(v))]])


def _next_pow2(x: int) -> int:
    return 1 if x <= 1 else 2 ** int(np.ceil(np.log2(x)))


def _patterns(A: np.ndarray, s: int, axis: int) -> np.ndarray:
    """Per-column (axis=0) or per-row (axis=1) index lists padded to ``s``.

    Entry ``[j, l]`` is the ``l``-th nonzero row of column ``j`` (axis 0);
    padding uses the smallest unused indices.
    """
    N = A.shape[0]
    M = A if axis == 0 else A.T
    out = np.zeros((N, s), dtype=int)
    for j in range(N):
        nz = [i for i in range(N) if abs(M[i, j]) > 0]
        pad = [i for i in range(N) if i not in nz][: s - len(nz)]
        out[j] = nz + pad
    return out


def _perm_from_pattern(pattern: np.ndarray) -> np.ndarray:
    """Unitary ``|a>|j> -> |pi_j(a)>|j>`` with ``pi_j(l) = pattern[j, l]`` for ``l < s``."""
    N, s = pattern.shape
    P = np.zeros((N * N, N * N), dtype=complex)
    for j in range(N):
        first = list(pattern[j])
        rest = [i for i in range(N) if i not in first]
        image = first + rest
        for a in range(N):
            P[image[a] * N + j, a * N + j] = 1
    return P


def _ell_hadamards(n_reg: int, sbits: int) -> np.ndarray:
    """``I (x) H^{sbits}`` on an ``n_reg``-qubit register (low qubits)."""
    out = np.eye(2 ** (n_reg - sbits), dtype=complex)
    for _ in range(sbits):
        out = np.kron(out, _H)
    return out


def _band_offsets(A: np.ndarray):
    N = A.shape[0]
    offs = set()
    for i in range(N):
        for j in range(N):
            if abs(A[i, j]) > 0:
                o = (i - j) % N
                offs.add(o - N if o > N // 2 else o)
    if not offs:
        return 0, 1
    lo, hi = min(offs), max(offs)
    return -lo, hi - lo + 1


def be_sparse(A, mode: str, band: tuple | None = None) -> BlockEncoding:
    """Sparse-access block encodings with ``alpha = s``.

    ``banded``: layout signal | ``log2 s`` l-register | system, column map
    ``c(j, l) = j + l - l0 mod N``; ``m = log2 s + 1``.
    ``general``: layout signal | n-qubit register | system, gate order
    D, O_c, O_A, SWAP, O_r^dagger, D; ``m = n + 1``.
    ``hermitian``: layout a | n-qubit register | b | system,
    ``U = V^dagger S' V`` with ``V = O_A O_c D``; ``U`` is Hermitian and
    ``m = n + 2``.

    Args:
        A: Square matrix of power-of-two size with ``max |A_ij| <= 1``.
        mode: ``banded``, ``general`` or ``hermitian``.
        band: Optional ``(l0, s)`` for banded mode; inferred by default.

    Raises:
        MaxNormExceeded: If an entry exceeds one in magnitude.
        NotBanded: If a nonzero lies outside the declared band.
        NotHermitian: If ``A`` is not Hermitian in hermitian mode.
    """
    A = np.asarray(A, dtype=complex)
    N = A.shape[0]
    n = _n_qubits(N)
    if np.max(np.abs(A)) > 1 + 1e-12:
        raise MaxNormExceeded(f"max |A_ij| = {np.max(np.abs(A))} > 1")
    if mode == "banded":
        return _be_banded(A, n, band)
    if mode == "general":
        return _be_general(A, n)
    if mode == "hermitian":
        if not is_hermitian(A):
            raise NotHermitian("hermitian mode needs A = A^dagger")
        return _be_hermitian(A, n)
    raise PreconditionViolated(f"unknown mode {mode!r}")


def _be_banded(A: np.ndarray, n: int, band) -> BlockEncoding:
    N = 2**n
    if band is None:
        l0, width = _band_offsets(A)
        s = _next_pow2(width)
    else:
        l0, s = band
        if s != _next_pow2(s):
            raise PreconditionViolated("s must be a power of two")
    if s > N:
        raise NotBanded(f"band width {s} exceeds dimension {N}")
    sb = int(round(np.log2(s)))
    cols = {(int((j + l - l0) % N), j) for j in range(N) for l in range(s)}
    outside = [(i, j) for i in range(N) for j in range(N) if abs(A[i, j]) > 0 and (i, j) not in cols]
    if outside:
        raise NotBanded(f"entries {outside[:3]} lie outside the band")
    S = 2**sb
    # O_A on signal | l | j with value A_{c(j,l), j}.
    vals = np.array([A[(j + l - l0) % N, j] for l in range(S) for j in range(N)])
    O_A = _entry_rotation(vals)
    # O_c: |l>|j> -> |l>|c(j,l)> on the (l, system) registers.
    Oc = np.zeros((S * N, S * N), dtype=complex)
    for l in range(S):
        for j in range(N):
            Oc[l * N + (j + l - l0) % N, l * N + j] = 1
    I2 = np.eye(2)
    D = np.kron(I2, np.kron(_ell_hadamards(sb, sb), np.eye(N))) if sb else np.eye(2 * N)
    U = D @ np.kron(I2, Oc) @ O_A @ D
    return BlockEncoding(U, sb + 1, n, float(s), 0.0, False, A)


def _be_general(A: np.ndarray, n: int) -> BlockEncoding:
    N = 2**n
    nnz_col = max(int(np.count_nonzero(np.abs(A[:, j]) > 0)) for j in range(N))
    nnz_row = max(int(np.count_nonzero(np.abs(A[i, :]) > 0)) for i in range(N))
    s = _next_pow2(max(nnz_col, nnz_row, 1))
    sb = int(round(np.log2(s)))
    cpat = _patterns(A, s, axis=0)
    rpat = _patterns(A, s, axis=1)
    I2 = np.eye(2)
    D = np.kron(I2, np.kron(_ell_hadamards(n, sb), np.eye(N)))
    Oc = np.kron(I2, _perm_from_pattern(cpat))
    Or = np.kron(I2, _perm_from_pattern(rpat))
    # O_A on signal | register i | system j with value A_ij.
    O_A = _entry_rotation(A.reshape(-1))
    SW = np.zeros((N * N, N * N), dtype=complex)
    for a in range(N):
        for b in range(N):
            SW[b * N + a, a * N + b] = 1
    SW = np.kron(I2, SW)
    U = D @ dagger(Or) @ SW @ O_A @ Oc @ D
    return BlockEncoding(U, n + 1, n, float(s), 0.0, False, A)


def hermitian_sqrt_entries(A: np.ndarray) -> np.ndarray:
    """Entries ``s_ij`` with ``s_ij * conj(s_ji) = A_ij`` off the diagonal and
    ``|s_ii|^2 = |A_ii|``.

    For ``i <= j``: ``s_ij = sqrt(|A_ij|) e^{i theta/2}`` with the principal
    angle ``theta in (-pi, pi]``; for ``i > j``: ``s_ij = A_ij / conj(s_ji)``.
    """
    N = A.shape[0]
    S = np.zeros_like(A, dtype=complex)
    for i in range(N):
        for j in range(i, N):
            S[i, j] = np.sqrt(abs(A[i, j])) * np.exp(0.5j * np.angle(A[i, j]))
    for i in range(N):
        for j in range(i):
            S[i, j] = A[i, j] / np.conj(S[j, i]) if abs(S[j, i]) > 0 else 0
    return S


def _be_hermitian(A: np.ndarray, n: int) -> BlockEncoding:
    N = 2**n
    nnz = max(int(np.count_nonzero(np.abs(A[:, j]) > 0)) for j in range(N))
    s = _next_pow2(max(nnz, 1))
    sb = int(round(np.log2(s)))
    cpat = _patterns(A, s, axis=0)
    Sq = hermitian_sqrt_entries(A)
    # Local layout for V: a | reg (n) | system (n); b is an idle qubit.
    I2 = np.eye(2)
    D = np.kron(I2, np.kron(_ell_hadamards(n, sb), np.eye(N)))
    Oc = np.kron(I2, _perm_from_pattern(cpat))
    O_A = _entry_rotation(Sq.reshape(-1))
    V_loc = O_A @ Oc @ D
    # Full layout a | reg | b | system. Embed V_loc acting on (a, reg, system).
    dim = 2 * N * 2 * N

    def idx(a, r, b, j):
        return ((a * N + r) * 2 + b) * N + j

    V = np.zeros((dim, dim), dtype=complex)
    for b in range(2):
        rows = [idx(a, r, b, j) for a in range(2) for r in range(N) for j in range(N)]
        V[np.ix_(rows, rows)] = V_loc
    # S' = SWAP (a, reg) <-> (b, system), with -1 on |0>|j>|0>|j> when A_jj < 0.
    Sw = np.zeros((dim, dim), dtype=complex)
    for a in range(2):
        for r in range(N):
            for b in range(2):
                for j in range(N):
                    sign = -1.0 if (a == 0 and b == 0 and r == j and A[j, j].real < 0) else 1.0
                    Sw[idx(b, j, a, r), idx(a, r, b, j)] = sign
    U = dagger(V) @ Sw @ V
    return BlockEncoding(U, n + 2, n, float(s), 0.0, True, A)


# ---------------------------------------------------------------------------
# LCU, Fourier series and dilation
# ---------------------------------------------------------------------------

def unitary_be(U) -> BlockEncoding:
    """A unitary as a trivial ``(1, 0, 0)`` block encoding of itself."""
    U = np.asarray(U, dtype=complex)
    return BlockEncoding(U, 0, _n_qubits(U.shape[0]), 1.0, 0.0, is_hermitian(U), U)


def lcu(coefficients: Sequence[complex], blocks: Sequence[BlockEncoding],
        prepare: np.ndarray | None = None) -> BlockEncoding:
    """Linear combination ``sum_i alpha_i A_i`` with subnormalization ``||alpha||_1``.

    The prepare oracle ``V`` has first column ``sqrt(alpha_i)/sqrt(||alpha||_1)``
    (principal root) and the unprepare ``V~`` has the same entries as first
    row, so complex coefficients are handled exactly. The result is
    ``(V~ (x) I) select (V (x) I)`` with ``a = ceil(log2 K)`` new leading
    ancillas.

    Args:
        coefficients: ``alpha_i``.
        blocks: Block encodings with ``alpha = 1`` and common ``(m, n)``.
        prepare: Optional explicit prepare unitary with nonnegative real
            weights (then ``V~ = V^dagger``).

    Raises:
        InhomogeneousBlocks: If the blocks differ in ``m``, ``n`` or have ``alpha != 1``.
    """
    coeffs = np.asarray(coefficients, dtype=complex)
    if len(coeffs) != len(blocks) or not len(blocks):
        raise InhomogeneousBlocks("need one coefficient per block")
    m, n = blocks[0].m, blocks[0].n
    if any(b.m != m or b.n != n or abs(b.alpha - 1) > 1e-12 for b in blocks):
        raise InhomogeneousBlocks("blocks must share m, n and have alpha = 1")
    K = len(blocks)
    a = int(np.ceil(np.log2(K))) if K > 1 else 0
    Kp = 2**a
    norm1 = float(np.sum(np.abs(coeffs)))
    amps = np.zeros(Kp, dtype=complex)
    amps[:K] = np.sqrt(coeffs.astype(complex)) / np.sqrt(norm1)
    if prepare is not None:
        V = np.asarray(prepare, dtype=complex)
        Vt = dagger(V)
    else:
        V = complete_unitary(amps)
        Vt = complete_unitary(amps).T
    dimb = 2 ** (m + n)
    sel = np.zeros((Kp * dimb, Kp * dimb), dtype=complex)
    for i in range(Kp):
        Ui = blocks[i].unitary if i < K else np.eye(dimb)
        sel[i * dimb:(i + 1) * dimb, i * dimb:(i + 1) * dimb] = Ui
    I = np.eye(dimb)
    U = np.kron(Vt, I) @ sel @ np.kron(V, I)
    A = None
    if all(b.matrix is not None for b in blocks):
        A = sum(c * b.alpha * b.matrix for c, b in zip(coeffs, blocks))
    return BlockEncoding(U, a + m, n, norm1, 0.0, False, A)


def pauli_lcu(H, uniform_prepare: bool = False) -> BlockEncoding:
    """LCU of a Pauli Hamiltonian.

    Negative coefficients are folded into the selected unitaries, so all LCU
    weights are ``|c_i|``. With ``uniform_prepare`` and equal weights, the
    prepare oracle is ``H^{(x) a}``.
    """
    from .hamiltonians import PauliString

    blocks, weights = [], []
    for t in H.terms:
        c = complex(t.coefficient).real
        P = PauliString(t.letters, np.sign(c) if c != 0 else 1.0).matrix()
        blocks.append(unitary_be(P))
        weights.append(abs(c))
    prep = None
    if uniform_prepare:
        K = len(blocks)
        a = int(np.ceil(np.log2(K)))
        if 2**a != K or len(set(np.round(weights, 14))) != 1:
            raise PreconditionViolated("uniform prepare needs 2^a equal weights")
        prep = np.array([[1.0]])
        for _ in range(a):
            prep = np.kron(prep, _H)
    be = lcu(weights, blocks, prepare=prep)
    return replace(be, matrix=H.matrix())


def fourier_series_be(A, coeffs: dict) -> BlockEncoding:
    """Block encoding of ``sum_k c_k e^{i k A}`` by LCU over controlled powers.

    Args:
        A: Hermitian matrix.
        coeffs: Mapping ``k -> c_k``.
    """
    ks = sorted(coeffs)
    blocks = [unitary_be(matrix_exp_i(A, -k)) for k in ks]
    return lcu([coeffs[k] for k in ks], blocks)


def dilate(be: BlockEncoding) -> BlockEncoding:
    """Block encoding of the Hermitian dilation ``[[0, A^dagger], [A, 0]]``.

    ``U~ = |1><0| (x) U + |0><1| (x) U^dagger`` with the dilation qubit
    moved after the ancillas, so it becomes the leading system qubit. The
    result has ``m`` ancillas, ``n + 1`` system qubits and is Hermitian.

    Raises:
        PreconditionViolated: If ``be.epsilon != 0``.
    """
    if be.epsilon != 0:
        raise PreconditionViolated("dilation requires an exact block encoding")
    U = be.unitary
    Ut = np.kron(np.array([[0, 0], [1, 0]]), U) + np.kron(np.array([[0, 1], [0, 0]]), dagger(U))
    m, n = be.m, be.n
    # Reorder qubits from (dil, anc, sys) to (anc, dil, sys).
    T = Ut.reshape((2, 2**m, 2**n) * 2)
    T = T.transpose(1, 0, 2, 4, 3, 5)
    Ut = T.reshape(2 ** (m + n + 1), 2 ** (m + n + 1))
    A = None
    if be.matrix is not None:
        Z = np.zeros_like(be.matrix)
        A = np.block([[Z, dagger(be.matrix)], [be.matrix, Z]])
    return BlockEncoding(Ut, m, n + 1, be.alpha, 0.0, True, A)


def be_to_json(be: BlockEncoding) -> dict:
    """Serialize to ``{unitary: [[[re, im], ...]], m, n, alpha, epsilon, hermitian}``."""
    from .io import matrix_to_json

    return {"unitary": matrix_to_json(be.unitary), "m": be.m, "n": be.n, "alpha": be.alpha,
            "epsilon": be.epsilon, "hermitian": be.hermitian}


def be_from_json(data: dict) -> BlockEncoding:
    """Inverse of :func:`be_to_json`."""
    from .io import matrix_from_json

    return BlockEncoding(matrix_from_json(data["unitary"]), data["m"], data["n"], data["alpha"],
                         data["epsilon"], data["hermitian"])


def apply_state(be: BlockEncoding, b) -> QuantumState:
    """Full output state ``U |0^m>|b>``."""
    b = np.asarray(b, dtype=complex).ravel()
    return QuantumState(be.m + be.n, be.unitary[:, : 2**be.n] @ b)
