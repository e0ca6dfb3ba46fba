"""Quantum Fourier transform, phase estimation, Kitaev's bit-by-bit method,
ground-energy estimation and amplitude estimation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadFlagStructure,
    DimensionCap,
    NotEigenvector,
    PreconditionViolated,
    SpectrumOutOfRange,
)
from .linalg import check_unitary, hermitian_eig, matrix_exp_i
from .primitives import _flag, _good_split
from .simulator import Circuit, QuantumState, apply


def mod1_dist(x) -> np.ndarray:
    """Distance to the nearest integer, ``min(x mod 1, 1 - x mod 1)``."""
    r = np.mod(x, 1.0)
    return np.minimum(r, 1.0 - r)


@dataclass(frozen=True)
class PhaseFixedPoint:
    """Binary fraction ``0.b_{d-1} ... b_0``.

    Attributes:
        bits: Bits from most significant ``b_{d-1}`` to least ``b_0``.
    """

    bits: tuple

    @property
    def d(self) -> int:
        """Bit count."""
        return len(self.bits)

    @property
    def value(self) -> float:
        """Numeric value in ``[0, 1)``."""
        return float(sum(b * 2.0 ** -(i + 1) for i, b in enumerate(self.bits)))

    def __str__(self) -> str:
        return "0." + "".join(str(b) for b in self.bits)

    @staticmethod
    def from_value(phi: float, d: int) -> "PhaseFixedPoint":
        """Nearest ``d``-bit representation of ``phi`` modulo 1."""
        k = int(round(np.mod(phi, 1.0) * 2**d)) % 2**d
        return PhaseFixedPoint(tuple(int(b) for b in format(k, f"0{d}b")))


def _cphase(theta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * theta)]).astype(complex)


def qft(n: int, inverse: bool = False) -> Circuit:
    """QFT circuit ``|j> -> N^{-1/2} sum_k exp(2 pi i j k / N)|k>``.

    Hadamards and controlled phase rotations followed by the swap network.

    Raises:
        DimensionCap: If ``n`` is outside ``[1, 12]``.
    """
    if not 1 <= n <= 12:
        raise DimensionCap("qft supports 1 <= n <= 12")
    c = Circuit(n)
    for j in range(n):
        c.h(j)
        for k in range(j + 1, n):
            c.custom(_cphase(2 * np.pi / 2 ** (k - j + 1)), [j], [(k, 1)])
    for j in range(n // 2):
        c.add("SWAP", [j, n - 1 - j])
    return c.inverse() if inverse else c


def dft_matrix(n: int) -> np.ndarray:
    """Dense DFT matrix ``exp(2 pi i j k / N) / sqrt(N)``."""
    N = 2**n
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)


def controlled_power(U: np.ndarray, power: int) -> np.ndarray:
    """``U**power`` by repeated squaring."""
    return np.linalg.matrix_power(U, power)


def qpe_circuit(U: np.ndarray, t: int) -> Circuit:
    """Phase-estimation circuit with ``t`` ancillas followed by the system.

    Ancilla ``q`` (0 = most significant) controls ``U^{2^{t-1-q}}``; an
    inverse QFT finishes the readout. Each controlled power is labeled with
    its oracle-query cost.
    """
    n = int(round(np.log2(U.shape[0])))
    c = Circuit(t + n).h(*range(t))
    P = U.copy()
    powers = {}
    for q in reversed(range(t)):
        powers[q] = P
        P = P @ P
    for q in reversed(range(t)):
        c.custom(powers[q], list(range(t, t + n)), [(q, 1)], label=f"U^{2 ** (t - 1 - q)}")
    return c.extend(qft(t, inverse=True))


def gamma(phi: float, t: int) -> np.ndarray:
    """Amplitudes ``gamma_{k'} = T^{-1} sum_j exp(2 pi i j (phi - k'/T))``."""
    T = 2**t
    # The sum over j is a forward DFT of exp(2 pi i j phi).
    return np.fft.fft(np.exp(2j * np.pi * phi * np.arange(T))) / T


@dataclass(frozen=True)
class QpeResult:
    """Outcome of phase estimation.

    Attributes:
        t: Ancilla bits.
        distribution: Exact outcome probabilities over ``k' in [0, T)``.
        samples: Sampled outcomes.
        leakage: ``gamma_{0,k'}`` when the input is an eigenvector, else None.
    """

    t: int
    distribution: np.ndarray
    samples: tuple
    leakage: np.ndarray | None = field(default=None, compare=False)

    @property
    def T(self) -> int:
        """Number of grid points ``2**t``."""
        return 2**self.t

    @property
    def modal(self) -> int:
        """Most probable outcome."""
        return int(np.argmax(self.distribution))


def qpe(U, input_state, t: int, shots: int = 1, seed: int = 0) -> QpeResult:
    """Simulate phase estimation and draw ``shots`` samples.

    Args:
        U: System unitary.
        input_state: System state (vector or QuantumState).
        t: Ancilla bits (``t <= 10``).
        shots: Number of samples.
        seed: Sampling seed.

    Raises:
        NotUnitary: If ``U`` is not unitary.
        DimensionCap: If ``t > 10`` or the circuit exceeds 14 qubits.
    """
    U = check_unitary(U)
    if not 1 <= t <= 10:
        raise DimensionCap("qpe supports 1 <= t <= 10")
    v = input_state.amplitudes if isinstance(input_state, QuantumState) else np.asarray(input_state, complex)
    n = int(round(np.log2(len(v))))
    if t + n > 14:
        raise DimensionCap("ancilla plus system qubits exceed 14")
    state = QuantumState(t + n, np.kron(np.eye(2**t)[0], v))
    out = apply(qpe_circuit(U, t), state)
    dist = out.probabilities(list(range(t)))
    rng = np.random.default_rng(seed)
    samples = tuple(int(s) for s in rng.choice(2**t, size=shots, p=dist / dist.sum()))
    Uv = U @ v
    lam = np.vdot(v, Uv)
    leak = None
    if np.linalg.norm(Uv - lam * v) <= 1e-8:
        leak = gamma(np.angle(lam) / (2 * np.pi) % 1.0, t)
    return QpeResult(t, dist, samples, leak)


def qpe_distribution(phases, weights, t: int) -> np.ndarray:
    """Outcome distribution ``sum_k p_k |gamma_{k,k'}|^2`` for a superposition."""
    out = np.zeros(2**t)
    for phi, p in zip(phases, weights):
        out += p * np.abs(gamma(phi, t)) ** 2
    return out


def qpe_tail_probability(phi: float, t: int, epsilon: float) -> float:
    """Probability that the QPE estimate misses ``phi`` by ``>= epsilon`` (mod 1).

    The value is checked against ``1/(2 T eps) + 1/(2 (T eps)^2)``.
    """
    T = 2**t
    p = np.abs(gamma(phi, t)) ** 2
    far = mod1_dist(phi - np.arange(T) / T) >= epsilon - 1e-15
    val = float(p[far].sum())
    bound = 1 / (2 * T * epsilon) + 1 / (2 * (T * epsilon) ** 2)
    assert val <= bound + 1e-12, "tail bound violated"
    return val


# ---------------------------------------------------------------------------
# Kitaev
# ---------------------------------------------------------------------------

def _round3(alpha: float, branch: str) -> float:
    """Three-bit rounding of ``alpha`` within 1/8, modulo 1."""
    x = alpha * 8
    if branch == "down":
        k = np.floor(x + 1e-9)
    elif branch == "up":
        k = np.ceil(x - 1e-9)
    elif branch == "nearest":
        k = np.round(x)
    else:
        raise PreconditionViolated(f"unknown rounding branch {branch!r}")
    return (k % 8) / 8


def kitaev_estimate(U, eigvec, d: int, branch: str = "nearest", shots: int | None = None,
                    seed: int = 0, details: bool = False):
    """Estimate an eigenphase bit by bit.

    For ``j = 0..d-3`` the cosine and sine Hadamard-test probabilities of
    ``U^{2^j}`` give ``alpha_j = 2^j phi mod 1``; each is rounded to three
    bits ``beta_j`` and the bits are stitched together from the least
    significant end.

    Args:
        U: Unitary.
        eigvec: Eigenvector of ``U``.
        d: Output bits. ``d < 3`` uses the single-qubit estimator.
        branch: Rounding rule for ``beta_j``: ``nearest``, ``down`` or ``up``.
        shots: If given, probabilities are estimated from this many samples.
        seed: Sampling seed.
        details: Also return a dict with alphas, betas and query cost.

    Raises:
        NotEigenvector: If ``||U v - e^{i 2 pi phi} v|| > 1e-8``.
    """
    from .primitives import overlap_test

    U = check_unitary(U)
    v = eigvec.amplitudes if isinstance(eigvec, QuantumState) else np.asarray(eigvec, complex)
    lam = np.vdot(v, U @ v)
    if np.linalg.norm(U @ v - lam * v) > 1e-8 or abs(abs(lam) - 1) > 1e-8:
        raise NotEigenvector("input is not an eigenvector of U")
    rng = np.random.default_rng(seed)
    alphas, betas, cost = [], [], 0
    jmax = max(d - 3, 0)
    Upow = U.copy()
    for j in range(jmax + 1):
        pr = overlap_test("hadamard_real", v, Upow)
        pi = overlap_test("hadamard_imag", v, Upow)
        if shots is not None:
            pr = rng.binomial(shots, pr) / shots
            pi = rng.binomial(shots, pi) / shots
            cost += 2 * shots * 2**j
        else:
            cost += 2 * 2**j
        alpha = (np.arctan2(2 * pi - 1, 2 * pr - 1) / (2 * np.pi)) % 1.0
        alphas.append(float(alpha))
        betas.append(_round3(alpha, branch))
        Upow = Upow @ Upow
    if d < 3:
        est = PhaseFixedPoint.from_value(alphas[0], d)
    else:
        b = {}
        bits3 = format(int(round(betas[d - 3] * 8)) % 8, "03b")
        b[2], b[1], b[0] = (int(x) for x in bits3)
        for j in range(d - 4, -1, -1):
            hi, lo1, lo2 = d - j - 1, d - j - 2, d - j - 3
            cands = []
            for bit in (0, 1):
                val = bit / 2 + b[lo1] / 4 + b[lo2] / 8
                cands.append((float(mod1_dist(val - betas[j])), bit))
            b[hi] = min(cands)[1]
        est = PhaseFixedPoint(tuple(b[i] for i in range(d - 1, -1, -1)))
    if details:
        return est, {"alphas": alphas, "betas": betas, "queries": cost}
    return est


# ---------------------------------------------------------------------------
# Ground-state energy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyEstimate:
    """Ground-energy estimate from repeated phase estimation.

    Attributes:
        estimate: Minimum of the per-run estimates.
        repetitions: Number of QPE runs ``M``.
        minima: Per-run estimates ``k'/T``.
        epsilon: Target precision.
        delta: Target failure probability.
        delta_prime: Per-run failure budget ``delta / M``.
        p0: Overlap of the initial state with the ground state.
        t: Ancilla bits used.
    """

    estimate: float
    repetitions: int
    minima: tuple
    epsilon: float
    delta: float
    delta_prime: float
    p0: float
    t: int


def ground_energy_parameters(p0: float, epsilon: float, delta: float):
    """Return ``(M, delta', t)`` with ``T epsilon >= 1/delta'``."""
    M = int(np.ceil(2 / p0 * np.log(2 / delta)))
    dp = delta / M
    d = int(np.ceil(np.log2(1 / epsilon)))
    t = d + int(np.ceil(np.log2(1 / dp)))
    return M, dp, t


def ground_energy_qpe(H, init, epsilon: float, delta: float, seed: int = 0) -> EnergyEstimate:
    """Estimate the ground energy of ``H`` with spectrum inside ``(0, 1/2)``.

    Phase estimation is run on ``U = exp(i 2 pi H)`` ``M`` times and the
    smallest outcome is returned. Runs are sampled from the exact outcome
    distribution ``sum_k p_k |gamma_{k,k'}|^2``, which is what the QPE
    circuit produces (checked separately against circuit simulation).

    Raises:
        SpectrumOutOfRange: If the spectrum is not inside ``(0, 1/2)``.
        PreconditionViolated: If the initial overlap ``p0`` vanishes.
    """
    E = hermitian_eig(H)
    lam = E.eigenvalues
    if lam[0] <= 0 or lam[-1] >= 0.5:
        raise SpectrumOutOfRange("spectrum must lie in (0, 1/2)")
    v = init.amplitudes if isinstance(init, QuantumState) else np.asarray(init, complex)
    c = E.eigenvectors.conj().T @ v
    weights = np.abs(c) ** 2
    p0 = float(weights[np.abs(lam - lam[0]) < 1e-12].sum())
    if p0 < 1e-14:
        raise PreconditionViolated("initial state has no overlap with the ground state")
    M, dp, t = ground_energy_parameters(p0, epsilon, delta)
    dist = qpe_distribution(lam, weights, t)
    rng = np.random.default_rng(seed)
    ks = rng.choice(2**t, size=M, p=dist / dist.sum())
    runs = tuple(float(k) / 2**t for k in ks)
    return EnergyEstimate(min(runs), M, runs, epsilon, delta, dp, p0, t)


def phase_unitary(H) -> np.ndarray:
    """``exp(i 2 pi H)``."""
    return matrix_exp_i(H, -2 * np.pi)


# ---------------------------------------------------------------------------
# Amplitude estimation
# ---------------------------------------------------------------------------

def grover_operator(prepare: Circuit, good_flag) -> tuple:
    """Dense ``G = R_psi0 R_good`` and the prepared state.

    ``R_psi0 = 2|psi0><psi0| - I`` and ``R_good = I - 2 Pi_good``.
    """
    from .simulator import circuit_unitary

    n = prepare.n
    m, outcome = _flag(good_flag, n)
    U = circuit_unitary(prepare)
    psi = U[:, 0]
    _, bad, mask = _good_split(psi, n, m, outcome)
    if np.linalg.norm(bad[mask]) > 1e-10:
        raise BadFlagStructure("bad branch has weight inside the good subspace")
    R_good = np.diag(np.where(mask, -1.0, 1.0)).astype(complex)
    R_psi = 2 * np.outer(psi, psi.conj()) - np.eye(2**n)
    return R_psi @ R_good, psi, mask


def amplitude_estimate(prepare: Circuit, good_flag, t: int, shots: int = 1, seed: int = 0,
                       details: bool = False):
    """Estimate the good-branch probability ``p0`` by phase estimation on ``G``.

    The modal outcome ``k'`` gives ``theta = 2 pi min(k'/T, 1 - k'/T)`` and
    ``p = sin^2(theta/2)``.

    Raises:
        BadFlagStructure: If the flag is malformed.
    """
    G, psi, mask = grover_operator(prepare, good_flag)
    res = qpe(G, psi, t, shots=shots, seed=seed)
    counts = np.bincount(np.array(res.samples), minlength=2**t)
    k = int(np.argmax(counts))
    phi = k / 2**t
    theta = 2 * np.pi * min(phi, 1 - phi)
    p_hat = float(np.sin(theta / 2) ** 2)
    if details:
        p0 = float(np.sum(np.abs(psi[mask]) ** 2))
        eps = 2 * np.pi / 2**t
        bound = np.sqrt(p0 * (1 - p0)) * eps + eps**2 / 4
        return p_hat, {"p0": p0, "bound": float(bound), "outcome": k, "qpe": res}
    return p_hat
