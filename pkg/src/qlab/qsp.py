"""Scalar quantum signal processing.

Chebyshev toolkit, approximation targets, QSP unitaries in the W, O and
tilde conventions, convention conversion and a Newton phase-factor solver
for symmetric phases.

Conventions (``s = sqrt(1 - x^2)``)::

    W(x) = [[x, i s], [i s, x]]      U_W = e^{i phi_0 Z} prod_j W(x) e^{i phi_j Z}
    O(x) = [[x, -s], [s, x]]         U_O = e^{i phi_0 Z} prod_j O(x) e^{i phi_j Z}
    R(x) = [[x, s], [s, -x]]         U~  = (-i)^d e^{i phi_0 Z} prod_j R(x) e^{i phi_j Z}

``R(x)`` is the qubitized 2x2 form of a Hermitian block encoding, so tilde
phases drive the matrix-level circuits. The ``(-i)^d`` factor makes the
top-left entry of all three forms equal after conversion.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import chebyshev as cheb

from .errors import (
    DegreeTooLow,
    MaxNormViolated,
    NonConvergence,
    ParityMismatch,
    PreconditionViolated,
    XOutOfRange,
)

CONVENTIONS = ("W", "O", "tilde")
MAXNORM_GRID = 2001
CERTIFY_POINTS = 50001


def chebyshev_grid(n: int) -> np.ndarray:
    """``n`` Chebyshev-Lobatto points ``cos(pi k / (n - 1))`` on ``[-1, 1]``."""
    return np.cos(np.pi * np.arange(n) / (n - 1))


@dataclass(frozen=True)
class ChebyshevPoly:
    """Polynomial in the Chebyshev basis.

    Attributes:
        coefficients: ``c_k`` with ``p(x) = sum_k c_k T_k(x)``.
        parity: ``even``, ``odd`` or ``none``.
        error: Certified uniform error on ``region`` when built as an approximation.
        region: Interval list where ``error`` applies.
        label: Free-form description of the target.
    """

    coefficients: np.ndarray
    parity: str = "none"
    error: float | None = None
    region: tuple = ()
    label: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients))
        c = c.astype(complex) if np.iscomplexobj(c) and np.any(c.imag) else c.real.astype(float)
        if self.parity not in ("even", "odd", "none"):
            raise ParityMismatch(f"unknown parity {self.parity!r}")
        if self.parity != "none":
            wrong = c[1::2] if self.parity == "even" else c[0::2]
            if np.max(np.abs(wrong), initial=0) > 1e-14:
                raise ParityMismatch(f"{self.parity} polynomial has wrong-parity coefficients")
            c = c.copy()
            if self.parity == "even":
                c[1::2] = 0
            else:
                c[0::2] = 0
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero polynomial)."""
        nz = np.nonzero(np.abs(self.coefficients) > 0)[0]
        return int(nz[-1]) if len(nz) else 0

    def __call__(self, x):
        return cheb.chebval(np.asarray(x, dtype=float), self.coefficients)

    def maxnorm(self) -> float:
        """Max of ``|p|`` over a 2001-point Chebyshev grid and a uniform 4001-point grid."""
        x = np.concatenate([chebyshev_grid(MAXNORM_GRID), np.linspace(-1, 1, 4001)])
        return float(np.max(np.abs(self(x))))

    @staticmethod
    def from_function(f, d: int, parity: str = "none") -> "ChebyshevPoly":
        """Chebyshev interpolant of degree ``d`` at first-kind nodes."""
        c = cheb.chebinterpolate(f, d)
        if parity == "even":
            c[1::2] = 0
        elif parity == "odd":
            c[0::2] = 0
        return ChebyshevPoly(c, parity)

    def to_json(self) -> dict:
        """``{coefficients, parity}`` with complex values as ``[re, im]`` pairs."""
        c = self.coefficients
        data = [[float(v.real), float(v.imag)] for v in c] if np.iscomplexobj(c) else [float(v) for v in c]
        return {"coefficients": data, "parity": self.parity}


def natural_parity(d: int) -> str:
    """``even`` or ``odd`` according to ``d mod 2``."""
    return "even" if d % 2 == 0 else "odd"


@dataclass(frozen=True)
class PhaseFactors:
    """QSP phase sequence.

    Attributes:
        phases: ``d + 1`` real phases.
        convention: ``W``, ``O`` or ``tilde``.
        symmetric: Whether ``phi_j = phi_{d-j}``.
        target: Target polynomial, if solved for one.
        residual: Final objective value of the solver.
        iterations: Solver iterations.
    """

    phases: np.ndarray
    convention: str = "W"
    symmetric: bool = False
    target: ChebyshevPoly | None = field(default=None, compare=False)
    residual: float | None = None
    iterations: int | None = None

    def __post_init__(self):
        ph = np.atleast_1d(np.asarray(self.phases, dtype=float)).copy()
        if self.convention not in CONVENTIONS:
            raise PreconditionViolated(f"unknown convention {self.convention!r}")
        object.__setattr__(self, "phases", ph)

    @property
    def degree(self) -> int:
        """``d = len(phases) - 1``."""
        return len(self.phases) - 1

    @property
    def parity(self) -> str:
        """Parity of the represented polynomial."""
        return natural_parity(self.degree)

    def to_json(self) -> dict:
        """Phase-factor file object; floats round-trip exactly through JSON."""
        return {
            "degree": self.degree,
            "convention": self.convention,
            "parity": self.parity,
            "phases": [float(p) for p in self.phases],
            "symmetric": self.symmetric,
            "target": None if self.target is None else {
                "kind": self.target.label.get("kind", "chebyshev"),
                "params": {k: v for k, v in self.target.label.items() if k != "kind"},
                **self.target.to_json(),
            },
            "residual": self.residual,
        }

    @staticmethod
    def from_json(data: dict) -> "PhaseFactors":
        """Inverse of :meth:`to_json`."""
        target = None
        t = data.get("target")
        if t is not None:
            coeffs = t["coefficients"]
            if coeffs and isinstance(coeffs[0], list):
                coeffs = [complex(*c) for c in coeffs]
            target = ChebyshevPoly(np.array(coeffs), t["parity"],
                                   label={"kind": t.get("kind"), **t.get("params", {})})
        ph = PhaseFactors(np.array(data["phases"], dtype=float), data["convention"],
                          bool(data.get("symmetric", False)), target, data.get("residual"))
        if ph.degree != data["degree"]:
            raise PreconditionViolated("degree does not match phase count")
        return ph


# ---------------------------------------------------------------------------
# QSP unitaries and conversion
# ---------------------------------------------------------------------------

def _signal(x: np.ndarray, convention: str) -> np.ndarray:
    """Signal matrices for a vector of ``x``; shape ``(K, 2, 2)``."""
    s = np.sqrt(np.clip(1 - x**2, 0, None))
    M = np.empty(x.shape + (2, 2), dtype=complex)
    if convention == "W":
        M[..., 0, 0], M[..., 0, 1], M[..., 1, 0], M[..., 1, 1] = x, 1j * s, 1j * s, x
    elif convention == "O":
        M[..., 0, 0], M[..., 0, 1], M[..., 1, 0], M[..., 1, 1] = x, -s, s, x
    else:
        M[..., 0, 0], M[..., 0, 1], M[..., 1, 0], M[..., 1, 1] = x, s, s, -x
    return M


def _rz_diag(phi: float) -> np.ndarray:
    return np.array([np.exp(1j * phi), np.exp(-1j * phi)])


def _check_x(x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > 1 + 1e-14):
        raise XOutOfRange("signal must lie in [-1, 1]")
    return np.clip(x, -1, 1)


def qsp_unitaries(x, phases: PhaseFactors) -> np.ndarray:
    """QSP unitaries for a vector of ``x``; shape ``(K, 2, 2)``.

    Raises:
        XOutOfRange: If some ``|x| > 1``.
    """
    x = _check_x(x)
    S = _signal(x, phases.convention)
    ph = phases.phases
    U = np.broadcast_to(np.diag(_rz_diag(ph[0])), x.shape + (2, 2)).astype(complex)
    for p in ph[1:]:
        U = (U @ S) * _rz_diag(p)[None, None, :]
    if phases.convention == "tilde":
        U = U * (-1j) ** phases.degree
    return U


def qsp_unitary(x: float, phases: PhaseFactors) -> np.ndarray:
    """2x2 QSP unitary at a single point ``x`` (see module docstring).

    Raises:
        XOutOfRange: If ``|x| > 1``.
    """
    return qsp_unitaries(np.array([x]), phases)[0]


def qsp_poly(x, phases: PhaseFactors) -> np.ndarray:
    """``P(x)``, the top-left entry of the QSP unitary."""
    return qsp_unitaries(x, phases)[:, 0, 0]


def qsp_real(x, phases: PhaseFactors) -> np.ndarray:
    """``g(x, Phi) = Re P(x)``."""
    return qsp_poly(x, phases).real


def convert(phases: PhaseFactors, to: str) -> PhaseFactors:
    """Convert between conventions keeping ``P(x)`` invariant.

    ``W -> O`` subtracts ``pi/4`` from ``phi_0`` and adds it to ``phi_d``.
    ``W -> tilde`` adds ``pi/4`` to both ends and ``pi/2`` to the middle.
    """
    if to not in CONVENTIONS:
        raise PreconditionViolated(f"unknown convention {to!r}")
    ph = phases.phases.copy()
    d = len(ph) - 1
    # Normalize to W.
    if d > 0:
        if phases.convention == "O":
            ph[0] += np.pi / 4
            ph[-1] -= np.pi / 4
        elif phases.convention == "tilde":
            ph[0] -= np.pi / 4
            ph[-1] -= np.pi / 4
            ph[1:-1] -= np.pi / 2
        if to == "O":
            ph[0] -= np.pi / 4
            ph[-1] += np.pi / 4
        elif to == "tilde":
            ph[0] += np.pi / 4
            ph[-1] += np.pi / 4
            ph[1:-1] += np.pi / 2
    symmetric = phases.symmetric and to != "O"
    return replace(phases, phases=ph, convention=to, symmetric=symmetric)


def zero_phases(d: int) -> PhaseFactors:
    """The symmetric initial guess ``(pi/4, 0, ..., 0, pi/4)`` (W convention), for which ``g = 0``."""
    ph = np.zeros(d + 1)
    if d == 0:
        return PhaseFactors(ph, "W", True)
    ph[0] = ph[-1] = np.pi / 4
    return PhaseFactors(ph, "W", True)


# ---------------------------------------------------------------------------
# Phase solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverOptions:
    """Options for :func:`solve_phases`.

    Attributes:
        tol: Success threshold on the objective ``F``.
        max_iter: Iteration cap.
        polish: Keep iterating past ``tol`` until ``F`` stops decreasing.
    """

    tol: float = 1e-12
    max_iter: int = 500
    polish: bool = True


def solver_nodes(d: int) -> np.ndarray:
    """Positive Chebyshev nodes ``x_k = cos((2k - 1) pi / (4 d~))``, ``d~ = ceil((d+1)/2)``."""
    dt = (d + 2) // 2
    k = np.arange(1, dt + 1)
    return np.cos((2 * k - 1) * np.pi / (4 * dt))


def _expand(theta: np.ndarray, d: int) -> np.ndarray:
    j = np.arange(d + 1)
    return theta[np.minimum(j, d - j)]


def _g_and_jacobian(theta: np.ndarray, d: int, x: np.ndarray):
    """``g(x_k)`` and ``dg/dtheta`` for symmetric W phases."""
    ph = _expand(theta, d)
    S = _signal(x, "W")
    K = len(x)
    # pre[j] = e^{i phi_0 Z} W e^{i phi_1 Z} ... W e^{i phi_j Z}
    pre = np.empty((d + 1, K, 2, 2), dtype=complex)
    pre[0] = np.diag(_rz_diag(ph[0]))
    for j in range(1, d + 1):
        pre[j] = (pre[j - 1] @ S) * _rz_diag(ph[j])[None, None, :]
    # suf[j] = W e^{i phi_{j+1} Z} ... W e^{i phi_d Z}; suf[d] = I
    suf = np.empty((d + 1, K, 2, 2), dtype=complex)
    suf[d] = np.eye(2)
    for j in range(d - 1, -1, -1):
        suf[j] = S @ (_rz_diag(ph[j + 1])[None, :, None] * suf[j + 1])
    g = pre[d][:, 0, 0].real
    # d/dphi_j of U = pre[j] (iZ) suf[j]; top-left entry only.
    z = np.array([1j, -1j])
    dU = np.einsum("jka,a,jka->jk", pre[:, :, 0, :], z, suf[:, :, :, 0])
    dg = dU.real  # (d+1, K)
    J = np.zeros((K, len(theta)))
    for j in range(d + 1):
        J[:, min(j, d - j)] += dg[j]
    return g, J


def solve_phases(target: ChebyshevPoly, options: SolverOptions | None = None) -> PhaseFactors:
    """Symmetric W-convention phases with ``Re P = target``.

    The degree is ``len(target.coefficients) - 1`` (reduced by one when its
    parity disagrees with the target), so zero tail coefficients are allowed.

    Gauss-Newton iteration with an analytic Jacobian and Levenberg-Marquardt
    damping on ``F(Phi) = (1/d~) sum_k |g(x_k, Phi) - f(x_k)|^2`` from the initial
    guess ``(pi/4, 0, ..., 0, pi/4)``.

    Raises:
        ParityMismatch: If the target parity disagrees with its degree.
        MaxNormViolated: If ``max |f| >= 1``.
        NonConvergence: If ``F`` stays above ``options.tol``.
    """
    opts = options or SolverOptions()
    nominal = len(target.coefficients) - 1
    d = nominal if natural_parity(nominal) == target.parity else nominal - 1
    if target.parity == "none" or d < target.degree:
        raise ParityMismatch("target must be parity-definite with parity of its degree")
    if np.iscomplexobj(target.coefficients):
        raise ParityMismatch("target must be real")
    if target.maxnorm() >= 1:
        raise MaxNormViolated(f"max |f| = {target.maxnorm()} >= 1")
    if d == 0:
        phi = float(np.arccos(target.coefficients[0]))
        return PhaseFactors(np.array([phi]), "W", True, target, 0.0, 0)
    x = solver_nodes(d)
    f = target(x)
    dt = len(x)
    theta = zero_phases(d).phases[:dt].copy()
    g, J = _g_and_jacobian(theta, d, x)
    F = float(np.sum((g - f) ** 2) / dt)
    it = 0
    mu = 0.0
    stall = 0
    while it < opts.max_iter:
        if F <= opts.tol and (not opts.polish or F == 0 or stall >= 3):
            break
        it += 1
        r = f - g
        # Gauss-Newton step, Levenberg-Marquardt damped when it fails to descend.
        if mu == 0.0:
            step, *_ = np.linalg.lstsq(J, r, rcond=None)
        else:
            step = np.linalg.solve(J.T @ J + mu * np.eye(dt), J.T @ r)
        cand = theta + step
        g2, J2 = _g_and_jacobian(cand, d, x)
        F2 = float(np.sum((g2 - f) ** 2) / dt)
        if F2 < F:
            stall = stall + 1 if F <= opts.tol and F2 > 0.25 * F else 0
            theta, g, J, F = cand, g2, J2, F2
            mu = 0.0 if mu < 1e-8 else mu / 10
        else:
            if F <= opts.tol:
                break
            mu = max(10 * mu, 1e-6 * float(np.max(np.sum(J**2, axis=0))))
            if mu > 1e12:
                break
    if F > opts.tol:
        raise NonConvergence(f"phase solve stopped at F = {F:.3e}", residual=F, iterations=it)
    return PhaseFactors(_expand(theta, d), "W", True, target, F, it)


def phase_error(phases: PhaseFactors, target: ChebyshevPoly, n: int = 1000, seed: int | None = None) -> float:
    """Max ``|g(x, Phi) - f(x)|`` on an ``n``-point grid in ``[-1, 1]``.

    With ``seed`` the grid is uniformly random, otherwise equispaced.
    """
    if seed is None:
        x = np.linspace(-1, 1, n)
    else:
        x = np.random.default_rng(seed).uniform(-1, 1, n)
    w = convert(phases, "W")
    return float(np.max(np.abs(qsp_real(x, w) - target(x))))


# ---------------------------------------------------------------------------
# Bessel functions and Jacobi-Anger
# ---------------------------------------------------------------------------

def bessel_j(nmax: int, t: float) -> np.ndarray:
    """``J_0(t), ..., J_nmax(t)`` by downward recurrence with normalization.

    ``J_{k-1} = (2k / t) J_k - J_{k+1}`` is started well above
    ``max(nmax, t)`` and normalized by ``J_0 + 2 sum_k J_{2k} = 1``.
    Negative ``t`` uses ``J_k(-t) = (-1)^k J_k(t)``.
    """
    if t == 0:
        out = np.zeros(nmax + 1)
        out[0] = 1
        return out
    sign = 1.0
    if t < 0:
        t, sign = -t, -1.0
    start = int(max(nmax, t) + 30 + 10 * np.sqrt(max(nmax, t)))
    start += start % 2
    J = np.zeros(start + 2)
    J[start] = 1e-300
    for k in range(start, 0, -1):
        J[k - 1] = (2 * k / t) * J[k] - J[k + 1]
        if abs(J[k - 1]) > 1e250:
            J[k - 1:] *= 1e-250
    norm = J[0] + 2 * np.sum(J[2::2])
    J = J[: nmax + 1] / norm
    if sign < 0:
        J = J * (-1.0) ** np.arange(nmax + 1)
    return J


def bessel_series(nu: int, t: float, terms: int = 60) -> float:
    """Power series ``sum_m (-1)^m (t/2)^{2m+nu} / (m! (m+nu)!)`` (validation only)."""
    from math import factorial

    return float(sum((-1) ** m * (t / 2) ** (2 * m + nu) / (factorial(m) * factorial(m + nu))
                     for m in range(terms)))


@dataclass(frozen=True)
class JacobiAnger:
    """Truncated Jacobi-Anger expansion.

    Attributes:
        cos: ``C_d`` (even) approximating ``cos(t x) / beta``.
        sin: ``S_d`` (odd) approximating ``sin(t x) / beta``.
        beta: Scale.
        truncation_error: Max grid error of ``beta C_d - cos`` and ``beta S_d - sin``.
    """

    cos: ChebyshevPoly
    sin: ChebyshevPoly
    beta: float
    truncation_error: float

    def __iter__(self):
        return iter((self.cos, self.sin, self.truncation_error))


def jacobi_anger(t: float, d: int, beta: float | None = None) -> JacobiAnger:
    """Truncated Jacobi-Anger expansions of ``cos(t x)`` and ``sin(t x)``.

    ``C_d`` keeps even ``T_k`` with ``k <= d`` and ``S_d`` keeps odd ``T_k``
    with ``k <= d``. Without ``beta`` the auto rule
    ``beta = max(max |C|, max |S|) + 1e-3`` over the grid is used.
    """
    if t < 0:
        raise PreconditionViolated("t must be nonnegative")
    J = bessel_j(d + 1, t)
    k = np.arange(d + 1)
    sgn = np.where((k // 2) % 2 == 0, 1.0, -1.0)
    c = np.where(k % 2 == 0, 2 * sgn * J[: d + 1], 0.0)
    c[0] = J[0]
    s = np.where(k % 2 == 1, 2 * sgn * J[: d + 1], 0.0)
    x = np.linspace(-1, 1, 4001)
    Cv, Sv = cheb.chebval(x, c), cheb.chebval(x, s)
    err = float(max(np.max(np.abs(Cv - np.cos(t * x))), np.max(np.abs(Sv - np.sin(t * x)))))
    if beta is None:
        beta = float(max(np.max(np.abs(Cv)), np.max(np.abs(Sv)))) + 1e-3
    label = {"kind": "jacobi-anger", "t": float(t), "beta": float(beta)}
    cp = ChebyshevPoly(c / beta, "even", label={**label, "part": "cos"})
    sp = ChebyshevPoly(s / beta, "odd" if d >= 1 else "none", label={**label, "part": "sin"})
    return JacobiAnger(cp, sp, float(beta), err)


# ---------------------------------------------------------------------------
# Approximation targets
# ---------------------------------------------------------------------------

def _erf(x):
    from scipy.special import erf

    return erf(x)


def _region_grid(intervals, n: int = 4001) -> np.ndarray:
    return np.concatenate([np.linspace(a, b, n) for a, b in intervals])


def _best_erf(d, parity, shape, intervals, ideal, scale, ks) -> ChebyshevPoly:
    """Interpolate ``scale * shape(k, x)`` for each ``k`` and keep the best on ``intervals``."""
    grid = _region_grid(intervals)
    target = ideal(grid)
    nodes = cheb.chebpts1(d + 1)
    interp = cheb.chebvander(nodes, d).T * (2.0 / (d + 1))
    interp[0] /= 2
    keep = np.ones(d + 1, dtype=bool)
    if parity == "even":
        keep[1::2] = False
    elif parity == "odd":
        keep[0::2] = False
    norm_grid = np.concatenate([chebyshev_grid(MAXNORM_GRID), np.linspace(-1, 1, 4001)])
    V_norm = cheb.chebvander(norm_grid, d)
    V_region = cheb.chebvander(grid, d)
    best = None
    for k in ks:
        c = np.where(keep, interp @ (scale * shape(k, nodes)), 0.0)
        mx = float(np.max(np.abs(V_norm @ c)))
        if mx >= 1:
            c = c * (scale / mx)
        err = float(np.max(np.abs(V_region @ c - target)))
        if best is None or err < best[0]:
            best = (err, c, k)
    _, c, k = best
    # Certify the winner on a much finer grid than the search used.
    fine = _region_grid(intervals, CERTIFY_POINTS)
    err = float(np.max(np.abs(cheb.chebval(fine, c) - ideal(fine))))
    return ChebyshevPoly(c, parity, error=err, region=tuple(intervals), label={"k": float(k)})


def approx_target(kind: str, d: int, *, delta: float | None = None, a: float | None = None,
                  b: float | None = None, kappa: float | None = None, beta: float = 4 / 3,
                  scale: float | None = None, eps: float | None = None,
                  bound: float = 0.999) -> ChebyshevPoly:
    """Parity-definite polynomial approximations with maxnorm below one.

    ``sign``: odd, ``scale * erf(k x)`` interpolant; error against ``1`` on
    ``[delta, 1]``. ``step``: even, ``scale * (erf(k(x + c)) - erf(k(x - c)))/2``
    with ``c = (a + b)/2``; error against ``1`` on ``[0, a]`` and ``0`` on
    ``[b, 1]``. ``inverse``: odd minimax fit of ``delta / (beta x)`` on
    ``[delta, 1]`` with ``|p| <= bound`` on ``[0, delta]``, ``delta = 1/kappa``.
    The steepness ``k`` is chosen by grid search on the certified error.

    Args:
        kind: ``sign``, ``step`` or ``inverse``.
        d: Degree (odd for sign/inverse, even for step).
        delta, a, b, kappa, beta: Shape parameters.
        scale: Overall scale for sign/step (default ``1 - 1e-3``).
        eps: If given, raise when the certified error exceeds it.
        bound: Interior bound for the inverse fit.

    Raises:
        ParityMismatch: If ``d`` has the wrong parity for ``kind``.
        DegreeTooLow: If ``eps`` is given and not achieved.
    """
    if kind == "sign":
        if d % 2 == 0:
            raise ParityMismatch("sign approximation needs odd degree")
        sc = 1 - 1e-3 if scale is None else scale
        ks = np.geomspace(0.5 / delta, 2.0 * d, 60)
        p = _best_erf(d, "odd", lambda k, x: _erf(k * x), [(delta, 1.0)],
                      lambda x: np.ones_like(x), sc, ks)
        p = replace(p, label={"kind": "sign", "delta": delta, **p.label})
    elif kind == "step":
        if d % 2:
            raise ParityMismatch("step approximation needs even degree")
        sc = 1 - 1e-3 if scale is None else scale
        c = (a + b) / 2
        ks = np.geomspace(1.0 / (b - a), 4.0 * d, 60)
        grid_ideal = lambda x: np.where(x <= a + 1e-15, 1.0, 0.0)
        p = _best_erf(d, "even", lambda k, x: 0.5 * (_erf(k * (x + c)) - _erf(k * (x - c))),
                      [(0.0, a), (b, 1.0)], grid_ideal, sc, ks)
        p = replace(p, label={"kind": "step", "a": a, "b": b, **p.label})
    elif kind == "inverse":
        if d % 2 == 0:
            raise ParityMismatch("inverse approximation needs odd degree")
        delta = 1 / kappa if delta is None else delta
        p = _inverse_fit(d, delta, beta, bound)
        p = replace(p, label={"kind": "inverse", "kappa": 1 / delta, "beta": beta})
    else:
        raise PreconditionViolated(f"unknown target kind {kind!r}")
    if eps is not None and p.error > eps:
        raise DegreeTooLow(f"degree {d} reaches error {p.error:.3e} > {eps:.3e}", achieved=p.error)
    return p


def _inverse_fit(d: int, delta: float, beta: float, bound: float, M: int = 1500) -> ChebyshevPoly:
    """Odd minimax fit of ``delta / (beta x)`` on ``[delta, 1]`` with ``|p| <= bound`` on ``[0, 1]``."""
    from scipy.optimize import linprog

    ks = np.arange(1, d + 1, 2)
    xo = delta + (1 - delta) * (1 - np.cos(np.linspace(0, np.pi, M))) / 2
    xi = np.linspace(0, delta, M // 3)
    Vo = cheb.chebvander(xo, d)[:, ks]
    Vi = cheb.chebvander(xi, d)[:, ks]
    f = delta / (beta * xo)
    n = len(ks)
    one_o, zero_i = np.ones((M, 1)), np.zeros((len(xi), 1))
    A = np.block([[Vo, -one_o], [-Vo, -one_o], [Vi, zero_i], [-Vi, zero_i],
                  [Vo, 0 * one_o], [-Vo, 0 * one_o]])
    rhs = np.concatenate([f, -f, bound * np.ones(2 * len(xi)), bound * np.ones(2 * M)])
    cost = np.zeros(n + 1)
    cost[-1] = 1
    res = linprog(cost, A_ub=A, b_ub=rhs, bounds=[(None, None)] * (n + 1), method="highs")
    if not res.success:
        raise DegreeTooLow(f"inverse fit failed: {res.message}", achieved=np.inf)
    coef = np.zeros(d + 1)
    coef[ks] = res.x[:n]
    p = ChebyshevPoly(coef, "odd")
    mx = p.maxnorm()
    if mx >= 1:
        p = ChebyshevPoly(coef * (bound / mx), "odd")
    g = np.linspace(delta, 1, CERTIFY_POINTS)
    err = float(np.max(np.abs(p(g) - delta / (beta * g))))
    return replace(p, error=err, region=((delta, 1.0),))
