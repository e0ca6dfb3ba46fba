"""Exception hierarchy for qlab.

Every failure mode has its own class so callers can catch precisely what they
expect. All errors derive from :class:`QlabError`, which itself derives from
``ValueError`` because almost every failure is a rejected input.
"""

from __future__ import annotations


class QlabError(ValueError):
    """Base class for all qlab errors."""


# core linear algebra
class NotSquare(QlabError):
    """Matrix is not square."""


class NotHermitian(QlabError):
    """Matrix fails the Hermitian symmetry check."""


class NotUnitary(QlabError):
    """Matrix fails the unitarity check."""


class DimensionMismatch(QlabError):
    """Operand dimensions do not agree."""


class DimensionCap(QlabError):
    """Requested dimension exceeds the dense-storage cap."""


# simulator
class QubitIndexOutOfRange(QlabError):
    """A gate refers to a qubit index outside the register."""


class NotNormalized(QlabError):
    """State vector does not have unit norm."""


class ZeroProbabilityBranch(QlabError):
    """Postselection onto an outcome with probability zero."""


class EmptyKeepSet(QlabError):
    """Partial trace asked to keep no qubits."""


# primitives / phase estimation
class BadFlagStructure(QlabError):
    """Good/bad branch decomposition of a prepared state is inconsistent."""


class NotEigenvector(QlabError):
    """Supplied vector is not an eigenvector of the supplied unitary."""


class SpectrumOutOfRange(QlabError):
    """Spectrum lies outside the range required by the algorithm."""


class PreconditionViolated(QlabError):
    """A documented precondition of the operation does not hold."""


# linear systems
class EigenvalueNotRepresentable(QlabError):
    """An eigenvalue is not exactly representable with the requested bits."""


class CTooLarge(QlabError):
    """Normalization constant exceeds the smallest eigenvalue."""


class StabilityViolation(UserWarning):
    """Forward-Euler step outside the stable regime (warning, not an error)."""


# hamiltonians
class IndexOutOfRange(QlabError):
    """Mode or site index outside the allowed range."""


class NoSplit(QlabError):
    """Hamiltonian has no two-part split for Trotterization."""


# block encodings
class NormExceedsOne(QlabError):
    """Operator norm larger than one where a contraction is required."""


class MaxNormExceeded(QlabError):
    """Largest entry magnitude larger than one."""


class NotBanded(QlabError):
    """Matrix has entries outside the declared band."""


class InhomogeneousBlocks(QlabError):
    """Blocks passed to LCU do not share ancilla count, size, or alpha = 1."""


# qsp
class XOutOfRange(QlabError):
    """Signal value outside [-1, 1]."""


class MaxNormViolated(QlabError):
    """Target polynomial reaches magnitude one or more on [-1, 1]."""


class ParityMismatch(QlabError):
    """Target parity is inconsistent with its degree."""


class NonConvergence(QlabError):
    """Iterative solver failed to reach the requested tolerance.

    Attributes:
        residual: Final objective value.
        iterations: Number of iterations performed.
    """

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class DegreeTooLow(QlabError):
    """Polynomial degree too low to reach the requested accuracy.

    Attributes:
        achieved: Best uniform error reached at the given degree.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error {achieved:.3e})")
        self.achieved = achieved


# qet / qsvt
class SubnormalizedInput(QlabError):
    """Block encoding has alpha != 1 or nonzero error where exactness is needed."""


class PhaseLengthMismatch(QlabError):
    """Phase list length inconsistent with the declared degree."""


class PhaseSolveFailed(QlabError):
    """Phase solving failed inside a composite pipeline.

    Attributes:
        residual: Residual reported by the underlying solver.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class GapViolated(QlabError):
    """An eigenvalue falls inside the forbidden gap window."""


class ConditionNumberUnderestimated(QlabError):
    """Smallest singular value is below 1/kappa."""


class NotStochastic(QlabError):
    """Matrix is not row-stochastic."""


class OverlapBelowDelta(QlabError):
    """Initial overlap with the good subspace is below the promised lower bound."""


# cli
class UnknownExperiment(QlabError):
    """No experiment registered under this name."""


class ParameterOutOfRange(QlabError):
    """Experiment parameter missing, malformed, or outside its allowed range."""
