"""
Exception hierarchy for eiscoh.

Every library error derives from EiscohError and carries the process exit
code the CLI should return for it:
- 2: usage / config errors (bad flags, malformed presets, invalid input data)
- 1: a verification evaluated to FAIL
"""


class EiscohError(Exception):
    """Base class for all eiscoh errors."""

    exit_code = 2


class ConfigError(EiscohError, ValueError):
    """Malformed configuration file, flag value or preset name."""


class VerificationFailure(EiscohError):
    """A check ran to completion and failed."""

    exit_code = 1


class InvariantViolation(VerificationFailure):
    """An identity the construction guarantees evaluated false."""


class ShapeMismatchError(EiscohError, ValueError):
    """Weights, Weyl elements or rows of inconsistent size."""


class EmbeddingMismatchError(ShapeMismatchError):
    """Objects indexed by different embedding sets."""


class UnbalancedInfinityTypeError(EiscohError, ValueError):
    """Infinity type violating regularity or the balanced condition."""


class EnumerationCapExceeded(EiscohError):
    """Exhaustive enumeration larger than the configured cap."""


class NonCriticalAtomError(VerificationFailure):
    """Formal L-ratio that does not match the critical-value rewrite rule."""

    def __init__(self, detail: str):
        super().__init__(f"non-critical atom: {detail}")


class BudgetExceeded(EiscohError):
    """Quadrature node/sample budget exceeded."""


class NonConvergentConfiguration(EiscohError):
    """Quadrature requested for an integrand that does not converge."""


class SingularBasisError(EiscohError, ValueError):
    """Relative basis with vanishing trace-form determinant."""


class NotRationalSquare(VerificationFailure):
    """Discriminant relation produced c^2 outside (Q^x)^2."""

    def __init__(self, value):
        super().__init__(f"not rational square: c^2 = {value}")


class IncompatibleSigmaError(EiscohError):
    """Galois element not compatible with restriction to k1."""


class MissingCyclotomicData(EiscohError):
    """Galois element lacks the cyclotomic parameter needed to act on a surd."""
