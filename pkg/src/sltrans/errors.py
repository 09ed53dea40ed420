"""Exception types shared across the solver."""


class SLTransError(Exception):
    """Base class for all solver errors."""


# --- problem definition ---------------------------------------------------

class DegenerateMatrix(SLTransError):
    """All six column determinants of the transmission matrix vanish."""


class RankDeficientTransmission(SLTransError):
    """Transmission matrix rows are linearly dependent."""


class RhoSignViolation(SLTransError):
    """rho12 > 0 and rho34 > 0 is required for a well-posed problem."""


class PotentialUnbounded(SLTransError):
    """Potential is not finite (or not evaluable) on its subinterval."""


class ProblemValidationError(SLTransError):
    """Aggregate of all validation violations for a problem instance.

    ``violations`` holds one exception instance per independent defect so
    callers see the complete list, not just the first failure.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{type(v).__name__}: {v}" for v in self.violations)
        super().__init__(msg or "invalid problem")


# --- integration ----------------------------------------------------------

class StepFailure(SLTransError):
    """Adaptive step controller underflowed the minimum step size."""


class NonFiniteState(SLTransError):
    """Integration state overflowed or became NaN."""


# --- interface jumps and fundamental solutions ----------------------------

class SingularJump(SLTransError):
    """Required rho denominator of the interface jump map is ~0."""


class NoConvergence(SLTransError):
    """Successive-approximation iteration hit its cap while still moving."""


class CaseMismatch(SLTransError):
    """Boundary angles contradict the predicates of the requested case."""


# --- characteristic function and spectrum ----------------------------------

class SideMismatch(SLTransError):
    """Operation requires two solution paths on the same subinterval."""


class MeshMismatch(SLTransError):
    """Operation requires identical dense meshes."""


class LostBracket(SLTransError):
    """Root bracket endpoints do not have opposite signs."""


class TangencyRejected(SLTransError):
    """|w| minimum of a tangency candidate stayed above the noise floor."""


class NotAnEigenvalue(SLTransError):
    """Right boundary residual too large for the requested lambda."""


class IncompleteSpectrum(SLTransError):
    """Eigenvalue count disagrees with the asymptotic density estimate."""


class DegenerateFit(SLTransError):
    """All asymptotic errors are at rounding level; no exponent to fit."""


# --- configuration ----------------------------------------------------------

class ConfigError(SLTransError):
    """Configuration file could not be parsed or validated.

    ``entries`` is a list of (line_number, message) pairs; line_number is
    None for file-level problems.
    """

    def __init__(self, entries):
        self.entries = list(entries)
        msg = "; ".join(
            f"line {ln}: {m}" if ln is not None else m for ln, m in self.entries
        )
        super().__init__(msg or "invalid configuration")
