"""Problem instances: boundary angles, transmission matrix, potential.

The differential equation -y'' + q(x) y = lam * y lives on (-pi, pi) with an
interface at x = 0.  Boundary conditions at -pi and pi are parametrized by
angles alpha, beta:

    cos(alpha) y(-pi) + sin(alpha) y'(-pi) = 0
    cos(beta)  y(pi)  + sin(beta)  y'(pi)  = 0

and the interface carries two linear transmission conditions whose
coefficients form a 2x4 matrix.  The six 2x2 column determinants rho_kj of
that matrix control well-posedness (rho12 > 0, rho34 > 0) and appear in the
jump maps, the characteristic function and the orthogonality weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    DegenerateMatrix,
    PotentialUnbounded,
    ProblemValidationError,
    RankDeficientTransmission,
    RhoSignViolation,
)

INTERVAL = (-math.pi, math.pi)
INTERFACE = 0.0

# Column conventions: which solution slot each column of the 2x4 matrix
# multiplies.  "deriv-first" is the written order of the transmission
# conditions, (y'(0-), y(0-), y'(0+), y(0+)); "value-first" is
# (y(0-), y'(0-), y(0+), y'(0+)).
DERIV_FIRST = "deriv-first"
VALUE_FIRST = "value-first"

#: magnitude below which a determinant counts as exactly singular
RHO_SINGULAR_TOL = 1e-14

#: default tolerance for deciding sin(angle) == 0 in case classification
CASE_TOL = 1e-12

_SUP_SAMPLES = 2049  # per-side sampling density for the sup|q| estimate
_SUP_BOUND = 1e12    # |q| above this counts as unbounded


@dataclass(frozen=True)
class BoundaryAngles:
    """Angles of the separated boundary conditions at -pi and pi.

    Raw values are kept for evaluation; ``reduced()`` folds them into
    [0, pi) for reporting only.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("boundary angles must be finite")

    def reduced(self) -> tuple[float, float]:
        return (self.alpha % math.pi, self.beta % math.pi)


@dataclass(frozen=True)
class CaseTag:
    """One of the four boundary-angle cases.

    I:   sin(beta) != 0 and sin(alpha) != 0
    II:  sin(beta) != 0 and sin(alpha) == 0
    III: sin(beta) == 0 and sin(alpha) != 0
    IV:  sin(beta) == 0 and sin(alpha) == 0
    """

    variant: str
    sin_alpha_zero: bool
    sin_beta_zero: bool

    def __post_init__(self):
        expected = _variant_for(self.sin_alpha_zero, self.sin_beta_zero)
        if self.variant != expected:
            raise ValueError(f"variant {self.variant} conflicts with predicates")


def _variant_for(sin_alpha_zero: bool, sin_beta_zero: bool) -> str:
    if not sin_beta_zero:
        return "II" if sin_alpha_zero else "I"
    return "IV" if sin_alpha_zero else "III"


def classify_case(angles: BoundaryAngles, tol: float = CASE_TOL) -> CaseTag:
    """Classify the problem into case I..IV by the sin(alpha), sin(beta) zeros."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    sa0 = abs(math.sin(angles.alpha)) <= tol
    sb0 = abs(math.sin(angles.beta)) <= tol
    return CaseTag(_variant_for(sa0, sb0), sa0, sb0)


# ---------------------------------------------------------------------------
# potential
# ---------------------------------------------------------------------------

# kernel kind codes, shared with the integration backends
QKIND_ZERO = 0
QKIND_CONSTANT = 1
QKIND_COSINE = 2
QKIND_POLYNOMIAL = 3
QKIND_TABLE = 4


@dataclass(frozen=True)
class PotentialPiece:
    """Potential on one subinterval, in a form the integrator can evaluate.

    Forms:
      zero                        q(x) = 0
      constant(c)                 q(x) = c
      cosine(amplitude, freq)     q(x) = amplitude * cos(freq * x)
      polynomial(coeffs)          q(x) = sum_k coeffs[k] * x**k
      table(x, values, order)     interpolation through sorted breakpoints,
                                  order 1 (linear) or 3 (clamped cubic)
    """

    form: str
    params: tuple = ()
    span: tuple[float, float] = (INTERVAL[0], INTERFACE)
    # kernel descriptor, filled in __post_init__
    kind: int = field(init=False, default=QKIND_ZERO)
    knots: np.ndarray = field(init=False, repr=False, default=None)
    coefs: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        a, b = self.span
        if not a < b:
            raise ValueError("potential span must be nonempty")
        kind, knots, coefs = self._compile()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "coefs", coefs)

    def _compile(self):
        empty = np.empty(0, dtype=float)
        if self.form == "zero":
            return QKIND_ZERO, empty, empty
        if self.form == "constant":
            (c,) = self.params
            return QKIND_CONSTANT, empty, np.array([float(c)])
        if self.form == "cosine":
            amp, freq = self.params
            return QKIND_COSINE, empty, np.array([float(amp), float(freq)])
        if self.form == "polynomial":
            coeffs = np.asarray(self.params, dtype=float)
            if coeffs.size == 0:
                raise ValueError("polynomial needs at least one coefficient")
            return QKIND_POLYNOMIAL, empty, coeffs
        if self.form == "table":
            return self._compile_table()
        raise ValueError(f"unknown potential form {self.form!r}")

    def _compile_table(self):
        xs, vals, order = self.params
        xs = np.asarray(xs, dtype=float)
        vals = np.asarray(vals, dtype=float)
        if xs.ndim != 1 or xs.shape != vals.shape or xs.size < 2:
            raise ValueError("table needs matching 1-d breakpoints and values")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("table breakpoints must be strictly increasing")
        a, b = self.span
        if xs[0] > a + 1e-12 or xs[-1] < b - 1e-12:
            raise ValueError("table breakpoints must cover the subinterval")
        if order == 3:
            if xs.size < 4:
                raise ValueError("cubic table needs at least 4 breakpoints")
            spline = CubicSpline(xs, vals, bc_type="clamped")
            # spline.c is (4, ncell) with the cubic coefficient first;
            # repack ascending per cell for Horner evaluation in the kernel
            c = spline.c[::-1].T.reshape(-1).copy()
        elif order == 1:
            slopes = np.diff(vals) / np.diff(xs)
            c = np.zeros((xs.size - 1, 4))
            c[:, 0] = vals[:-1]
            c[:, 1] = slopes
            c = c.reshape(-1)
        else:
            raise ValueError("table interpolation order must be 1 or 3")
        return QKIND_TABLE, xs.copy(), c

    def __call__(self, x):
        """Evaluate q at a scalar or array position."""
        x = np.asarray(x, dtype=float)
        if self.kind == QKIND_ZERO:
            return np.zeros_like(x)
        if self.kind == QKIND_CONSTANT:
            return np.full_like(x, self.coefs[0])
        if self.kind == QKIND_COSINE:
            return self.coefs[0] * np.cos(self.coefs[1] * x)
        if self.kind == QKIND_POLYNOMIAL:
            return np.polynomial.polynomial.polyval(x, self.coefs)
        idx = np.clip(np.searchsorted(self.knots, x, side="right") - 1,
                      0, self.knots.size - 2)
        t = x - self.knots[idx]
        c = self.coefs.reshape(-1, 4)
        return c[idx, 0] + t * (c[idx, 1] + t * (c[idx, 2] + t * c[idx, 3]))

    def interior_knots(self) -> np.ndarray:
        """Breakpoints strictly inside the span (integration must not straddle them)."""
        if self.kind != QKIND_TABLE:
            return np.empty(0)
        a, b = self.span
        ks = self.knots
        return ks[(ks > a + 1e-12) & (ks < b - 1e-12)]

    def sup_estimate(self) -> float:
        """Estimate of sup |q| by dense sampling (exact for zero/constant/cosine)."""
        if self.kind == QKIND_ZERO:
            return 0.0
        if self.kind == QKIND_CONSTANT:
            return abs(self.coefs[0])
        if self.kind == QKIND_COSINE:
            return abs(self.coefs[0])
        xs = np.linspace(self.span[0], self.span[1], _SUP_SAMPLES)
        vals = self(xs)
        if not np.all(np.isfinite(vals)):
            raise PotentialUnbounded(f"potential not finite on {self.span}")
        return float(np.max(np.abs(vals)))


@dataclass(frozen=True)
class PotentialSpec:
    """Piecewise potential; the two sides may carry different pieces."""

    left: PotentialPiece
    right: PotentialPiece

    def __post_init__(self):
        if self.left.span != (INTERVAL[0], INTERFACE):
            raise ValueError("left piece must span [-pi, 0]")
        if self.right.span != (INTERFACE, INTERVAL[1]):
            raise ValueError("right piece must span [0, pi]")

    @staticmethod
    def uniform(form: str, *params) -> "PotentialSpec":
        """Same functional form on both sides."""
        return PotentialSpec(
            left=PotentialPiece(form, tuple(params), (INTERVAL[0], INTERFACE)),
            right=PotentialPiece(form, tuple(params), (INTERFACE, INTERVAL[1])),
        )

    @staticmethod
    def zero() -> "PotentialSpec":
        return PotentialSpec.uniform("zero")

    def piece(self, side: str) -> PotentialPiece:
        return self.left if side == "left" else self.right

    def sup_estimate(self) -> float:
        return max(self.left.sup_estimate(), self.right.sup_estimate())


# ---------------------------------------------------------------------------
# transmission matrix and rho determinants
# ---------------------------------------------------------------------------

_RHO_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


@dataclass(frozen=True)
class RhoSet:
    """The six 2x2 column determinants rho_kj, 1 <= k < j <= 4."""

    r12: float
    r13: float
    r14: float
    r23: float
    r24: float
    r34: float

    def __getitem__(self, pair) -> float:
        k, j = pair
        return getattr(self, f"r{k}{j}")

    def as_dict(self) -> dict:
        return {pair: self[pair] for pair in _RHO_PAIRS}

    def plucker_residual(self) -> float:
        """rho12*rho34 - rho13*rho24 + rho14*rho23, zero for any 2x4 matrix."""
        return self.r12 * self.r34 - self.r13 * self.r24 + self.r14 * self.r23

    def max_abs(self) -> float:
        return max(abs(self[pair]) for pair in _RHO_PAIRS)


@dataclass(frozen=True)
class TransmissionMatrix:
    """2x4 coefficient matrix of the two transmission conditions.

    ``column_convention`` records which solution slot each column
    multiplies; rho determinants are always taken on the columns as
    stored, so the convention only matters when building the actual
    linear conditions.
    """

    row_a: tuple[float, float, float, float]
    row_b: tuple[float, float, float, float]
    column_convention: str = DERIV_FIRST

    def __post_init__(self):
        object.__setattr__(self, "row_a", tuple(float(v) for v in self.row_a))
        object.__setattr__(self, "row_b", tuple(float(v) for v in self.row_b))
        if len(self.row_a) != 4 or len(self.row_b) != 4:
            raise ValueError("transmission rows must have 4 entries")
        if not all(math.isfinite(v) for v in self.row_a + self.row_b):
            raise ValueError("transmission entries must be finite")
        if self.column_convention not in (DERIV_FIRST, VALUE_FIRST):
            raise ValueError(f"unknown column convention {self.column_convention!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.row_a, self.row_b], dtype=float)

    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.as_array(), tol=1e-12))

    def coefficient_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """(M_minus, M_plus) acting on state vectors (y, y').

        The conditions read M_minus @ (y(0-), y'(0-)) + M_plus @ (y(0+), y'(0+)) = 0.
        """
        t = self.as_array()
        if self.column_convention == DERIV_FIRST:
            m_minus = t[:, [1, 0]]
            m_plus = t[:, [3, 2]]
        else:
            m_minus = t[:, [0, 1]]
            m_plus = t[:, [2, 3]]
        return m_minus, m_plus

    def gamma(self, v_minus, d_minus, v_plus, d_plus) -> tuple[float, float]:
        """Residuals of the two transmission conditions at given interface values."""
        m_minus, m_plus = self.coefficient_matrices()
        res = m_minus @ np.array([v_minus, d_minus]) + m_plus @ np.array([v_plus, d_plus])
        return float(res[0]), float(res[1])


def build_rho(transmission: TransmissionMatrix) -> RhoSet:
    """All six column determinants of the 2x4 transmission matrix.

    rho_kj = a_k * b_j - a_j * b_k on the columns as stored.  Raises
    DegenerateMatrix when every determinant is below the singularity
    tolerance (rank < 2).
    """
    a = transmission.row_a
    b = transmission.row_b
    vals = {}
    for k, j in _RHO_PAIRS:
        vals[f"r{k}{j}"] = a[k - 1] * b[j - 1] - a[j - 1] * b[k - 1]
    rho = RhoSet(**vals)
    if rho.max_abs() < RHO_SINGULAR_TOL:
        raise DegenerateMatrix("all rho_kj below 1e-14; transmission rows dependent")
    return rho


# ---------------------------------------------------------------------------
# problem spec and validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    """Full problem instance on (-pi, pi) with the interface at 0.

    rho is computed from the transmission matrix at construction and
    cached; ``validate_problem`` re-derives it as a consistency check.
    """

    angles: BoundaryAngles
    transmission: TransmissionMatrix
    potential: PotentialSpec
    rho: RhoSet = None

    def __post_init__(self):
        if self.rho is None:
            object.__setattr__(self, "rho", build_rho(self.transmission))


class ValidatedProblem:
    """Problem that passed validation, with cached derived quantities."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.angles = spec.angles
        self.transmission = spec.transmission
        self.potential = spec.potential
        self.rho = spec.rho
        self.sup_q = spec.potential.sup_estimate()
        m_minus, m_plus = spec.transmission.coefficient_matrices()
        self._m_minus = m_minus
        self._m_plus = m_plus

    def case(self, tol: float = CASE_TOL) -> CaseTag:
        return classify_case(self.angles, tol)

    def phi_init(self) -> tuple[float, float]:
        """Launch state (y, y') of the left-boundary solution at -pi."""
        return (math.sin(self.angles.alpha), -math.cos(self.angles.alpha))

    def chi_init(self) -> tuple[float, float]:
        """Launch state (y, y') of the right-boundary solution at pi."""
        return (-math.sin(self.angles.beta), math.cos(self.angles.beta))

    def boundary_residual_left(self, y, dy) -> float:
        a = self.angles.alpha
        return math.cos(a) * y + math.sin(a) * dy

    def boundary_residual_right(self, y, dy) -> float:
        b = self.angles.beta
        return math.cos(b) * y + math.sin(b) * dy

    def coefficient_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return self._m_minus, self._m_plus

    def default_lambda_min(self) -> float:
        # spectra with rho12, rho34 > 0 and bounded q are bounded below
        # near -sup|q|; 10 is a safety margin
        return -(10.0 + self.sup_q)


def collect_violations(spec: ProblemSpec) -> list:
    """Every validation defect of the instance, as exception objects."""
    violations = []
    try:
        rho = build_rho(spec.transmission)
    except DegenerateMatrix as err:
        violations.append(RankDeficientTransmission(str(err)))
        rho = None
    if spec.transmission.rank() < 2:
        if not any(isinstance(v, RankDeficientTransmission) for v in violations):
            violations.append(RankDeficientTransmission("transmission rows proportional"))
    if rho is not None:
        if rho.as_dict() != spec.rho.as_dict():
            # rho is cached at construction; divergence means the spec was
            # mutated or built by hand with stale values
            raise RuntimeError("cached rho set inconsistent with transmission matrix")
        if rho.r12 <= 0:
            violations.append(RhoSignViolation(f"rho12 > 0 required, got {rho.r12:g}"))
        if rho.r34 <= 0:
            violations.append(RhoSignViolation(f"rho34 > 0 required, got {rho.r34:g}"))
    for piece in (spec.potential.left, spec.potential.right):
        try:
            sup = piece.sup_estimate()
        except PotentialUnbounded as err:
            violations.append(err)
            continue
        if sup > _SUP_BOUND:
            violations.append(
                PotentialUnbounded(f"sup|q| ~ {sup:.3g} exceeds bound on {piece.span}")
            )
    return violations


def validate_problem(spec: ProblemSpec) -> ValidatedProblem:
    """Validate an instance; raises ProblemValidationError with the full list."""
    violations = collect_violations(spec)
    if violations:
        raise ProblemValidationError(violations)
    return ValidatedProblem(spec)


# canonical matrices used throughout the tests and shipped configs
def continuity_matrix(convention: str = VALUE_FIRST) -> TransmissionMatrix:
    """Plain continuity of y and y' across the interface."""
    return TransmissionMatrix((1, 0, -1, 0), (0, 1, 0, -1), convention)


def coupling_matrix(convention: str = VALUE_FIRST) -> TransmissionMatrix:
    """Coupling rows (1,1,-1,0)/(0,1,0,-1): rho24 != 0 test matrix."""
    return TransmissionMatrix((1, 1, -1, 0), (0, 1, 0, -1), convention)
