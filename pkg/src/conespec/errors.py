"""Exception hierarchy shared across the package.

Errors fall into three families: input/configuration problems, numerical
failures (quadrature, integration, truncation), and consistency violations
that signal a solver bug rather than a mathematical surprise.
"""


class ConespecError(Exception):
    """Base class for all package errors."""


# ---- input / algebraic preconditions ----

class SingularTransform(ConespecError):
    """Moebius entries with vanishing determinant."""


class NonExactNormalization(ConespecError):
    """Determinant is not a perfect square in the Gaussian rationals."""


class ConePointEvaluation(ConespecError):
    """Metric density requested at a cone point."""


class LayoutMismatch(ConespecError):
    """Coefficient vectors built over different layouts."""


class IndicialDegeneracy(ConespecError):
    """Closed-form coefficient requested with k + beta = 0."""


class UnsupportedSelector(ConespecError):
    """Closed-form field selector not available for this metric."""


class NonRationalInput(ConespecError):
    """Exact mode requested with a non-rational parameter."""


class NonRadialMetric(ConespecError):
    """Mode decomposition requires a rotation-invariant density."""


class ZeroField(ConespecError):
    """One-form requested from an identically vanishing vector field."""


class PathThroughSingularity(ConespecError):
    """Integration path passes within the clearance radius of a pole."""


# ---- numerical failures ----

class QuadratureFailure(ConespecError):
    """Adaptive quadrature did not reach the requested tolerance."""


class IntegrationFailure(ConespecError):
    """ODE step control collapsed before reaching the equator."""


class ResonantIndicial(ConespecError):
    """Series recursion hit a vanishing indicial factor (log terms needed)."""

    def __init__(self, j, message=None):
        self.j = j
        super().__init__(message or f"resonant indicial factor at series index j={j}")


class TruncationInsufficient(ConespecError):
    """Series tail estimate exceeds the evaluation tolerance."""


class SuspectedDoubleRoot(ConespecError):
    """Residual dips below sqrt(root_tol) without a sign change."""


# ---- consistency violations (solver-bug signals) ----

class TheoremViolation(ConespecError):
    """Computed output contradicts a proven structural constraint."""


class DimensionOutOfTheorem(TheoremViolation):
    """Real 2-eigenspace dimension outside {1, 3}."""


class ClassificationViolation(TheoremViolation):
    """Vector-field order at a cone breaches the admissible bound."""


class NonSimplePole(ConespecError):
    """Character one-form with a multiple pole."""


class NonRealResidue(ConespecError):
    """Residue with non-negligible imaginary part."""
