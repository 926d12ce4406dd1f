"""Spectral and monodromy toolkit for spherical metrics with two conical points."""

from .extensions import (ExtensionType, SingularCoefficientLayout,
                         admissible_leading_exponent, extension_subspace,
                         is_lagrangian, layout_for, singular_count,
                         symplectic_pairing)
from .frobenius import (RadialProblem, RadialSeries, build_series,
                        closed_form_lambda2, evaluate)
from .metric import (Football, PowerCover, canonical_eigenfunction, density,
                     geodesic_radius, schwarzian_principal_coefficient,
                     total_area)
from .moebius import (INFINITY, ComplexFraction, MoebiusTransform, apply,
                      compose, inverse, is_unitary, normalize)
from .spectral import (EigenvalueHit, ModeSpectralProblem, eigenvalue_scan,
                       lambda1, matching_values, real_two_eigenspace_dimension,
                       shoot_to_equator, spectrum_report)

__version__ = "0.1.0"

__all__ = [
    "ExtensionType", "SingularCoefficientLayout", "admissible_leading_exponent",
    "extension_subspace", "is_lagrangian", "layout_for", "singular_count",
    "symplectic_pairing", "RadialProblem", "RadialSeries", "build_series",
    "closed_form_lambda2", "evaluate", "Football", "PowerCover",
    "canonical_eigenfunction", "density", "geodesic_radius",
    "schwarzian_principal_coefficient", "total_area", "INFINITY",
    "ComplexFraction", "MoebiusTransform", "apply", "compose", "inverse",
    "is_unitary", "normalize", "EigenvalueHit", "ModeSpectralProblem",
    "eigenvalue_scan", "lambda1", "matching_values",
    "real_two_eigenspace_dimension", "shoot_to_equator", "spectrum_report",
]
