"""Elliptic curves over Q(i): torsion, torsion families and counts by height."""

from .curve import Curve, IsoClass, Point, height, is_minimal, iso_class, minimalize
from .errors import (
    DataIntegrityError,
    DegenerateParameterError,
    DomainError,
    InternalConsistencyError,
    SingularCurveError,
    UsageError,
    ValidationFailure,
)
from .gaussian import GaussianInt, GaussianRational, factor, gcd, kth_power_part
from .torsion import ALL_LABELS, TorsionLabel, compute_torsion, torsion_points, torsion_structure

__version__ = "0.1.0"

__all__ = [
    "ALL_LABELS",
    "Curve",
    "DataIntegrityError",
    "DegenerateParameterError",
    "DomainError",
    "GaussianInt",
    "GaussianRational",
    "InternalConsistencyError",
    "IsoClass",
    "Point",
    "SingularCurveError",
    "TorsionLabel",
    "UsageError",
    "ValidationFailure",
    "compute_torsion",
    "factor",
    "gcd",
    "height",
    "is_minimal",
    "iso_class",
    "kth_power_part",
    "minimalize",
    "torsion_points",
    "torsion_structure",
]
