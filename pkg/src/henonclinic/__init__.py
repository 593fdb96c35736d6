"""Invariant manifolds, homoclinic points and tangencies of cubic Henon-type maps."""

from .continuation import (
    ContinuationRecord,
    ProblemTemplate,
    TangencyFit,
    continue_parameter,
    fit_from_records,
    fit_sqrt_law,
)
from .homoclinic import (
    DistanceProfile,
    HomoclinicSolution,
    MismatchProblem,
    distance_profile,
    find_homoclinic,
    mirror_solution,
    mismatch,
    mismatch_jacobian,
    root_series_errors,
    seed_grid,
    transversality_det,
)
from .manifold2d import Series2D, ValidityProfile, compute_series_2d, series_from_symmetry
from .manifold4d import PolarValidityProfile, Series4D, compute_series_4d
from .maps import CubicMap2D, CubicMap4D, ModePair, Spectrum

__all__ = [
    "ContinuationRecord",
    "CubicMap2D",
    "CubicMap4D",
    "DistanceProfile",
    "HomoclinicSolution",
    "MismatchProblem",
    "ModePair",
    "PolarValidityProfile",
    "ProblemTemplate",
    "Series2D",
    "Series4D",
    "Spectrum",
    "TangencyFit",
    "ValidityProfile",
    "compute_series_2d",
    "compute_series_4d",
    "continue_parameter",
    "distance_profile",
    "find_homoclinic",
    "fit_from_records",
    "fit_sqrt_law",
    "mirror_solution",
    "mismatch",
    "mismatch_jacobian",
    "root_series_errors",
    "seed_grid",
    "series_from_symmetry",
    "transversality_det",
]

__version__ = "0.1.0"
