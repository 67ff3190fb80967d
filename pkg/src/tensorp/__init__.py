"""Objective interpolation of invertible 3x3 tensors.

A tensor is split into a rotation, an eigenvector rotation and eigenvalues;
each part is interpolated on its own space and the parts are recombined.
"""

from .baselines import (
    compute_metrics,
    interp_cholesky,
    interp_euclidean,
    interp_log_cholesky,
    interp_log_euclidean,
    objectivity_deviation,
    orientation_cosine,
)
from .decomposition import ByMagnitude, ByMaterialDirection, TensorDecomposition, assign_and_orient, polar_decompose
from . import errors
from .interpolator import DataPoint, InterpolationResult, SchemeConfig, interpolate_field, interpolate_tensor
from .wls import PolynomialBasis

__all__ = [
    "errors",
    "ByMagnitude",
    "ByMaterialDirection",
    "DataPoint",
    "InterpolationResult",
    "PolynomialBasis",
    "SchemeConfig",
    "TensorDecomposition",
    "assign_and_orient",
    "compute_metrics",
    "interp_cholesky",
    "interp_euclidean",
    "interp_log_cholesky",
    "interp_log_euclidean",
    "interpolate_field",
    "interpolate_tensor",
    "objectivity_deviation",
    "orientation_cosine",
    "polar_decompose",
]
