"""Exact depth notions."""
from .distance import (
    beta_skeleton_count,
    beta_skeleton_depth,
    lens_depth_ordinal,
    lp_depth,
    mahalanobis_depth,
    spatial_depth,
)
from .halfspace import halfspace_count, halfspace_depth, halfspace_depth_all
from .oja import oja_depth, oja_mean_volume
from .onion import OnionPeeling, onion_depth, onion_depth_raw, peel
from .projection import PROJECTION_NOTIONS, projection_property_bound, restricted_depth, univariate_depth
from .simplicial import simplicial_count, simplicial_depth, simplicial_depth_fraction
from .zonoid import mean_impute, zonoid_depth, zonoid_depth_1d, zonoid_depth_imputed

__all__ = [
    "beta_skeleton_count", "beta_skeleton_depth", "lens_depth_ordinal", "lp_depth",
    "mahalanobis_depth", "spatial_depth",
    "halfspace_count", "halfspace_depth", "halfspace_depth_all",
    "oja_depth", "oja_mean_volume",
    "OnionPeeling", "onion_depth", "onion_depth_raw", "peel",
    "PROJECTION_NOTIONS", "projection_property_bound", "restricted_depth", "univariate_depth",
    "simplicial_count", "simplicial_depth", "simplicial_depth_fraction",
    "mean_impute", "zonoid_depth", "zonoid_depth_1d", "zonoid_depth_imputed",
]
