"""Multivariate data depth: exact and approximate depths, regions and medians."""
from .api import APPROX, EXACT, NOTIONS, DepthValue, depth, sample_depths
from .approx import (
    ApproxConfig,
    beta_skeleton_depth_approx,
    oja_depth_approx,
    projection_depth_approx,
    random_tukey_depth,
    random_tukey_depth_all,
    simplicial_depth_approx,
)
from .dataset import (
    Dataset,
    DepthResult,
    load_dataset,
    load_dissimilarity,
    load_points,
    save_dataset,
    write_region,
    write_results,
)
from .depth import *  # noqa: F401,F403
from .depth import __all__ as _depth_all
from .errors import DataError, DepthkitError, LocalizationError, SingularScatterError, UnsupportedMethodError
from .local import beta_localized_depth, kernelized_spatial_depth
from .regions import (
    MedianResult,
    Region,
    SpatialMedian,
    depth_median,
    depth_region_members,
    onion_layers,
    prob_central_region,
    spatial_median,
    tukey_region_2d,
)
from .scatter import ScatterModel, fit_scatter, mcd_scatter, moment_scatter, whiten, whiten_point

__version__ = "0.1.0"

__all__ = [
    "APPROX", "EXACT", "NOTIONS", "DepthValue", "depth", "sample_depths",
    "ApproxConfig", "beta_skeleton_depth_approx", "oja_depth_approx", "projection_depth_approx",
    "random_tukey_depth", "random_tukey_depth_all", "simplicial_depth_approx",
    "Dataset", "DepthResult", "load_dataset", "load_dissimilarity", "load_points", "save_dataset",
    "write_region", "write_results",
    "DataError", "DepthkitError", "LocalizationError", "SingularScatterError", "UnsupportedMethodError",
    "beta_localized_depth", "kernelized_spatial_depth",
    "MedianResult", "Region", "SpatialMedian", "depth_median", "depth_region_members", "onion_layers",
    "prob_central_region", "spatial_median", "tukey_region_2d",
    "ScatterModel", "fit_scatter", "mcd_scatter", "moment_scatter", "whiten", "whiten_point",
    *_depth_all,
]
