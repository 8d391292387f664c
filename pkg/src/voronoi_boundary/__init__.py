"""Poisson-Voronoi cell sizes near domain boundaries.

Analytic moments and Gamma fits of the cell of a seed at or near the
boundary of a quadrant/half-plane, an exact-clipping Monte Carlo oracle, and
the secure in-/out-degree distributions built on top of them.
"""

__version__ = "1.0.0"

from .mc_sim import (
    ConvexPolygon,
    SimConfig,
    SimStats,
    grid_scan,
    sample_ppp,
    simulate_cell_area,
    simulate_secure_degrees,
    voronoi_cell_area,
)
from .moments import (
    GammaParams,
    LocationMoments,
    MomentResult,
    fit_gamma,
    location_moments,
    lower_bound_mean_halfplane,
    lower_bound_mean_quadrant,
    mean_corner,
    mean_edge,
    mean_halfplane,
    mean_quadrant,
    rescale_intensity,
    second_moment_bulk,
    second_moment_corner,
    second_moment_edge,
    upper_bound_mean_quadrant,
)
from .quadrature import QuadResult, QuadSpec, ToleranceNotMetError
from .secrecy import (
    DegreeDistribution,
    IntensityRatio,
    in_degree_cdf,
    in_degree_moments,
    in_degree_pmf,
    isolation_comparison,
    out_degree_cdf,
    out_degree_pmf,
)
from .void_geometry import (
    PolarPoint,
    SeedLocation,
    VoidCase,
    void_area_halfplane,
    void_area_quadrant,
)

__all__ = [
    "__version__",
    "ConvexPolygon",
    "SimConfig",
    "SimStats",
    "grid_scan",
    "sample_ppp",
    "simulate_cell_area",
    "simulate_secure_degrees",
    "voronoi_cell_area",
    "GammaParams",
    "LocationMoments",
    "MomentResult",
    "fit_gamma",
    "location_moments",
    "lower_bound_mean_halfplane",
    "lower_bound_mean_quadrant",
    "mean_corner",
    "mean_edge",
    "mean_halfplane",
    "mean_quadrant",
    "rescale_intensity",
    "second_moment_bulk",
    "second_moment_corner",
    "second_moment_edge",
    "upper_bound_mean_quadrant",
    "QuadResult",
    "QuadSpec",
    "ToleranceNotMetError",
    "DegreeDistribution",
    "IntensityRatio",
    "in_degree_cdf",
    "in_degree_moments",
    "in_degree_pmf",
    "isolation_comparison",
    "out_degree_cdf",
    "out_degree_pmf",
    "PolarPoint",
    "SeedLocation",
    "VoidCase",
    "void_area_halfplane",
    "void_area_quadrant",
]
