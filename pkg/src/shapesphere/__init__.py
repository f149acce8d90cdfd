"""Triangles as points of the shape sphere, and the level sets of their maximal angle."""

from .euclid import (
    AngleSet,
    Classification,
    DegenerateTriangleError,
    PlanarTriangle,
    classify_alpha,
    classify_fermat,
    fermat_point,
    max_angle,
    vertex_angles,
)
from .flow import assemble_max_angle_contour, probe_critical_point, separatrix, symmetry_check
from .measure import cap_area, paper_literal_area, prob_acute, prob_alpha_obtuse, prob_obtuse, region_area
from .montecarlo import McConfig, estimate
from .shapemap import ShapeCoords, embed, reconstruct, relabel, shape_coords, special_point, special_points

__version__ = "0.1.0"
