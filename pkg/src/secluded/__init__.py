"""Minimum-exposure paths in polygonal domains."""
from .geometry import PolygonalDomain, GeometryError, orient, polygon_area, locate_point, triangulate
from .visibility import visibility_polygon, visible_area, visibility_graph, weak_visibility_area
from .subdivision import build_arrangement, extend_visibility_edges, locate, visibility_decomposition
from .weights import WeightedSubdivision, build_weighted_subdivision, cell_constant_and_signs, refine_decomposition
from .wrp import discretize, path_cost, shortest_weighted_path
from .solvers import (integral_exposure, integral_secluded_ptas, secluded_path_holes, shortest_path_simple,
                      signature_of)
from .sat import (Cnf2, EmbeddedCnf2, SatError, brute_force_opt, max2sat_separable_vc, min2sat_monotone,
                  min2sat_separable, reduce_1in3_to_max2sat, reduce_max2sat_to_min2sat, split_variable_gadget)
from .reduction import (RegimeError, ReductionLayout, TreeParams, alpha_max, alpha_min, angle_ratio,
                        build_christmas_tree, verify_reduction)
from .formats import FormatError, parse_cnf, parse_domain, serialize_cnf, serialize_domain
from .svg import render_svg

__version__ = "0.1.0"
