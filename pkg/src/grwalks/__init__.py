"""North-east lattice paths avoiding k collinear points.

Exhaustive search, SAT encodings and solver orchestration for the
Gerver-Ramsey collinearity problem.
"""

from .geometry import Line, enumerate_lines, line_points, prop1_slope_bounds, theoretical_bounds
from .walk import complement, dedup, encode_bits, normal_form, reverse, steps_to_points, validate
from .encoding import Instance, VarMap, build_instance, var_id
from .oracle import enumerate_all, point_counts, reachable, search_max
from .reachdb import ReachabilityDB

__version__ = "0.1.0"

__all__ = [
    "Line",
    "enumerate_lines",
    "line_points",
    "prop1_slope_bounds",
    "theoretical_bounds",
    "complement",
    "dedup",
    "encode_bits",
    "normal_form",
    "reverse",
    "steps_to_points",
    "validate",
    "Instance",
    "VarMap",
    "build_instance",
    "var_id",
    "enumerate_all",
    "point_counts",
    "reachable",
    "search_max",
    "ReachabilityDB",
]
