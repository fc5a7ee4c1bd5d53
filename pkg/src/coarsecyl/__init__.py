"""Coarse geometry on finite fine-graph models.

Angles and cones, coarse piecewise geodesics, l-cylinders, slice
decompositions, Cayley-ball models and the lamination of a Van Kampen
polyhedron, each with a brute-force oracle in :mod:`coarsecyl.oracles`.
"""
from .angles import INF, ModelError, cone, max_angle, neighbor_angle
from .constants import ConstantError, ConstantSet, exploratory, paper_faithful
from .cylinders import Cylinder, cylinder
from .graph import (BudgetExceeded, DisconnectedError, FineGraph, GraphError,
                    all_geodesics, hyperbolicity_delta)
from .kernels import BACKEND
from .lamination import LaminationError, laminate
from .paths import CoarsePiecewiseGeodesic, validate_cpg
from .presentations import (GraphModel, Presentation, PresentationError, cayley_ball,
                            coned_off, parse_presentation)
from .slices import SliceDecomposition, order_slices, triangle_slices

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BudgetExceeded", "CoarsePiecewiseGeodesic", "ConstantError",
    "ConstantSet", "Cylinder", "DisconnectedError", "FineGraph", "GraphError",
    "GraphModel", "INF", "LaminationError", "ModelError", "Presentation",
    "PresentationError", "SliceDecomposition", "all_geodesics", "cayley_ball",
    "cone", "coned_off", "cylinder", "exploratory", "hyperbolicity_delta",
    "laminate", "max_angle", "neighbor_angle", "order_slices", "paper_faithful",
    "parse_presentation", "triangle_slices", "validate_cpg",
]
