"""Mother bodies of polygons and rotationally symmetric bodies.

A mother body of a body ``Omega`` is a nonnegative measure carried by a null
set inside ``Omega`` whose Newtonian potential equals that of ``Omega``
outside it and dominates it inside.
"""

from .geometry import (
    ConvexPolygon,
    Disk,
    SkeletonGraph,
    SymmetricBody3D,
    medial_axis,
    regular_polygon,
    validate_polygon,
)
from .measure import AtomicMeasure, BodyMeasure, PointMass, SegmentDensity, ball_packing
from .potential import ElectroConstants, Kernel, potential_many
from .skeleton import FitConfig, analytic_mother, mother_of_polygon
from .verify import AxiomConfig, reproduce, verify_all

__all__ = [
    "AtomicMeasure",
    "AxiomConfig",
    "BodyMeasure",
    "ConvexPolygon",
    "Disk",
    "ElectroConstants",
    "FitConfig",
    "Kernel",
    "PointMass",
    "SegmentDensity",
    "SkeletonGraph",
    "SymmetricBody3D",
    "analytic_mother",
    "ball_packing",
    "medial_axis",
    "mother_of_polygon",
    "potential_many",
    "regular_polygon",
    "reproduce",
    "validate_polygon",
    "verify_all",
]
__version__ = "0.1.0"
