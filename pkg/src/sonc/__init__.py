"""Exact computations on the boundary of the sonc cone of a sparse support."""

from .circuits import Circuit, enumerate_circuits, minimal_circuits, reznick_cone, simplicial_circuit_through
from .errors import SoncError
from .expsum import Agiform, ExponentialSum, SoncDecomposition, agiform_coeffs, assemble, evaluate
from .geometry import SupportSet, dims, newton_faces
from .subdivision import (
    RegularSubdivision,
    WeightVector,
    enumerate_regular_subdivisions,
    sonc_complex,
    subdivide,
    tropical_complex,
)

__version__ = "0.1.0"

__all__ = [
    "Agiform",
    "Circuit",
    "ExponentialSum",
    "RegularSubdivision",
    "SoncDecomposition",
    "SoncError",
    "SupportSet",
    "WeightVector",
    "agiform_coeffs",
    "assemble",
    "dims",
    "enumerate_circuits",
    "enumerate_regular_subdivisions",
    "evaluate",
    "minimal_circuits",
    "newton_faces",
    "reznick_cone",
    "simplicial_circuit_through",
    "sonc_complex",
    "subdivide",
    "tropical_complex",
]
