"""Simplicial complexes of graphs with domination number at least k,
their discrete Morse matchings, and their homology."""
from .complex import (
    CellTable,
    ComplexSpec,
    FVector,
    SizeLimitError,
    enumerate_complex,
    euler_characteristic,
    f_vector,
    facets,
    wedge_count,
)
from .graphs import LabeledGraph, domination_at_least, domination_number, edge_index
from .homology import betti
from .morse import Matching, critical_census, dnn2_matching, d52_matching, verify_acyclic

__all__ = [
    "CellTable", "ComplexSpec", "FVector", "LabeledGraph", "Matching", "SizeLimitError",
    "betti", "critical_census", "d52_matching", "dnn2_matching", "domination_at_least",
    "domination_number", "edge_index", "enumerate_complex", "euler_characteristic",
    "f_vector", "facets", "verify_acyclic", "wedge_count",
]
__version__ = "0.1.0"
