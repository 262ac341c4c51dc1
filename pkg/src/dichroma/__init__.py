"""Exact acyclic colouring of digraphs and bounded checks of planar 2-colourability."""

from .digraph import Digraph, Graph
from .colouring import (ColouringConstraints, SolveResult, dichromatic_number,
                        find_colouring, graph_dichromatic_number, verify_colouring)
from .kernels import BACKEND

__all__ = [
    "BACKEND", "ColouringConstraints", "Digraph", "Graph", "SolveResult",
    "dichromatic_number", "find_colouring", "graph_dichromatic_number",
    "verify_colouring",
]
__version__ = "0.1.0"
