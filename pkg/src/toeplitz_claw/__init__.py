"""Claw-freeness, chordality and line-graph recognition for Toeplitz graphs."""

from .core import Claw, Graph, ToeplitzGraph, ToeplitzParams, build_graph, neighbors, reflect, validate_params
from .oracle import (
    clique_number,
    enumerate_claws,
    find_hole,
    is_chordal,
    is_interval,
    is_line_graph,
    verify_bijection_isomorphism,
)
from .theorems import (
    arithmetic_closure,
    classify_claw_free,
    classify_line_graph,
    cycle_decomposition,
    decompose_cocoonery,
    decompose_gcd,
    is_cocoonery,
    is_mutation,
    refute_by_offset_conditions,
)
from .verify import SweepSpec, explain, run_sweep

__version__ = "0.1.0"

__all__ = [
    "Claw",
    "Graph",
    "SweepSpec",
    "ToeplitzGraph",
    "ToeplitzParams",
    "arithmetic_closure",
    "build_graph",
    "classify_claw_free",
    "classify_line_graph",
    "clique_number",
    "cycle_decomposition",
    "decompose_cocoonery",
    "decompose_gcd",
    "enumerate_claws",
    "explain",
    "find_hole",
    "is_chordal",
    "is_cocoonery",
    "is_interval",
    "is_line_graph",
    "is_mutation",
    "neighbors",
    "reflect",
    "refute_by_offset_conditions",
    "run_sweep",
    "validate_params",
    "verify_bijection_isomorphism",
]
