"""Plumbing graphs for Milnor fiber boundaries of Newton-nondegenerate
surface singularities on 3-dimensional toric germs.

The pipeline: Hilbert basis and companion polyhedron -> normal fans ->
common refinement -> boundary regularisation -> adapted fan -> decorated
curve-configuration graph -> multiplicity graph -> plumbing graph ->
calculus-reduced form.
"""

from .calculus import (
    blow_down,
    invariants,
    is_negative_definite,
    is_planar,
    reduce_graph,
)
from .cli import ProblemInput, PipelineResult, parse_input, run
from .cones import Cone, Fan, common_refinement, dual_cone, is_regular, make_cone
from .errors import BudgetError, InputError, InvariantError
from .hjstring import build_string, negative_cf
from .lattice import LatticeVector, face_chart, integral_length, primitive
from .newton import (
    SupportedFunction,
    check_hypotheses,
    check_nnd,
    height,
    lattice_measures,
    make_polyhedron,
    mixed_volume_2d,
    normal_fan,
)
from .pipeline import build_gcdt, build_gmult, build_gplomb
from .semigroup import companion_polyhedron, hilbert_basis

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "Cone", "Fan", "InputError", "InvariantError",
    "LatticeVector", "PipelineResult", "ProblemInput", "SupportedFunction",
    "blow_down", "build_gcdt", "build_gmult", "build_gplomb", "build_string",
    "check_hypotheses", "check_nnd", "common_refinement",
    "companion_polyhedron", "dual_cone", "face_chart", "height",
    "hilbert_basis", "integral_length", "invariants", "is_negative_definite",
    "is_planar", "is_regular", "lattice_measures", "make_cone",
    "make_polyhedron", "mixed_volume_2d", "negative_cf", "normal_fan",
    "parse_input", "primitive", "reduce_graph", "run",
]
