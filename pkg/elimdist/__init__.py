"""elimdist - elimination distances of graphs to first-order properties."""

from .distance import (
    DistanceQuery, DistanceResult, Variant, Witness, WitnessPart, ed_conn, ed_depth, ed_prop,
    solve, validate_witness, witness_at_most,
)
from .elimination import EliminationRepresentation, depth, depth_at_most, prop_representation
from .errors import (
    ArityError, ElimDistError, FormulaSyntaxError, GraphFormatError, PreconditionError, SizeCapExceeded,
)
from .formula import Formula, catalog_formula, load_formula, parse_formula, render_formula, sigma3_form
from .fpt import Coloring, Counters, default_p, find_c, find_f, find_x, solve_unbreakable
from .graph import Graph, InducedSubgraph, is_unbreakable, load_graph, torso, tree_depth
from .hardness import SetCoverInstance, hard_formula, reduction_equivalence_check, setcover_to_graph
from .modelcheck import Structure, first_failing_tuple, models
from .msol import emit_msol, eval_msol, render_msol
from .separation import SeparatingFamily, build_family, verify_family

__version__ = "0.1.0"
