"""Periodic event scheduling through polytropes and offset zonotopes.

The timetable torus of a periodic scheduling instance decomposes into
polytropes indexed by cycle offsets; those offsets are the lattice points
of a zonotope whose geometry (volume, width, spanning tree tilings)
bounds and organizes the search for good timetables.
"""

from .errors import (
    CrosscheckMismatch,
    DisconnectedGraph,
    EmptyPolytrope,
    EnumerationCapExceeded,
    FixedArcPresent,
    Infeasible,
    InfeasibleFixedCycle,
    InvalidBounds,
    NotASpanningTree,
    NotATension,
    PeritropeError,
    RetriesExhausted,
)
from .exact import CrosscheckReport, brute_force_timetable, crosscheck, solve_exact, verify_solution
from .fixedlp import FixedOffsetResult, brute_force_fixed_offset, minimize_over_polytrope
from .graphs import (
    CycleBasis,
    Digraph,
    Gbar,
    OrientedCycle,
    arborescences_rooted,
    count_spanning_trees_determinant,
    cyclomatic_number,
    default_basis,
    fundamental_cycle_basis,
    gbar,
    greedy_spanning_tree,
    spanning_trees,
    verify_kernel_property,
)
from .instances import (
    ContractionResult,
    ParseError,
    PespInstance,
    ValidationReport,
    contract_fixed_arcs,
    limit_instance,
    parse_instance,
    serialize_instance,
    validate,
)
from .polytropes import (
    Polytrope,
    anchor_timetable,
    enumerate_polytropes,
    kappa,
    neighbors,
    normalize_timetable,
    offset_from_cycle_offset,
    offset_zero,
    polytrope_build,
    polytrope_dimension,
    polytrope_nonempty,
    tension_to_timetable,
    timetable_membership,
    timetable_to_tension,
    tropical_vertices,
)
from .render import polytrope_polygon, render_torus, render_zonotope
from .search import (
    NeighbourhoodGraph,
    Solution,
    TnsConfig,
    initial_solution,
    neighbourhood_graph,
    solution_from_timetable,
    tns,
    trace_to_jsonl,
)
from .zonotopes import (
    DualityEntry,
    DualityReport,
    SpanningTreeStructure,
    Tile,
    TilingReport,
    WidthBoundReport,
    ZonotopeDescriptor,
    duality_check,
    fine_tiling,
    lattice_points,
    odijk_box,
    scaled_point_in_zonotope,
    structure_for_tree,
    tile_contains_scaled,
    validate_tiling,
    volume,
    volume_by_tree_sum,
    width,
    width_bound_report,
    zonotope_descriptor,
    zonotope_membership,
)

__version__ = "0.1.0"
