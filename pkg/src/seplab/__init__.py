"""Edge counts of symmetric edge polytopes of Erdős–Rényi graphs."""
from .graph import Arc, Graph, SimParams, erdos_renyi, from_edge_list
from .moments import expectation_polytope, expectation_triangulation, variance_case1_polytope
from .polytope import DirectedArc, DirectedArcPair, count_edges, is_edge_fast, is_edge_naive
from .triangulation import ArcOrder, count_tri_edges, is_tri_edge, random_arc_order

__all__ = [
    "Arc", "ArcOrder", "DirectedArc", "DirectedArcPair", "Graph", "SimParams",
    "count_edges", "count_tri_edges", "erdos_renyi", "expectation_polytope",
    "expectation_triangulation", "from_edge_list", "is_edge_fast", "is_edge_naive",
    "is_tri_edge", "random_arc_order", "variance_case1_polytope",
]
