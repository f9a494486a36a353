"""H-represented polyhedra: projection, disjunctive hulls, redundancy, vertices."""
from .balas import balas_lift
from .compare import Comparison, poly_equal
from .constraint import EQ, GE, LE, LinearConstraint, Polyhedron, eq, ge, le
from .fm import fm_combinations, fm_eliminate, project
from .lp import feasible_point, is_bounded, maximize
from .redundancy import Certificate, RedundancyResult, redundancy_report, remove_redundant, verify_certificate
from .vertices import VertexSet, enumerate_vertices, hull_of_points

__all__ = [
    "LinearConstraint", "Polyhedron", "LE", "EQ", "GE", "le", "ge", "eq",
    "fm_eliminate", "fm_combinations", "project", "balas_lift",
    "remove_redundant", "redundancy_report", "verify_certificate", "Certificate", "RedundancyResult",
    "enumerate_vertices", "hull_of_points", "VertexSet",
    "poly_equal", "Comparison", "maximize", "feasible_point", "is_bounded",
]
