"""Exact census, realizability and enumeration tools for one-triangle point sets."""

__version__ = "0.1.0"

from .geometry import (
    CensusReport,
    GeometryError,
    Point,
    PointConfig,
    SquaredDistanceMatrix,
    TriangleSignature,
    census,
    distance_matrix,
    epsilon_census,
    is_degenerate_triple,
    squared_circumradius,
    squared_distance,
    triangle_signature,
)
from .realizability import (
    NOT_REALIZABLE,
    GramMatrix,
    RealizabilityReport,
    embedding_dimension,
    gram_from_squared_distances,
    psd_rank,
    realize_coordinates,
)
from .constructions import (
    isosceles_tetrahedron,
    opposite_edge_tetrahedron,
    rectangle,
    regular_simplex,
)
from .labelings import (
    EdgeLabeling,
    TriangleType,
    canonical_form,
    enumerate_one_triangle_labelings,
    triangle_constraint_holds,
    verify_bound,
)
