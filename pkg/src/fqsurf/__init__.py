"""Surface quotients of right-angled Fuchsian buildings.

Construction, verification, and existence decisions for closed-surface
tessellations by right-angled p-gons with thickness data.
"""

from .surface_complex import (
    CCW,
    CW,
    COMPLEX_FORMAT,
    DanglingEdgeReference,
    DualGraph,
    DuplicateId,
    Edge,
    Face,
    Finding,
    IntegerMatrix,
    Side,
    SurfaceComplex,
    ValidationReport,
    WrongSideCount,
    betti_numbers,
    boundary_matrices,
    build_complex,
    canonical_json,
    complex_from_dict,
    complex_to_dict,
    dual_graph,
    euler_characteristic,
    smith_normal_form,
    validate,
)
from .loops import (
    GeodesicLoop,
    LOOPS_FORMAT,
    LoopReport,
    NotACycle,
    OrientationAssignment,
    assign_face_orientations,
    difference_is_face_sum,
    loop_report_to_dict,
    loops_generate_h1,
    pairwise_intersections,
    trace_geodesic_loops,
)
from .tessellation import (
    BadDivisibility,
    ConstructionFailure,
    CutSystemFailure,
    NonIntegralFaceCount,
    SUBDIV_FORMAT,
    SubdivisionMap,
    SymmetryViolation,
    build_block_tessellation,
    build_rect_tessellation,
    complex_from_matchings,
    derived_sequence,
    face_count,
    subdivide_four,
    subdivide_two,
    subdivision_map_to_dict,
)
from .coloring import (
    COLORING_FORMAT,
    ContradictionWitness,
    DegenerateLoop,
    EdgeColoring,
    Holonomy,
    NotClosed,
    ParityConstraint,
    ParityConstraintSystem,
    TooLargeForExhaustive,
    build_constraints,
    coloring_from_dict,
    coloring_to_dict,
    holonomy,
    solve_good_coloring,
    verify_good_coloring,
    witness_to_dict,
)
from .lattice import (
    CERT_FORMAT,
    AlternatingDecomposition,
    FaceGroupInconsistency,
    GroupAssignment,
    IndexMap,
    IndexSymmetry,
    LinkConditionReport,
    LinkGraph,
    NotAlternatingNonCoprime,
    NotGoodColoring,
    OddPUnsupported,
    Verdict,
    VertexCheck,
    alternating_noncoprime,
    assign_groups,
    build_certificate,
    build_link_graph,
    decide,
    loop_obstructions,
    symmetric_axes,
    symmetry_closure,
    verdict_to_dict,
    verify_link_conditions,
)

__all__ = [name for name in dir() if not name.startswith("_")]
