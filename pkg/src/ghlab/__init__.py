"""Geodesics, curve flows, and curvature diagnostics on multi-center
gravitational instantons built from a harmonic potential."""

from .config import DEFAULT_EXCLUSION_RADIUS, OV_DEFAULT_MASS, MonopoleConfig
from .errors import (
    CenterCollision,
    ChordThroughCenter,
    CoincidentEndpoints,
    CoincidentPoints,
    DegenerateCritical,
    DegeneratePresent,
    DegenerateStencil,
    EvaluationAtCenter,
    GHLabError,
    NoCriticalPoints,
    NonpositivePotential,
    NotAlmostCalibrated,
    NotCritical,
    NotPerfectMorse,
    NotRestPoint,
    PastExtinction,
    RayDegeneracy,
    RootNotBracketed,
    SelfIntersection,
    StepUnderflow,
)
from .curves import (
    Plane,
    PolyCurve,
    convex_hull,
    curvature_profile,
    first_crossing,
    hausdorff_to_segment,
    loop_winding,
)
from .flow import (
    CONVERGED_TO_SEGMENT,
    MAX_TIME,
    SHRUNK_TO_POINT,
    SINGULARITY_DETECTED,
    FlowControls,
    FlowTrace,
    blowup_diagnostics,
    detect_convergence,
    flow_curve,
    surface_area,
)
from .frame import connection_coefficients, fiber_curvature, invariant_hessian
from .gallery import (
    Scenario,
    bulge_arc,
    chord_nodes,
    clifford_case,
    collision_case,
    curvature_case,
    gallery_case,
    gallery_names,
    jordan_holder_case,
    radial_twist,
    seidel_arc,
    seidel_config,
    shrinking_loop_case,
    stability_scenarios,
    stable_arc_case,
    weave_arc,
    weave_config,
)
from .lagrangian import (
    almost_calibrated,
    class_pairing,
    cohomological_phase,
    flow_stable,
    grading,
    grading_variation,
    homotopy_word,
    jordan_holder,
    lagrangian_defect,
    lagrangian_directions,
    maslov_index,
    puncture_windings,
    seidel_invariant,
    thomas_stable,
)
from .orbitflow import (
    classify_rest_point,
    orbit_flow,
    phase_portrait,
    reference_radial_solution,
)
from .orbits import (
    OrbitRecord,
    find_critical_points,
    morse_index,
    ov_axis_orbit,
    triangle_configuration,
    triangle_orbits,
    verify_morse_count,
)
from .potential import (
    center_distances,
    orbit_length,
    potential,
    potential_gradient,
    potential_hessian,
)
from .sphere import (
    ambient_field,
    curvature_split,
    gauss_bonnet_total,
    gauss_curvature,
    positivity_certificate,
)

__version__ = "0.1.0"
