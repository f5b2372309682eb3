"""Combinatorial classification and parameter location for postsingularly
finite exponential maps z -> lambda * exp(z)."""

__version__ = "0.1.0"

from .classify import (
    AddressClass,
    are_equivalent,
    class_invariants_report,
    equivalence_class,
    members_by_pullback,
    sweep_classes,
)
from .errors import PsfexpError
from .itinerary import (
    Itinerary,
    OrderData,
    itinerary_by_algorithm,
    itinerary_by_definition,
    kneading,
    kneading_period,
    orbit_order,
    recover_address,
)
from .numerics import (
    ConvergenceClass,
    RayTrace,
    SingularOrbit,
    TraceConfig,
    classify_convergence,
    eval_map,
    inverse_branch,
    misiurewicz_newton,
    singular_orbit,
    trace_dynamic_ray,
)
from .pararay import (
    ContinuationSchedule,
    ParameterRaySample,
    ParameterScan,
    PsfParameter,
    address_search,
    distinctness_check,
    find_lambda,
    land_parameter_ray,
    scan_parameter_plane,
    trace_parameter_ray,
)
from .spider import (
    LevyWitness,
    SpiderGraph,
    SpiderVertex,
    build_graph,
    check_unlinking,
    detect_levy,
    export_graph,
    spider_graph_from_json,
)
from .symbolic import (
    AddressInterval,
    ExternalAddress,
    compare,
    enumerate_addresses,
    format_address,
    parse_address,
    partition_interval,
    pullback,
    shift,
)
