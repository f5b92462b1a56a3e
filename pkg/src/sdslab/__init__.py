"""Exact update-order stability analysis for sequential dynamical systems."""

__version__ = "0.1.0"

from .config import Limits
from .engine import (
    FunctionSequence,
    UpdateWord,
    VertexFunction,
    all_permutations,
    build_map,
    eca_vertex_functions,
    fln_vertex_functions,
    local_apply,
    parse_rule,
    permutation_transversal,
    sds_apply,
    symmetric_functions,
    threshold_functions,
)
from .estimators import OrientationCounts, SDSMap, UpdateOrderStability
from .exceptions import CapacityError, ContractError, DomainError, ParseError, SDSError, SizeError
from .graph import (
    Graph,
    VertexPermutation,
    automorphisms,
    circ,
    circ2,
    complete,
    generate,
    orbit_graph,
    parse_edge_list,
    path,
    star,
    tree,
)
from .orientations import (
    AcyclicOrientation,
    alpha,
    alpha_bar,
    click,
    count_report,
    enumerate_acyc,
    kappa,
    kappa_bar,
    kappa_classes,
    kappa_transversal,
    linear_extensions,
    orientation_of,
    tutte,
)
from .phase_space import (
    PhaseSpace,
    build_phase_space,
    canonical_form,
    classify,
    cycle_equivalent,
    cycle_type,
    dynamically_equivalent,
    functionally_equal,
)
from .stability import WordPolicy, eca_scan, omega_limit, omega_max, omega_union, rho, word_independent
