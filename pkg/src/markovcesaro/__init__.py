"""Markov codings of (semi)groups, exact sphere growth, regular-sequence
asymptotics and Cesaro averages of spherical averages on finite spaces."""

from .graph import (
    Arc,
    Condensation,
    GraphFormatError,
    LabelledGraph,
    graph_power,
    induced_subgraph,
    parse_graph,
    serialize_graph,
    strongly_connected_components,
)
from .counting import count_matrix, count_table, enumerate_paths, verify_cut_convolution
from .regularity import (
    RegularDescriptor,
    RegularityOptions,
    ResidueClass,
    descriptor_convolve,
    descriptor_of_pair,
    descriptor_of_spheres,
    descriptor_scale,
    descriptor_shift,
    descriptor_sum,
    geometric_descriptor,
    perron_analyze,
    scc_period,
    validate_descriptor,
)
from .action import (
    FiniteAction,
    FiniteSpace,
    convergence_report,
    invariance_probe,
    load_action,
    lp_norm,
    operator_contract_check,
    spherical_averages,
)
from .codings import (
    build_finite_group_shortlex,
    build_free_group,
    build_free_semigroup,
    verify_bijectivity,
)

__version__ = "0.1.0"
