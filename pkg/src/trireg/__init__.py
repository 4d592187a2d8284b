"""Exact tools for d-regular graphs with many triangles.

Triangle and clique census, reveal-profile encoding, explicit counting
bounds, structure analysis (dense spots and pseudo-cliques), a conditioned
swap-chain sampler and exhaustive enumeration oracles.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundSheet,
    Regime,
    badness_bound,
    badness_bound_log,
    bound_sheet,
    default_eps_delta,
    explicit_upper_count,
    explicit_upper_count_log,
    lower_count,
    lower_count_log,
    phi_preimage_bound,
    rate,
)
from .census import (
    EdgeTriangleTable,
    census_report,
    count_k_cliques,
    count_triangles,
    edge_triangle_table,
    t_k_max,
    t_max,
    threshold,
)
from .enumeration import (
    EnumerationResult,
    count_by_triangles,
    count_regular_graphs,
    enumerate_pairings,
    enumerate_regular_graphs,
    exact_conditioned_count,
    exact_k_clique_conditioned_count,
    orbit_identity,
    phi_preimage_histogram,
    sweep_pairings,
)
from .errors import *  # noqa: F401,F403
from .generators import (
    BlockKind,
    PlantedSpec,
    plant_clique_family,
    plant_family,
    plant_matched_complement_family,
    planted_blocks,
    random_regular_graph,
    sample_configuration_model,
)
from .graph import (
    EdgeRef,
    PortLabeledGraph,
    RegularGraph,
    SimpleGraph,
    attach_ports,
    build_graph,
    parse_edgelist,
    read_edgelist,
    relabel_nodes,
    write_edgelist,
)
from .reveal import (
    MonteCarlo,
    RevealProfile,
    encode_phi,
    expected_phi_exact,
    mean_phi_over_permutations,
    permutation_success_fraction,
    phi_weight_fast,
    t_c,
)
from .sampler import ChainConfig, ChainTrace, double_edge_swap, metropolis_step, sample_conditioned
from .structure import (
    Mode,
    StructureReport,
    assemble_pseudo_cliques,
    classify_badness,
    dense_spot_from_edge,
    find_d_plus_1_cliques,
    strip_triangle_free_edges,
    structure_report,
)
