"""Classical, local and union page numbers of graphs."""

from .bounds import (
    BoundReport,
    DensityReport,
    ForestPartition,
    Target,
    arboricity_partition,
    bound_report,
    density_report,
    eq4_chain_check,
    lemma1_lower_bound,
    mad,
    max_density,
    nash_williams,
    refined_local_bound,
)
from .construct import (
    CyclicTemplate,
    KTreeColoring,
    StarForestPartition,
    kn_zigzag,
    ktree_color_partition,
    lemma2_amplifier,
    local_embedding_from_stars,
    pack_stars,
    star_forests_from_forests,
    template_search,
    union_embedding_from_arboricity,
    union_embedding_from_star_forests,
)
from .embedding import (
    LinearEmbedding,
    SpineOrder,
    VerificationReport,
    crosses,
    locality_profile,
    parse_embedding,
    serialize_embedding,
    split_components,
    verify,
)
from .graphs import (
    Graph,
    GraphFamilyTag,
    GraphFormatError,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_k_tree,
    gen_path,
    gen_stacked_triangulation,
    parse_graph,
    serialize_graph,
)
from .solver import Param, SolveRequest, SolveResult, oracle_all, solve, solve_fixed_spine

__version__ = "0.1.0"
