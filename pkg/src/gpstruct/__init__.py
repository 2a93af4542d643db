"""Constructive graph product structure: products, decompositions, separators,
localising sets, colouring numbers, shortcut systems and unit-disc embeddings."""

from .colouring import (
    VertexOrdering,
    eval_colr,
    exact_colr,
    product_ordering,
    reachable_set,
)
from .decomposition import (
    PathDecomposition,
    Separation,
    TreeDecomposition,
    exact_treewidth,
    heuristic_treewidth,
    product_td,
    separator_from_td,
    validate_td,
)
from .errors import CapacityError, ContractError, GPSError, InputError, StatisticalFailure
from .geometry import ProductEmbedding, embed_unit_disc, knn_graph, unit_disc_graph
from .graph import (
    Graph,
    Layering,
    ball,
    ball_size_bound,
    cartesian_product,
    graph_power,
    growth_check,
    layering_by_axis,
    project,
    strong_product,
)
from .localise import (
    LocalisingDistribution,
    LocalisingSet,
    build_distribution,
    min_valid_radius,
    sample_localising,
    weighted_fragment,
)
from .separators import LayeredDeletionReport, Polynomial, combined_separator, layered_deletion
from .shortcuts import ShortcutSystem, apply_shortcuts, power_shortcut_system, validate_shortcuts
from .testgen import (
    WitnessReport,
    shallow_minor_check,
    star_cartesian_subdivision_witness,
    strong_star_binary_tree_witness,
)

__version__ = "0.1.0"
