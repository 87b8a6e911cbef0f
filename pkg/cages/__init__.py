"""Girth-diameter cages: bounds, exhaustive generation and constructions"""

from cages.errors import (
    CageError,
    CapacityError,
    ConstructionError,
    FetchError,
    Graph6Error,
    ParameterError,
    VerificationError,
)
from cages.graphcore import (
    Graph,
    LayerPartition,
    diameter,
    girth,
    graph6_decode,
    graph6_encode,
    is_kgd_graph,
    layers,
    read_graph6_file,
    write_graph6_file,
)
from cages.bounds import BoundsReport, bounds_report, lower_bound, moore
from cages.canon import canonical_key, canonical_key_with_pair, are_isomorphic
from cages.generator import GenerationResult, SearchOptions, find_cage, generate_all
from cages.repeatable import RepeatableBlock, is_repeatable, double_repeatable, splice_out_repeatable
from cages.constructions import (
    ChainResult,
    RatioBound,
    build_3_4_extremal,
    build_3_5_extremal,
    build_k_3_3,
    chain_construction,
    ratio_bounds,
)
from cages.oracle import OracleReport, CrossValidationReport, brute_force_regular, cross_validate

__all__ = [
    "CageError",
    "CapacityError",
    "ConstructionError",
    "FetchError",
    "Graph6Error",
    "ParameterError",
    "VerificationError",
    "Graph",
    "LayerPartition",
    "diameter",
    "girth",
    "graph6_decode",
    "graph6_encode",
    "is_kgd_graph",
    "layers",
    "read_graph6_file",
    "write_graph6_file",
    "BoundsReport",
    "bounds_report",
    "lower_bound",
    "moore",
    "canonical_key",
    "canonical_key_with_pair",
    "are_isomorphic",
    "GenerationResult",
    "SearchOptions",
    "find_cage",
    "generate_all",
    "RepeatableBlock",
    "is_repeatable",
    "double_repeatable",
    "splice_out_repeatable",
    "ChainResult",
    "RatioBound",
    "build_3_4_extremal",
    "build_3_5_extremal",
    "build_k_3_3",
    "chain_construction",
    "ratio_bounds",
    "OracleReport",
    "CrossValidationReport",
    "brute_force_regular",
    "cross_validate",
]
