"""Color energy method for generalized Ramsey lower bounds.

Verify (p, q)-colorings, build and prune color energy graphs, run the
revealing ledger, and extract concrete low-color cliques.
"""

from __future__ import annotations

from .coloring import (
    ColoredCompleteGraph,
    PQParams,
    PQVerdict,
    RepetitionCount,
    dumps_coloring,
    is_pq_coloring,
    is_proper,
    load_coloring,
    loads_coloring,
    max_color_degree,
    properize,
    repetitions_of_subset,
    save_coloring,
)
from .energy import EnergyGraph, HolderBound, build_energy_graph, color_energy, holder_lower_bound
from .errors import ColorEnergyError, LemmaRefuted, NotFound
from .exact import ExactResult, ExponentEntry, exact_f, exponent_entry, exponent_table
from .gen import Embedding, PatternGraph, find_subgraph, generate_coloring, make_pattern, parse_pattern
from .planted import PlantedInstance, planted_coloring
from .prune import Partition, PrunedEnergyGraph, build_pruned, random_partition, verify_pruned
from .reveal import (
    Reservoir,
    RevealInstance,
    RevealLedger,
    Subgraph,
    apply_reservoir,
    construct_witness,
    eventual_savings_sites,
    h_compatible_order,
    reveal_ledger,
    total_savings,
)
from .witness import (
    PipelineParams,
    WitnessReport,
    extract_subKt,
    extract_subKtt,
    extract_theta,
    greedy_low_color_clique,
    incidence_witness,
    validate_witness,
)

__version__ = "0.1.0"

__all__ = [
    "ColorEnergyError",
    "ColoredCompleteGraph",
    "Embedding",
    "EnergyGraph",
    "ExactResult",
    "ExponentEntry",
    "HolderBound",
    "LemmaRefuted",
    "NotFound",
    "PQParams",
    "PQVerdict",
    "Partition",
    "PatternGraph",
    "PipelineParams",
    "PlantedInstance",
    "PrunedEnergyGraph",
    "RepetitionCount",
    "Reservoir",
    "RevealInstance",
    "RevealLedger",
    "Subgraph",
    "WitnessReport",
    "apply_reservoir",
    "build_energy_graph",
    "build_pruned",
    "color_energy",
    "construct_witness",
    "dumps_coloring",
    "eventual_savings_sites",
    "exact_f",
    "exponent_entry",
    "exponent_table",
    "extract_subKt",
    "extract_subKtt",
    "extract_theta",
    "find_subgraph",
    "generate_coloring",
    "greedy_low_color_clique",
    "h_compatible_order",
    "holder_lower_bound",
    "incidence_witness",
    "is_pq_coloring",
    "is_proper",
    "load_coloring",
    "loads_coloring",
    "make_pattern",
    "max_color_degree",
    "parse_pattern",
    "planted_coloring",
    "properize",
    "random_partition",
    "repetitions_of_subset",
    "reveal_ledger",
    "save_coloring",
    "total_savings",
    "validate_witness",
    "verify_pruned",
]
