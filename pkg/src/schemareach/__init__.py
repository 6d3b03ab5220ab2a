"""Schema-guided graph reachability.

Schema distances between entities are precomputed once and used to prune
and reorder instance adjacency lists before a depth-first reachability
search.
"""

__version__ = "0.1.0"

from .compliance import ComplianceReport, Violation, check_compliance
from .distances import (
    UNREACHABLE,
    DistanceTable,
    compute_all_distances,
    distances_to_target,
    naive_min_distance,
)
from .estimator import GuidedReachability, NonCompliantError
from .facts import (
    FactError,
    FactSyntaxError,
    InstanceFacts,
    SchemaFacts,
    parse_instance_facts,
    parse_schema_facts,
    serialize_instance_facts,
    serialize_schema_facts,
)
from .graph import GraphError, InstanceGraph, build_graph, neighbors
from .schema import PropertySpec, Schema, SchemaError, build_schema, lifted_neighbors, super_of
from .search import GuidedAdjacency, SearchOutcome, baseline_reach, build_guidance, improved_reach

__all__ = [
    "UNREACHABLE",
    "ComplianceReport",
    "DistanceTable",
    "FactError",
    "FactSyntaxError",
    "GraphError",
    "GuidedAdjacency",
    "GuidedReachability",
    "InstanceFacts",
    "InstanceGraph",
    "NonCompliantError",
    "PropertySpec",
    "Schema",
    "SchemaError",
    "SchemaFacts",
    "SearchOutcome",
    "Violation",
    "baseline_reach",
    "build_graph",
    "build_guidance",
    "build_schema",
    "check_compliance",
    "compute_all_distances",
    "distances_to_target",
    "improved_reach",
    "lifted_neighbors",
    "naive_min_distance",
    "neighbors",
    "parse_instance_facts",
    "parse_schema_facts",
    "serialize_instance_facts",
    "serialize_schema_facts",
    "super_of",
]
