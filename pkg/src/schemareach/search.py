"""Depth-first reachability, raw and schema-guided, with search counters.

Both searches share one skeleton. Expanding a node first checks whether the
target is among its neighbors; otherwise each unvisited neighbor is entered
in list order. A backtrack is counted every time an entered neighbor's
subtree is exhausted without reaching the target. The visited set is global
to the query and includes the source, so no node is expanded twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Optional

from .graph import GraphError

__all__ = [
    "SearchOutcome",
    "GuidedAdjacency",
    "baseline_reach",
    "build_guidance",
    "improved_reach",
]


@dataclass(frozen=True)
class SearchOutcome:
    reached: bool
    backtracks: int = 0
    expansions: int = 0
    visited_count: int = 0
    path: Optional[tuple] = None

    def to_dict(self):
        return {
            "reached": self.reached,
            "backtracks": self.backtracks,
            "expansions": self.expansions,
            "visited_count": self.visited_count,
            "path": list(self.path) if self.path is not None else None,
        }


@dataclass(frozen=True)
class GuidedAdjacency:
    target_label: str
    adjacency: MappingProxyType


def _dfs(adjacency, source, target):
    if source == target:
        return SearchOutcome(True, 0, 0, 0, (source,))

    visited = {source}
    expansions = 1
    backtracks = 0
    first = adjacency[source]
    if target in first:
        return SearchOutcome(True, 0, 1, 1, (source, target))

    path = [source]
    stack = [iter(first)]
    while stack:
        for v in stack[-1]:
            if v == target or v in visited:
                continue
            visited.add(v)
            expansions += 1
            nbrs = adjacency[v]
            path.append(v)
            if target in nbrs:
                path.append(target)
                return SearchOutcome(True, backtracks, expansions, len(visited), tuple(path))
            stack.append(iter(nbrs))
            break
        else:
            stack.pop()
            path.pop()
            if stack:
                backtracks += 1
    return SearchOutcome(False, backtracks, expansions, len(visited), None)


def _check_nodes(graph, *ids):
    for n in ids:
        if n not in graph.nodes:
            raise GraphError(f"unknown node {n}")


def baseline_reach(graph, source, target) -> SearchOutcome:
    """DFS over the graph's own adjacency order."""
    _check_nodes(graph, source, target)
    return _dfs(graph.adjacency, source, target)


def build_guidance(graph, dmap, target_label, schema=None) -> GuidedAdjacency:
    """Drop neighbors whose label is absent from ``dmap`` and sort the rest.

    ``dmap`` maps labels to finite distances to ``target_label`` (see
    :func:`~schemareach.distances.distances_to_target`). Sorting is stable,
    so equal-distance neighbors keep their original relative order. When
    ``schema`` is given, a node labelled outside it raises ``GraphError``.
    """
    if dmap.get(target_label) != 0:
        raise ValueError(f"distance map is not for target label {target_label!r}")
    labels = graph.labels
    key = {}
    for n, lab in labels.items():
        if schema is not None and lab not in schema:
            raise GraphError(f"node {n} has label {lab!r} unknown to the schema")
        if lab in dmap:
            key[n] = dmap[lab]
    out = {}
    for n, nbrs in graph.adjacency.items():
        kept = [m for m in nbrs if m in key]
        kept.sort(key=key.__getitem__)
        out[n] = tuple(kept)
    return GuidedAdjacency(target_label, MappingProxyType(out))


def improved_reach(graph, guidance, source, target) -> SearchOutcome:
    """DFS over guided adjacency built for ``label(target)``."""
    _check_nodes(graph, source, target)
    if graph.labels[target] != guidance.target_label:
        raise ValueError(
            f"guidance built for {guidance.target_label!r}, target {target} "
            f"is labelled {graph.labels[target]!r}"
        )
    return _dfs(guidance.adjacency, source, target)
