"""Immutable single-label instance graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

from .facts import InstanceFacts

__all__ = ["GraphError", "NodeRecord", "InstanceGraph", "build_graph", "neighbors"]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class NodeRecord:
    id: int
    label: str
    properties: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))


class InstanceGraph:
    """Directed graph of labelled nodes.

    ``adjacency[n]`` keeps the neighbor order of the source file; that order
    is what the baseline search walks. Self-loops and repeated neighbors are
    kept as written.
    """

    def __init__(self, nodes, adjacency):
        self.nodes = MappingProxyType(dict(nodes))
        self.adjacency = MappingProxyType({n: tuple(adjacency.get(n, ())) for n in self.nodes})
        self.labels = MappingProxyType({n: rec.label for n, rec in self.nodes.items()})

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, n):
        return n in self.nodes

    def __repr__(self):
        return f"InstanceGraph(nodes={len(self.nodes)}, edges={self.n_edges})"

    @property
    def n_edges(self):
        return sum(len(v) for v in self.adjacency.values())

    def label(self, n):
        try:
            return self.labels[n]
        except KeyError:
            raise GraphError(f"unknown node {n}") from None

    def to_facts(self):
        nodes = [(n, rec.label) for n, rec in self.nodes.items()]
        arcs = [(n, list(nbrs)) for n, nbrs in self.adjacency.items() if nbrs]
        props = [(n, k, v) for n, rec in self.nodes.items() for k, v in rec.properties.items()]
        return InstanceFacts(nodes, arcs, props)


def build_graph(facts: InstanceFacts) -> InstanceGraph:
    props = {}
    for nid, name, value in facts.node_properties:
        bucket = props.setdefault(nid, {})
        if name in bucket:
            raise GraphError(f"node {nid} has property {name!r} twice")
        bucket[name] = value

    nodes = {}
    for nid, label in facts.nodes:
        if nid in nodes:
            raise GraphError(f"duplicate node {nid}")
        nodes[nid] = NodeRecord(nid, label, MappingProxyType(props.pop(nid, {})))
    if props:
        raise GraphError(f"property values for undeclared node {min(props)}")

    adjacency = {}
    for nid, nbrs in facts.arcs:
        if nid not in nodes:
            raise GraphError(f"adjacency for undeclared node {nid}")
        if nid in adjacency:
            raise GraphError(f"duplicate adjacency for node {nid}")
        for m in nbrs:
            if m not in nodes:
                raise GraphError(f"dangling neighbor {m} of node {nid}")
        adjacency[nid] = nbrs
    return InstanceGraph(nodes, adjacency)


def neighbors(graph, n):
    try:
        return list(graph.adjacency[n])
    except KeyError:
        raise GraphError(f"unknown node {n}") from None
