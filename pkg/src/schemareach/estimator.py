"""scikit-learn style front end for schema-guided reachability."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .compliance import check_compliance
from .distances import compute_all_distances, distances_to_target
from .graph import GraphError, InstanceGraph
from .schema import Schema
from .search import baseline_reach, build_guidance, improved_reach

__all__ = ["NonCompliantError", "GuidedReachability", "check_queries"]

MODES = ("improved", "baseline")


class NonCompliantError(ValueError):
    """Guided search was requested on a graph that fails schema compliance."""

    def __init__(self, report):
        self.report = report
        tags = ", ".join(sorted(report.conditions()))
        super().__init__(
            f"graph is not schema compliant ({len(report.violations)} violations: {tags}); "
            "pruning would be unsound, pass force=True to search anyway"
        )


def check_queries(X, graph):
    """Validate ``(source, target)`` pairs against ``graph``.

    Returns an int64 array of shape ``(n_queries, 2)``.
    """
    X = check_array(X, dtype=np.int64, ensure_2d=True, ensure_min_samples=0)
    if X.shape[1] != 2:
        raise ValueError(f"queries must have shape (n_queries, 2), got {X.shape}")
    unknown = [int(v) for v in np.unique(X) if int(v) not in graph.nodes]
    if unknown:
        raise GraphError(f"unknown node ids in queries: {unknown[:10]}")
    return X


class GuidedReachability(BaseEstimator):
    """Reachability over an instance graph, guided by its schema.

    Fitting checks compliance and precomputes all schema distances; those
    are reused by every query until the estimator is refitted. Guided
    adjacency is built lazily, once per target label.

    Parameters
    ----------
    mode : {"improved", "baseline"}, default="improved"
        ``"improved"`` prunes and sorts adjacency by schema distance to the
        target label; ``"baseline"`` walks the raw adjacency order.
    force : bool, default=False
        Allow guided search on a non-compliant graph. Answers may then be
        wrong (false negatives).

    Attributes
    ----------
    compliance_ : ComplianceReport
    distances_ : DistanceTable
    graph_ : InstanceGraph
    schema_ : Schema
    """

    def __init__(self, mode="improved", force=False):
        self.mode = mode
        self.force = force

    def fit(self, graph, schema):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(graph, InstanceGraph) or not isinstance(schema, Schema):
            raise TypeError("fit expects (InstanceGraph, Schema)")
        self.compliance_ = check_compliance(graph, schema)
        if self.mode == "improved" and not self.compliance_.compliant and not self.force:
            raise NonCompliantError(self.compliance_)
        self.graph_ = graph
        self.schema_ = schema
        self.distances_ = compute_all_distances(schema)
        self._guidance = {}
        return self

    def guidance(self, target_label):
        check_is_fitted(self, "distances_")
        g = self._guidance.get(target_label)
        if g is None:
            if target_label not in self.schema_:
                dmap = {target_label: 0}
            else:
                dmap = distances_to_target(self.distances_, target_label)
            g = self._guidance[target_label] = build_guidance(self.graph_, dmap, target_label)
        return g

    def search(self, source, target):
        """Run one query and return its :class:`SearchOutcome`."""
        check_is_fitted(self, "distances_")
        if self.mode == "baseline":
            return baseline_reach(self.graph_, source, target)
        if target not in self.graph_.nodes:
            raise GraphError(f"unknown node {target}")
        g = self.guidance(self.graph_.labels[target])
        return improved_reach(self.graph_, g, source, target)

    def predict(self, X):
        """Reachability answers for ``(source, target)`` rows of ``X``."""
        check_is_fitted(self, "distances_")
        X = check_queries(X, self.graph_)
        return np.array([self.search(int(s), int(t)).reached for s, t in X], dtype=bool)
