"""All-pairs schema distances over the lifted arc relation.

Distances are hop counts (``int``) or :data:`UNREACHABLE` (``math.inf``),
so comparison and addition follow the usual absorbing rules.
"""

from __future__ import annotations

import io
import math
from collections import deque

import numpy as np

__all__ = [
    "UNREACHABLE",
    "DistanceTable",
    "compute_all_distances",
    "naive_min_distance",
    "distances_to_target",
]

UNREACHABLE = math.inf

_INF = np.iinfo(np.int32).max


class DistanceTable:
    """Dense ``from x to`` matrix of schema distances.

    Indexing with entity names returns an ``int`` or :data:`UNREACHABLE`.
    """

    def __init__(self, schema, matrix):
        self.schema = schema
        self._m = matrix
        self._m.setflags(write=False)

    def __getitem__(self, key):
        a, b = key
        v = self._m[self.schema.handle(a), self.schema.handle(b)]
        return UNREACHABLE if v == _INF else int(v)

    def __eq__(self, other):
        if not isinstance(other, DistanceTable):
            return NotImplemented
        return self.schema.names == other.schema.names and np.array_equal(self._m, other._m)

    def to_array(self):
        """Float copy with ``inf`` for unreachable pairs, indexed by handle."""
        out = self._m.astype(float)
        out[self._m == _INF] = np.inf
        return out

    def items(self):
        names = self.schema.names
        for a in range(len(names)):
            for b in range(len(names)):
                v = self._m[a, b]
                yield names[a], names[b], (UNREACHABLE if v == _INF else int(v))

    def to_csv(self):
        buf = io.StringIO()
        buf.write("from,to,distance\n")
        for a, b, d in self.items():
            buf.write(f"{a},{b},{'inf' if d == UNREACHABLE else d}\n")
        return buf.getvalue()


def _bfs(schema, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in schema.lifted(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def compute_all_distances(schema) -> DistanceTable:
    """One breadth-first traversal of the lifted schema graph per source entity."""
    n = len(schema)
    m = np.full((n, n), _INF, dtype=np.int32)
    for a in range(n):
        for b, d in _bfs(schema, a).items():
            m[a, b] = d
    return DistanceTable(schema, m)


def naive_min_distance(schema, src, dst):
    """Exhaustive recursive minimum over simple continuations.

    Exponential; only meant as a cross-check on small schemas. The visited
    list starts empty and grows with each entity stepped into.
    """
    a, b = schema.handle(src), schema.handle(dst)

    def find(x, visited):
        if x == b:
            return 0
        best = UNREACHABLE
        for y in sorted(schema.lifted(x)):
            if y in visited:
                continue
            d = find(y, visited | {y}) + 1
            if d < best:
                best = d
        return best

    return find(a, frozenset())


def distances_to_target(table, target):
    """Finite distances from each entity to ``target``, keyed by entity name."""
    schema = table.schema
    t = schema.handle(target)
    col = table._m[:, t]
    return {schema.names[h]: int(col[h]) for h in range(len(schema)) if col[h] != _INF}
