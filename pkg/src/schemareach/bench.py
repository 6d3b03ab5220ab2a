"""Seeded synthetic benchmarks comparing raw and guided reachability."""

from __future__ import annotations

import datetime
import random
import statistics
import time
from dataclasses import asdict, dataclass, field

from .distances import compute_all_distances, distances_to_target
from .facts import InstanceFacts, PropertyFact, SchemaFacts
from .graph import build_graph
from .schema import build_schema
from .search import baseline_reach, build_guidance, improved_reach

__all__ = [
    "GeneratorParams",
    "PROFILES",
    "QueryRecord",
    "ExperimentReport",
    "generate_compliant",
    "run_experiment",
    "measure",
    "summarize",
]


@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for :func:`generate_compliant`.

    ``avg_out_degree`` is the target mean; the connected growth skeleton
    (``n_nodes - 1`` edges) and ``min_out_degree`` may push the realized
    edge count above it. ``p_inbound`` is the probability that a node added
    during growth points at its anchor rather than being pointed at.
    """

    n_entities: int = 20
    tree_depth: int = 3
    n_schema_arcs: int = 20
    n_nodes: int = 200
    avg_out_degree: float = 2.0
    mandatory_prop_fraction: float = 0.3
    seed: int = 0
    min_out_degree: int = 1
    p_inbound: float = 0.5

    def __post_init__(self):
        if self.n_entities < 1 or self.tree_depth < 1 or self.n_nodes < 1:
            raise ValueError("n_entities, tree_depth and n_nodes must be positive")
        if not 0 <= self.n_schema_arcs <= self.n_entities ** 2:
            raise ValueError("n_schema_arcs must lie in [0, n_entities**2]")
        if self.avg_out_degree < 0 or self.min_out_degree < 0:
            raise ValueError("out-degree parameters must be non-negative")
        if not 0.0 <= self.mandatory_prop_fraction <= 1.0:
            raise ValueError("mandatory_prop_fraction must lie in [0, 1]")
        if not 0.0 <= self.p_inbound <= 1.0:
            raise ValueError("p_inbound must lie in [0, 1]")


PROFILES = {
    "detailed": GeneratorParams(
        n_entities=140, tree_depth=5, n_schema_arcs=95, n_nodes=5000,
        avg_out_degree=2.0, mandatory_prop_fraction=0.3,
    ),
    "coarse": GeneratorParams(
        n_entities=6, tree_depth=2, n_schema_arcs=13, n_nodes=700,
        avg_out_degree=2.0, mandatory_prop_fraction=0.3,
    ),
}


def _random_value(rng, type_tag):
    if type_tag == "int":
        return rng.randrange(-1000, 1000)
    if type_tag == "date":
        return (datetime.date(1950, 1, 1) + datetime.timedelta(days=rng.randrange(30000))).isoformat()
    return f"s{rng.randrange(10 ** 6)}"


def _random_schema(params, rng):
    names = [f"e{i}" for i in range(params.n_entities)]
    depth = {"thing": 0}
    pairs = []
    for name in names:
        candidates = ["thing"] + [e for e in depth if e != "thing" and depth[e] < params.tree_depth]
        parent = rng.choice(candidates)
        depth[name] = depth[parent] + 1
        if parent != "thing":
            pairs.append((name, parent))

    arc_codes = rng.sample(range(params.n_entities ** 2), params.n_schema_arcs)
    arcs = [(names[c // params.n_entities], names[c % params.n_entities]) for c in arc_codes]

    props = []
    for name in names:
        tag = rng.choice(("int", "string", "date"))
        if rng.random() < params.mandatory_prop_fraction:
            props.append(PropertyFact(name, f"{name}_id", tag, True))
        if rng.random() < 0.5:
            props.append(PropertyFact(name, f"{name}_note", "string", False))
    return build_schema(SchemaFacts(names, pairs, arcs, props), root="thing")


def generate_compliant(params: GeneratorParams):
    """Generate ``(schema, graph, central)`` deterministically from ``params.seed``.

    The instance graph is grown outward from the central node (node 0):
    each new node is attached to a uniformly chosen existing node by one
    licensed edge, pointing at it with probability ``p_inbound``, and gets a
    label drawn uniformly from the labels that license that edge. Every node
    whose label has a lifted successor then receives at least
    ``min_out_degree`` edges, and random licensed edges are added up to
    ``avg_out_degree * n_nodes``. Adjacency lists are shuffled so file order
    carries no hint of the growth. Mandatory properties are always filled.

    Raises
    ------
    ValueError
        If edges are requested but the schema licenses none.
    """
    rng = random.Random(params.seed)
    schema = _random_schema(params, rng)
    entities = range(1, len(schema))
    succ = {h: sorted(schema.lifted(h)) for h in entities}
    pred = {h: [] for h in entities}
    for h in entities:
        for g in succ[h]:
            if g:
                pred[g].append(h)

    n = params.n_nodes
    adjacency = {}
    if params.avg_out_degree == 0:
        labels = [rng.choice(entities) for _ in range(n)]
    else:
        hubs = [h for h in entities if pred[h]]
        if not hubs:
            raise ValueError("infeasible parameters: edges requested but the schema has no arcs")
        labels = [rng.choice(hubs)]
        for i in range(1, n):
            while True:
                anchor = rng.randrange(i)
                if rng.random() < params.p_inbound:
                    options = pred[labels[anchor]]
                    edge = (i, anchor)
                else:
                    options = succ[labels[anchor]]
                    edge = (anchor, i)
                if options:
                    break
            labels.append(rng.choice(options))
            adjacency.setdefault(edge[0], []).append(edge[1])

    by_label = {}
    for node, h in enumerate(labels):
        by_label.setdefault(h, []).append(node)
    pools = {h: [m for g in succ[h] for m in by_label.get(g, ())] for h in by_label}

    if params.avg_out_degree > 0:
        sources = [node for node in range(n) if pools[labels[node]]]
        for node in sources:
            nbrs = adjacency.setdefault(node, [])
            while len(nbrs) < params.min_out_degree:
                nbrs.append(rng.choice(pools[labels[node]]))
        placed = sum(len(v) for v in adjacency.values())
        for _ in range(max(round(params.avg_out_degree * n) - placed, 0)):
            node = rng.choice(sources)
            adjacency[node].append(rng.choice(pools[labels[node]]))
        for nbrs in adjacency.values():
            rng.shuffle(nbrs)

    names = [schema.name(h) for h in labels]
    values = []
    for node, lab in enumerate(names):
        for spec in schema.properties(lab):
            if spec.mandatory or rng.random() < 0.5:
                values.append((node, spec.name, _random_value(rng, spec.type_tag)))

    facts = InstanceFacts(
        nodes=list(enumerate(names)),
        arcs=sorted(adjacency.items()),
        node_properties=values,
    )
    return schema, build_graph(facts), 0


def measure(query):
    """Run ``query()`` and return ``(result, elapsed_ns)`` on the monotonic clock."""
    start = time.perf_counter_ns()
    result = query()
    return result, time.perf_counter_ns() - start


def _timed(query, repeats):
    times = []
    result = None
    for _ in range(repeats):
        result, ns = measure(query)
        times.append(ns)
    return result, int(statistics.median(times))


@dataclass
class QueryRecord:
    source: int
    target: int
    baseline: object
    improved: object
    baseline_ns: int = None
    improved_ns: int = None

    def to_dict(self, timing=True):
        d = {
            "source": self.source,
            "target": self.target,
            "baseline": self.baseline.to_dict(),
            "improved": self.improved.to_dict(),
        }
        if timing:
            d["baseline_ns"] = self.baseline_ns
            d["improved_ns"] = self.improved_ns
        return d


@dataclass
class ExperimentReport:
    """Per-query records plus the aggregate comparison metrics.

    ``pct_saved_backtracks`` is ``100 * (B - I) / B`` over the summed baseline
    (B) and improved (I) backtrack counts. ``pct_saved_time`` charges the
    guidance build to the first query; ``pct_saved_time_amortized`` spreads
    it evenly over all queries. Timing metrics are machine dependent and are
    ``None`` when the experiment ran without timing.
    """

    target: int
    per_query: list = field(default_factory=list)
    guidance_ns: int = None
    pct_improved_backtracks: float = 0.0
    pct_saved_backtracks: float = 0.0
    pct_improved_time: float = None
    pct_saved_time: float = None
    pct_saved_time_amortized: float = None

    def to_dict(self, timing=True):
        metrics = {
            "pct_improved_backtracks": self.pct_improved_backtracks,
            "pct_saved_backtracks": self.pct_saved_backtracks,
        }
        d = {"target": self.target, "n_queries": len(self.per_query)}
        if timing:
            metrics.update(
                pct_improved_time=self.pct_improved_time,
                pct_saved_time=self.pct_saved_time,
                pct_saved_time_amortized=self.pct_saved_time_amortized,
            )
            d["guidance_ns"] = self.guidance_ns
            d["machine_dependent"] = ["pct_improved_time", "pct_saved_time", "pct_saved_time_amortized"]
        d["metrics"] = metrics
        d["per_query"] = [q.to_dict(timing) for q in self.per_query]
        return d


def summarize(records, guidance_ns=None):
    """Aggregate metrics from per-query records.

    Returns a dict with the same metric keys as :class:`ExperimentReport`.
    """
    n = len(records)
    out = {
        "pct_improved_backtracks": 0.0,
        "pct_saved_backtracks": 0.0,
        "pct_improved_time": None,
        "pct_saved_time": None,
        "pct_saved_time_amortized": None,
    }
    if not n:
        return out
    out["pct_improved_backtracks"] = 100.0 * sum(
        r.improved.backtracks < r.baseline.backtracks for r in records) / n
    b = sum(r.baseline.backtracks for r in records)
    i = sum(r.improved.backtracks for r in records)
    out["pct_saved_backtracks"] = 100.0 * (b - i) / b if b else 0.0

    if records[0].baseline_ns is not None:
        g = guidance_ns or 0
        charged = [r.improved_ns + (g if k == 0 else 0) for k, r in enumerate(records)]
        amortized = [r.improved_ns + g / n for r in records]

        def saved(improved):
            return 100.0 * statistics.fmean(
                (r.baseline_ns - t) / max(r.baseline_ns, 1) for r, t in zip(records, improved))

        out["pct_improved_time"] = 100.0 * sum(
            t < r.baseline_ns for r, t in zip(records, charged)) / n
        out["pct_saved_time"] = saved(charged)
        out["pct_saved_time_amortized"] = saved(amortized)
    return out


def run_experiment(schema, graph, target, sources, timing=True, repeats=3, table=None):
    """Run raw and guided searches from each source to ``target``.

    The distance table is precomputed outside any timed region (pass
    ``table`` to reuse one). Guidance is built once, timed separately.
    """
    if table is None:
        table = compute_all_distances(schema)
    label = graph.label(target)
    dmap = distances_to_target(table, label)
    guidance, guidance_ns = measure(lambda: build_guidance(graph, dmap, label, schema))

    records = []
    for s in sources:
        if timing:
            base, base_ns = _timed(lambda: baseline_reach(graph, s, target), repeats)
            imp, imp_ns = _timed(lambda: improved_reach(graph, guidance, s, target), repeats)
        else:
            base = baseline_reach(graph, s, target)
            imp = improved_reach(graph, guidance, s, target)
            base_ns = imp_ns = None
        records.append(QueryRecord(s, target, base, imp, base_ns, imp_ns))

    metrics = summarize(records, guidance_ns if timing else None)
    return ExperimentReport(
        target=target,
        per_query=records,
        guidance_ns=guidance_ns if timing else None,
        **metrics,
    )


def profile_params(profile, seed, n_nodes=None):
    params = PROFILES[profile]
    changes = {"seed": seed}
    if n_nodes is not None:
        changes["n_nodes"] = n_nodes
    return GeneratorParams(**{**asdict(params), **changes})


def select_sources(graph, target, n_queries=None, seed=0):
    """All non-target nodes, or a seeded sample of ``n_queries`` of them in id order."""
    pool = [n for n in graph.nodes if n != target]
    if n_queries is None or n_queries >= len(pool):
        return pool
    return sorted(random.Random(seed).sample(pool, n_queries))
