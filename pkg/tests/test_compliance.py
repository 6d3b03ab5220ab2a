import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _cases
from _oracles import lifted_by_definition, random_compliant_graph, seeded
from schemareach.bench import GeneratorParams, generate_compliant
from schemareach.compliance import check_compliance, value_matches_type
from schemareach.facts import InstanceFacts, SchemaFacts
from schemareach.graph import build_graph
from schemareach.schema import build_schema
from schemareach.search import baseline_reach


def test_base_case_compliant():
    report = check_compliance(_cases.graph(), _cases.schema())
    assert report.compliant and report.violations == []
    assert report.checked_vacuously == ("ii", "iv")


@pytest.mark.parametrize("tag", sorted(_cases.SINGLE_VIOLATION))
def test_single_violation_fixtures(tag):
    text, expected = _cases.SINGLE_VIOLATION[tag]
    report = check_compliance(_cases.graph(text), _cases.schema())
    assert report.conditions() == expected
    if not expected:
        assert tag in report.checked_vacuously


def test_edge_lifted_through_ancestors():
    schema = build_schema(SchemaFacts(["agent", "person", "place"], [("person", "agent")], [("agent", "place")]))
    graph = build_graph(InstanceFacts([(1, "person"), (2, "place")], [(1, [2])], []))
    assert check_compliance(graph, schema).compliant


def test_property_type_mismatch():
    text = _cases.GRAPH + 'node(3, place). val(3, opened, "05/06/2001").'
    report = check_compliance(_cases.graph(text), _cases.schema())
    assert report.conditions() == {"iii"}


def test_all_violations_reported():
    text = _cases.GRAPH.replace('val(1, name, "ann"). ', "") + "node(3, ghost). arcs(2, [1]). val(2, stars, 1)."
    report = check_compliance(_cases.graph(text), _cases.schema())
    assert report.conditions() == {"i", "iii", "v", "mandatory"}
    assert not report.compliant


def test_report_json():
    text, _ = _cases.SINGLE_VIOLATION["v"]
    d = check_compliance(_cases.graph(text), _cases.schema()).to_dict()
    back = json.loads(json.dumps(d))
    assert back["compliant"] is False
    assert back["violations"] == [{"condition": "v", "subject": "edge 2->1", "message": back["violations"][0]["message"]}]


@pytest.mark.parametrize(
    "value, tag, ok",
    [
        (3, "int", True), ("-12", "int", True), ("3.5", "int", False), ("x", "int", False),
        ("2020-02-29", "date", True), ("2021-02-29", "date", False), (20200101, "date", False),
        ("anything", "string", True), (4, "string", True),
    ],
)
def test_value_types(value, tag, ok):
    assert value_matches_type(value, tag) is ok


def test_generator_output_compliant():
    for seed in range(20):
        schema, graph, _ = generate_compliant(GeneratorParams(n_nodes=150, seed=seed))
        assert check_compliance(graph, schema).compliant


def test_removing_licensing_arc_breaks_v():
    facts = SchemaFacts(["a", "b", "c"], [], [("a", "b"), ("b", "c")])
    graph = build_graph(InstanceFacts([(1, "a"), (2, "b"), (3, "c")], [(1, [2]), (2, [3])], []))
    assert check_compliance(graph, build_schema(facts)).compliant
    for dropped in facts.arcs:
        reduced = SchemaFacts(facts.entities, [], [x for x in facts.arcs if x != dropped])
        report = check_compliance(graph, build_schema(reduced))
        assert report.conditions() == {"v"}
        assert len(report.violations) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_metamorphic_arc_removal(seed):
    schema, graph = random_compliant_graph(seeded(seed), max_nodes=15, max_entities=6)
    names = schema.names
    arcs = [(names[d], names[g]) for d, g in sorted(schema.arcs)]
    parents = [(names[h], names[p]) for h, p in enumerate(schema.parent) if p > 0]
    entities = [x for x in names if x != schema.root]
    for dropped in arcs:
        reduced = build_schema(SchemaFacts(entities, parents, [x for x in arcs if x != dropped]))
        still = {x: lifted_by_definition(reduced, x) for x in entities}
        report = check_compliance(graph, reduced)
        expected = {
            (s, o) for s, nbrs in graph.adjacency.items() for o in nbrs
            if graph.labels[o] not in still[graph.labels[s]]
        }
        flagged = {tuple(map(int, v.subject.split()[1].split("->"))) for v in report.violations}
        assert flagged == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_found_paths_replay_in_schema(seed):
    schema, graph = random_compliant_graph(seeded(seed), max_nodes=20)
    assert check_compliance(graph, schema).compliant
    rng = seeded(seed + 1)
    nodes = list(graph.nodes)
    for _ in range(10):
        s, t = rng.choice(nodes), rng.choice(nodes)
        out = baseline_reach(graph, s, t)
        if out.reached and len(out.path) > 1:
            labels = [graph.labels[n] for n in out.path]
            assert all(labels[i + 1] in lifted_by_definition(schema, labels[i]) for i in range(len(labels) - 1))
