import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import enumerate_path_length, random_schema_facts, seeded
from schemareach.distances import (
    UNREACHABLE,
    compute_all_distances,
    distances_to_target,
    naive_min_distance,
)
from schemareach.facts import SchemaFacts
from schemareach.schema import build_schema, lifted_neighbors

WORKED = SchemaFacts(["s", "a", "b", "t", "x"], [], [("s", "a"), ("s", "b"), ("a", "t"), ("b", "x"), ("x", "t")])


def test_chain_of_three():
    schema = build_schema(SchemaFacts(["a", "b", "c"], [], [("a", "b"), ("b", "c")]))
    table = compute_all_distances(schema)
    # frozen from enumerate_path_length
    assert enumerate_path_length(schema, "a", "c") == 2
    assert enumerate_path_length(schema, "c", "a") == math.inf
    assert table["a", "c"] == 2
    assert table["c", "a"] == UNREACHABLE
    assert table["a", "b"] == 1


def test_identity_is_zero():
    schema = build_schema(random_schema_facts(seeded(1), 7, 6))
    table = compute_all_distances(schema)
    assert all(table[e, e] == 0 for e in schema.names)


def test_worked_example():
    table = compute_all_distances(build_schema(WORKED))
    assert table["a", "t"] == 1
    assert table["b", "t"] == 2
    assert distances_to_target(table, "t") == {"s": 2, "a": 1, "b": 2, "t": 0, "x": 1}


def test_target_without_inbound_arcs():
    schema = build_schema(SchemaFacts(["p", "q"], [], [("p", "q")]))
    assert distances_to_target(compute_all_distances(schema), "p") == {"p": 0}


def test_unknown_target():
    table = compute_all_distances(build_schema(WORKED))
    with pytest.raises(KeyError):
        distances_to_target(table, "nope")


def test_naive_basics():
    schema = build_schema(SchemaFacts(["a", "b"]))
    assert naive_min_distance(schema, "a", "a") == 0
    assert naive_min_distance(schema, "a", "b") == UNREACHABLE
    assert naive_min_distance(build_schema(WORKED), "s", "t") == 2


def test_csv_format():
    table = compute_all_distances(build_schema(SchemaFacts(["a", "b"], [], [("a", "b")])))
    lines = table.to_csv().splitlines()
    assert lines[0] == "from,to,distance"
    assert "a,b,1" in lines and "b,a,inf" in lines and "thing,thing,0" in lines


def test_unreachable_arithmetic():
    assert UNREACHABLE + 3 == UNREACHABLE
    assert UNREACHABLE > 10 ** 9


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 7), st.integers(0, 14))
def test_matches_recursive_and_enumeration(seed, n, n_arcs):
    schema = build_schema(random_schema_facts(seeded(seed), n, n_arcs))
    table = compute_all_distances(schema)
    for a in schema.names:
        for b in schema.names:
            assert table[a, b] == naive_min_distance(schema, a, b)
    if n <= 5:
        for a in schema.names:
            for b in schema.names:
                assert table[a, b] == enumerate_path_length(schema, a, b)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10), st.integers(0, 20))
def test_table_invariants(seed, n, n_arcs):
    schema = build_schema(random_schema_facts(seeded(seed), n, n_arcs))
    table = compute_all_distances(schema)
    names = schema.names
    for a in names:
        for b in lifted_neighbors(schema, a):
            assert table[a, b] <= 1
        for b in names:
            for c in names:
                assert table[a, c] <= table[a, b] + table[b, c]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 8), st.integers(0, 14))
def test_finite_distance_has_witness_path(seed, n, n_arcs):
    schema = build_schema(random_schema_facts(seeded(seed), n, n_arcs))
    table = compute_all_distances(schema)
    for a in schema.names:
        for b in schema.names:
            k = table[a, b]
            if k == UNREACHABLE:
                continue
            # walk greedily along neighbors whose distance drops by one
            cur, hops = a, 0
            while cur != b:
                cur = next(y for y in sorted(lifted_neighbors(schema, cur)) if table[y, b] == table[cur, b] - 1)
                hops += 1
            assert hops == k


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 8), st.integers(0, 12))
def test_adding_an_arc_never_increases_distance(seed, n, n_arcs):
    rng = seeded(seed)
    facts = random_schema_facts(rng, n, n_arcs)
    before = compute_all_distances(build_schema(facts))
    extra = (rng.choice(facts.entities), rng.choice(facts.entities))
    grown = SchemaFacts(facts.entities, facts.subclass_pairs, list({*facts.arcs, extra}), [])
    after = compute_all_distances(build_schema(grown))
    for a, b, d in before.items():
        assert after[a, b] <= d


def test_recomputation_identical():
    schema = build_schema(random_schema_facts(seeded(9), 12, 20))
    assert compute_all_distances(schema) == compute_all_distances(schema)
    assert compute_all_distances(schema).to_csv() == compute_all_distances(schema).to_csv()
