import random
from collections import deque

import pytest

from conftest import make_record
from pkglearn.exceptions import NTriplesParseError, SerializationError, ValidationError
from pkglearn.stargraph import (
    V1_RELATIONS,
    Triple,
    TripleGraph,
    build_pkg,
    parse_ntriples,
    query,
    serialize_ntriples,
)


def minimal_record():
    return make_record(diagnoses=[("410", "acute myocardial infarction")], age_years=67)


def full_record():
    return make_record(
        diagnoses=[("410", "acute myocardial infarction")],
        procedures=[("0036", "operations on vessels of heart")],
        medications=["warfarin"],
        gender="female",
        marital_status="married",
        religion="catholic",
        ethnicity="white",
        employment="retired",
        housing="stable housing",
        household="lives alone",
        age_years=71,
    )


def star_distances(graph):
    """BFS oracle: hop distance from the patient node, ignoring direction."""
    adjacency = {}
    for t in graph.triples:
        if t.obj_is_literal:
            continue
        adjacency.setdefault(t.subject, set()).add(t.obj)
        adjacency.setdefault(t.obj, set()).add(t.subject)
    dist = {graph.patient_node: 0}
    frontier = deque([graph.patient_node])
    while frontier:
        node = frontier.popleft()
        for nxt in adjacency.get(node, ()):
            if nxt not in dist:
                dist[nxt] = dist[node] + 1
                frontier.append(nxt)
    return dist


def test_minimal_graph_triples():
    graph = build_pkg(minimal_record())
    patient = graph.patient_node
    expected = {
        Triple(patient, "hasDisease", "disease/acute myocardial infarction"),
        Triple(patient, "hasAge", "age/60-69"),
        Triple("age/60-69", "age_in_years", "67", obj_is_literal=True),
    }
    assert set(graph.triples) == expected
    assert graph.node_meta["disease/acute myocardial infarction"] == (
        "disease", "acute myocardial infarction")
    assert graph.label is False


def test_full_record_covers_all_v1_relations():
    graph = build_pkg(full_record())
    used = {t.predicate for t in graph.triples if not t.obj_is_literal}
    assert used == set(V1_RELATIONS)


def test_unlabeled_record_rejected():
    record = minimal_record()
    record.readmitted_within_window = None
    with pytest.raises(ValidationError):
        build_pkg(record)


def test_star_property_on_synthetic_graphs(labeled_cohort):
    for record in labeled_cohort[:100]:
        graph = build_pkg(record)
        dist = star_distances(graph)
        nodes = set(graph.node_meta)
        assert set(dist) == nodes
        assert all(d <= 1 for d in dist.values())


def test_serialize_minimal_graph_lines():
    graph = build_pkg(minimal_record())
    text = serialize_ntriples(graph)
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines == sorted(lines)
    assert sum(1 for l in lines if '"67"' in l) == 1


def test_serialized_line_count_equals_triple_count(labeled_cohort):
    graph = build_pkg(build_pkg_input(labeled_cohort))
    assert len(serialize_ntriples(graph).splitlines()) == len(graph.triples)


def build_pkg_input(cohort):
    return max(cohort, key=lambda r: len(r.diagnoses) + len(r.medications))


def test_round_trip_is_byte_identical():
    graph = build_pkg(full_record())
    once = serialize_ntriples(graph)
    again = serialize_ntriples(parse_ntriples(once))
    assert once == again


def test_canonical_form_independent_of_triple_order():
    graph = build_pkg(full_record())
    shuffled = TripleGraph(graph.patient_node,
                           random.Random(3).sample(graph.triples, len(graph.triples)),
                           graph.node_meta)
    assert serialize_ntriples(graph) == serialize_ntriples(shuffled)


def test_parse_recovers_triples_and_meta():
    graph = build_pkg(full_record())
    parsed = parse_ntriples(serialize_ntriples(graph))
    assert set(parsed.triples) == set(graph.triples)
    assert parsed.node_meta == graph.node_meta
    assert parsed.patient_node == graph.patient_node
    assert parsed.label is None


def test_parse_empty_input_is_error():
    with pytest.raises(NTriplesParseError):
        parse_ntriples("")


def test_parse_reports_line_number():
    graph = build_pkg(minimal_record())
    text = serialize_ntriples(graph) + "this is not a triple\n"
    with pytest.raises(NTriplesParseError) as err:
        parse_ntriples(text)
    assert err.value.line_number == 4
    assert "line 4" in str(err.value)


def test_control_character_in_description_rejected():
    record = minimal_record()
    record.diagnoses = [("410", "bad\ndescription")]
    with pytest.raises(SerializationError):
        serialize_ntriples(build_pkg(record))


def test_fuzz_round_trip_on_random_graphs(labeled_cohort):
    for record in labeled_cohort[:100]:
        graph = build_pkg(record)
        text = serialize_ntriples(graph)
        parsed = parse_ntriples(text)
        assert set(parsed.triples) == set(graph.triples)
        assert serialize_ntriples(parsed) == text


def test_query_single_binding():
    graph = build_pkg(minimal_record())
    hits = query(graph, (graph.patient_node, "hasDisease", None))
    assert [t.obj for t in hits] == ["disease/acute myocardial infarction"]


def test_query_all_wildcards_returns_everything():
    graph = build_pkg(full_record())
    assert set(query(graph, (None, None, None))) == set(graph.triples)


def test_query_intervention_count_matches_linear_scan(labeled_cohort):
    for record in labeled_cohort[:40]:
        graph = build_pkg(record)
        hits = query(graph, (None, "hasIntervention", None))
        assert len(hits) == len(record.medications) + len(record.procedures)
