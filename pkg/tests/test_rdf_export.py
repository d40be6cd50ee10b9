"""Graph construction and deterministic Turtle/JSON-LD serialization."""

from pathlib import Path

import pytest

from ropa_dpv import (
    DEFAULT_ROPAEX_NS,
    DPV_NS,
    Node,
    NodeKind,
    Triple,
    TripleGraph,
    empty_graph,
    field_values,
    new_record,
    records_to_graph,
    serialize_jsonld,
    serialize_turtle,
    set_field,
    to_graph,
)
from conftest import CREATED
from rdf_oracle import canonical_triples, parse_jsonld, parse_turtle

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture()
def golden_record(registry):
    record = new_record("pa-golden", "Acme GmbH", CREATED)

    def put(cid, *vals):
        nonlocal record
        record = set_field(record, registry, cid, field_values(registry, cid, *vals))

    put("purposes-of-processing", "marketing", "analytics")
    put("legal-basis-for-processing", "consent")
    put("retention-deletion-periods", "P5Y")
    put("data-combination", True)
    put("third-countries-that-personal-data-are-transferred-to", "US")
    put("privacy-notice", "https://example.com/privacy")
    put("special-category-personal-data", "health-data")
    put(
        "technical-and-organizational-measures-of-security",
        "encryption at rest", 'key "rotation"',
    )
    return record


def _predicates(graph):
    return {t.predicate.value for t in graph.triples}


def test_purpose_uses_dpv_has_purpose(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = set_field(
        record, registry, "purposes-of-processing",
        field_values(registry, "purposes-of-processing", "marketing"),
    )
    graph = to_graph(record, registry)
    assert DPV_NS + "hasPurpose" in _predicates(graph)
    objects = {
        t.object.value for t in graph.triples
        if t.predicate.value == DPV_NS + "hasPurpose"
    }
    assert objects == {"https://example.org/ropa/term/purpose/marketing"}
    outcomes = {
        t.object.value for t in graph.triples
        if t.predicate.value == DEFAULT_ROPAEX_NS + "mappingOutcome"
    }
    assert outcomes == {"EXACT"}


def test_unmapped_concept_uses_extension_namespace(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = set_field(
        record, registry, "privacy-notice",
        field_values(registry, "privacy-notice", "https://example.com/privacy"),
    )
    graph = to_graph(record, registry)
    assert DEFAULT_ROPAEX_NS + "privacyNotice" in _predicates(graph)
    outcome_triples = [
        t for t in graph.triples
        if t.predicate.value == DEFAULT_ROPAEX_NS + "mappingOutcome"
    ]
    assert [t.object.value for t in outcome_triples] == ["NONE"]
    assert outcome_triples[0].subject.kind is NodeKind.BLANK
    # data triples for a NONE concept never use the dpv: namespace
    assert not any(p.startswith(DPV_NS) for p in _predicates(graph))


def test_empty_record_graph(registry, empty_record):
    graph = to_graph(empty_record, registry)
    assert len(graph) == 3  # type + controller name + created


def test_triple_count_is_a_function_of_the_record(registry, golden_record):
    graph = to_graph(golden_record, registry)
    data = sum(len(vs) for vs in golden_record.fields.values())
    concepts = len(golden_record.fields)
    extra_terms = sum(
        max(0, len(registry.concept(cid).dpv_terms) - 1) for cid in golden_record.fields
    )
    # per record: 3 root triples; per concept: usage link + concept + outcome
    assert len(graph) == 3 + data + concepts * 3 + extra_terms


def test_multi_term_row_gets_also_maps_to(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = set_field(
        record, registry, "retention-deletion-periods",
        field_values(registry, "retention-deletion-periods", "P5Y"),
    )
    graph = to_graph(record, registry)
    assert DPV_NS + "hasStorageDuration" in _predicates(graph)
    also = [
        t.object.value for t in graph.triples
        if t.predicate.value == DEFAULT_ROPAEX_NS + "alsoMapsTo"
    ]
    assert also == [DPV_NS + "StorageDeletion"]


def test_processing_verbs_are_objects(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = set_field(
        record, registry, "data-combination",
        field_values(registry, "data-combination", True),
    )
    graph = to_graph(record, registry)
    uses = [
        t.object.value for t in graph.triples
        if t.predicate.value == DEFAULT_ROPAEX_NS + "usesProcessing"
    ]
    assert uses == [DPV_NS + "Combine"]


def test_namespace_overrides(registry, empty_record):
    graph = to_graph(
        empty_record, registry,
        base="https://registry.example/x/", ropaex="https://vocab.example/ext#",
    )
    subjects = {t.subject.value for t in graph.triples if t.subject.kind is NodeKind.IRI}
    assert subjects == {"https://registry.example/x/record/pa-empty"}
    assert ("ropaex", "https://vocab.example/ext#") in graph.namespaces


def test_serialize_empty_graph_is_prefix_block_only():
    text = serialize_turtle(empty_graph())
    assert text == (
        "@prefix dpv: <https://w3id.org/dpv#> .\n"
        "@prefix ropaex: <https://example.org/ropaex#> .\n"
        "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
    )
    document = serialize_jsonld(empty_graph())
    assert '"@graph": []' in document


def test_golden_turtle(registry, golden_record):
    graph = to_graph(golden_record, registry)
    expected = (GOLDEN / "record.ttl").read_text(encoding="utf-8")
    assert serialize_turtle(graph) == expected


def test_golden_jsonld(registry, golden_record):
    graph = to_graph(golden_record, registry)
    expected = (GOLDEN / "record.jsonld").read_text(encoding="utf-8")
    assert serialize_jsonld(graph) == expected


def test_serialization_deterministic_across_runs(registry, full_record):
    g1 = to_graph(full_record, registry)
    g2 = to_graph(full_record, registry)
    assert g1 == g2
    assert serialize_turtle(g1) == serialize_turtle(g2)
    assert serialize_jsonld(g1) == serialize_jsonld(g2)


def test_turtle_reparses_to_same_graph(registry, golden_record, full_record):
    for record in (golden_record, full_record):
        graph = to_graph(record, registry)
        assert parse_turtle(serialize_turtle(graph)) == canonical_triples(graph)


def test_jsonld_reparses_to_same_graph(registry, golden_record, full_record):
    for record in (golden_record, full_record):
        graph = to_graph(record, registry)
        assert parse_jsonld(serialize_jsonld(graph)) == canonical_triples(graph)


def test_turtle_and_jsonld_encode_equal_graphs(registry, golden_record):
    graph = to_graph(golden_record, registry)
    assert parse_turtle(serialize_turtle(graph)) == parse_jsonld(serialize_jsonld(graph))


def test_equal_outputs_iff_equal_graphs(registry, golden_record, full_record):
    g1 = to_graph(golden_record, registry)
    g2 = to_graph(full_record, registry)
    assert g1 != g2
    assert serialize_turtle(g1) != serialize_turtle(g2)
    assert serialize_jsonld(g1) != serialize_jsonld(g2)


def test_multi_record_graph_has_distinct_blank_labels(registry, golden_record, full_record):
    merged = records_to_graph([golden_record, full_record], registry)
    labels = [
        t.object.value for t in merged.triples
        if t.object.kind is NodeKind.BLANK
    ]
    assert len(labels) == len(set(labels))
    assert len(labels) == len(golden_record.fields) + len(full_record.fields)


def test_node_and_triple_validation():
    with pytest.raises(ValueError):
        Node.iri("not an iri")
    with pytest.raises(ValueError):
        Node.blank("bad label!")
    with pytest.raises(ValueError):
        Node.literal("x", datatype="http://a#b", language="en")
    lit = Node.literal("x")
    iri = Node.iri("https://example.com/p")
    with pytest.raises(ValueError):
        Triple(lit, iri, lit)
    with pytest.raises(ValueError):
        Triple(iri, lit, lit)


def test_graph_is_duplicate_free(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = set_field(
        record, registry, "purposes-of-processing",
        field_values(registry, "purposes-of-processing", "marketing"),
    )
    graph = to_graph(record, registry)
    assert isinstance(graph, TripleGraph)
    assert len(set(graph.triples)) == len(graph.triples)


def test_literal_escaping_survives_reparse(registry):
    record = new_record("pa-esc", 'Name "with" \\ and\nnewline\tand\rcr', CREATED)
    graph = to_graph(record, registry)
    assert parse_turtle(serialize_turtle(graph)) == canonical_triples(graph)
    assert parse_jsonld(serialize_jsonld(graph)) == canonical_triples(graph)