"""Compliance query rules."""

from ropa_dpv import (
    Jurisdiction,
    QueryRule,
    RuleId,
    field_values,
    new_record,
    run_query,
    set_field,
)
from conftest import CREATED

COUNTRIES = "third-countries-that-personal-data-are-transferred-to"
SAFEGUARDS = "appropriate-safeguards-for-third-country-transfers-technology-used"


def _with(registry, record, cid, *vals):
    return set_field(record, registry, cid, field_values(registry, cid, *vals))


def test_transfer_without_safeguards(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = _with(registry, record, COUNTRIES, "US")
    result = run_query(QueryRule(RuleId.TRANSFER_WITHOUT_SAFEGUARDS), [record], registry)
    assert len(result.hits) == 1
    assert result.hits[0][0] == "pa-1"
    assert "US" in result.hits[0][1]


def test_transfer_with_safeguards_has_no_hits(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = _with(registry, record, COUNTRIES, "US")
    record = _with(registry, record, SAFEGUARDS, "standard contractual clauses")
    result = run_query(QueryRule(RuleId.TRANSFER_WITHOUT_SAFEGUARDS), [record], registry)
    assert result.hits == ()


def test_special_category_without_basis(registry):
    record = new_record("pa-1", "Acme", CREATED)
    record = _with(registry, record, "special-category-personal-data", "health-data")
    result = run_query(
        QueryRule(RuleId.SPECIAL_CATEGORY_WITHOUT_BASIS), [record], registry
    )
    assert len(result.hits) == 1
    fixed = _with(registry, record, "legal-basis-for-processing", "consent")
    result = run_query(
        QueryRule(RuleId.SPECIAL_CATEGORY_WITHOUT_BASIS), [fixed], registry
    )
    assert result.hits == ()


def test_missing_mandatory_hits_per_concept(registry, empty_record, mandatory_record):
    result = run_query(
        QueryRule(RuleId.MISSING_MANDATORY), [empty_record, mandatory_record], registry
    )
    assert len(result.hits) == len(registry.mandatory_concepts())
    assert {record_id for record_id, _ in result.hits} == {"pa-empty"}


def test_jurisdiction_readiness(registry, full_record, empty_record):
    result = run_query(
        QueryRule(RuleId.JURISDICTION_READINESS), [full_record, empty_record], registry
    )
    assert {record_id for record_id, _ in result.hits} == {"pa-empty"}
    assert len(result.hits) == 6
    restricted = run_query(
        QueryRule(RuleId.JURISDICTION_READINESS, Jurisdiction.UK),
        [full_record, empty_record],
        registry,
    )
    assert len(restricted.hits) == 1
    assert restricted.hits[0][1].startswith("UK:")


def test_empty_record_set(registry):
    for rule_id in RuleId:
        assert run_query(QueryRule(rule_id), [], registry).hits == ()


def test_hits_are_sorted(registry):
    records = []
    for record_id in ("pa-b", "pa-a", "pa-c"):
        record = new_record(record_id, "Acme", CREATED)
        records.append(_with(registry, record, COUNTRIES, "US"))
    result = run_query(QueryRule(RuleId.TRANSFER_WITHOUT_SAFEGUARDS), records, registry)
    assert [record_id for record_id, _ in result.hits] == ["pa-a", "pa-b", "pa-c"]