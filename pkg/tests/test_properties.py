"""Property-based checks: round-trips, conversion laws, monotonicity."""

import hypothesis.strategies as st
from hypothesis import HealthCheck, given, settings

from ropa_dpv import (
    FieldValue,
    Jurisdiction,
    Multiplicity,
    ValueKind,
    convert,
    default_config,
    load_registry,
    new_record,
    parse_canonical,
    set_field,
    validate_against_profile,
    validate_article30,
    write_canonical,
)
from conftest import CREATED

REGISTRY = load_registry()
ALL_IDS = [c.id for c in REGISTRY.concepts]
CONFIGS = {j: default_config(REGISTRY, j) for j in Jurisdiction}

_name_text = st.text(
    alphabet=st.one_of(
        st.characters(min_codepoint=32, max_codepoint=0x024F),
        st.sampled_from('\n\t";,\\'),
    ),
    min_size=1,
    max_size=20,
)
_slug = st.from_regex(r"[a-z][a-z0-9-]{0,11}", fullmatch=True)
_record_id = st.from_regex(r"[A-Za-z0-9._~-]{1,12}", fullmatch=True)
_duration = st.from_regex(r"P[1-9]\d?(Y|M|W|D)", fullmatch=True)
_country = st.from_regex(r"[A-Z]{2}", fullmatch=True)
_uri = _slug.map(lambda s: f"https://example.com/{s}")
_date = st.dates().map(lambda d: d.isoformat())


def _value_strategy(concept_id):
    schema = REGISTRY.concept(concept_id).value_schema
    kind = schema.kind
    if kind is ValueKind.BOOLEAN:
        scalar = st.booleans()
    elif kind in (ValueKind.TERM, ValueKind.TERM_LIST):
        known = REGISTRY.known_terms(schema.vocabulary)
        scalar = st.sampled_from(sorted(known)) if known else _slug
    elif kind is ValueKind.DURATION:
        scalar = _duration
    elif kind is ValueKind.COUNTRY_LIST:
        scalar = _country
    elif kind is ValueKind.URI:
        scalar = _uri
    elif kind is ValueKind.DATE:
        scalar = _date
    else:
        scalar = _name_text
    max_values = 1 if schema.multiplicity is Multiplicity.ONE else 3
    return st.lists(scalar, min_size=1, max_size=max_values, unique=True).map(
        lambda items: [FieldValue(kind, v) for v in items]
    )


@st.composite
def ropa_records(draw):
    record = new_record(draw(_record_id), draw(_name_text), CREATED)
    chosen = draw(st.lists(st.sampled_from(ALL_IDS), unique=True, max_size=12))
    for cid in chosen:
        record = set_field(record, REGISTRY, cid, draw(_value_strategy(cid)))
    return record


_pair = st.tuples(st.sampled_from(list(Jurisdiction)), st.sampled_from(list(Jurisdiction)))

_settings = settings(
    max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)


@_settings
@given(
    records=st.lists(ropa_records(), max_size=4, unique_by=lambda r: r.record_id)
)
def test_canonical_round_trip(records):
    text = write_canonical(records, REGISTRY)
    parsed, warnings = parse_canonical(text, REGISTRY)
    assert warnings == []
    assert parsed == records
    assert write_canonical(parsed, REGISTRY) == text


@_settings
@given(record=ropa_records(), pair=_pair)
def test_convert_never_invents_and_partitions(record, pair):
    a, b = pair
    converted, loss = convert(record, CONFIGS[a], CONFIGS[b], REGISTRY)
    assert converted.populated() <= record.populated()
    lost_ids = {cid for cid, _ in loss.lost}
    assert lost_ids | converted.populated() == record.populated()
    assert lost_ids & converted.populated() == set()
    assert loss.retained_count == len(converted.fields)


@_settings
@given(record=ropa_records(), pair=_pair)
def test_convert_idempotent_for_fixed_target(record, pair):
    a, b = pair
    once, _ = convert(record, CONFIGS[a], CONFIGS[b], REGISTRY)
    twice, loss = convert(once, CONFIGS[b], CONFIGS[b], REGISTRY)
    assert twice == once
    assert loss.lost == ()


@_settings
@given(record=ropa_records())
def test_profile_checks_add_only_warnings(record):
    base_errors = validate_article30(record, REGISTRY).error_count
    for j in Jurisdiction:
        report = validate_against_profile(record, REGISTRY.profiles[j], REGISTRY)
        assert report.error_count == base_errors


@_settings
@given(record=ropa_records(), data=st.data())
def test_validators_monotone_under_field_addition(record, data):
    absent = sorted(set(ALL_IDS) - record.populated())
    if not absent:
        return
    cid = data.draw(st.sampled_from(absent))
    values = data.draw(_value_strategy(cid))
    grown = set_field(record, REGISTRY, cid, values)
    assert len(validate_article30(grown, REGISTRY).findings) <= len(
        validate_article30(record, REGISTRY).findings
    )
    for j in Jurisdiction:
        profile = REGISTRY.profiles[j]
        assert len(validate_against_profile(grown, profile, REGISTRY).findings) <= len(
            validate_against_profile(record, profile, REGISTRY).findings
        )


@_settings
@given(record=ropa_records(), data=st.data())
def test_gap_matrix_ready_monotone(record, data):
    from ropa_dpv import gap_matrix

    absent = sorted(set(ALL_IDS) - record.populated())
    if not absent:
        return
    cid = data.draw(st.sampled_from(absent))
    grown = set_field(record, REGISTRY, cid, data.draw(_value_strategy(cid)))
    before = gap_matrix(record, REGISTRY)
    after = gap_matrix(grown, REGISTRY)
    for j in Jurisdiction:
        if before[j].ready:
            assert after[j].ready