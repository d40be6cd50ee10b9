"""Typed ROPA records.

A record describes one processing activity as a map from registry concept
identifiers to lists of field values.  Records are immutable values: every
update returns a new record, which keeps validators pure and makes records
safe to share across threads.

List-kind concepts (``TEXT_LIST``, ``TERM_LIST``, ``COUNTRY_LIST``) hold one
item per :class:`FieldValue`; the record's value list carries the collection.
Scalar kinds may still allow several values when the concept's multiplicity
is ``MANY`` (e.g. several processors).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import (
    EmptyControllerName,
    InvalidRecordId,
    MultiplicityViolation,
    SchemaViolation,
    UnknownConcept,
)

if TYPE_CHECKING:
    from .registry import ConceptRegistry


class ValueKind(str, Enum):
    """Lexical kind of a single field value."""

    TEXT = "TEXT"
    TEXT_LIST = "TEXT_LIST"
    TERM = "TERM"
    TERM_LIST = "TERM_LIST"
    DURATION = "DURATION"
    COUNTRY_LIST = "COUNTRY_LIST"
    BOOLEAN = "BOOLEAN"
    URI = "URI"
    DATE = "DATE"


class Multiplicity(str, Enum):
    ONE = "ONE"
    MANY = "MANY"


@dataclass(frozen=True)
class ValueSchema:
    """Value contract for one concept.

    ``vocabulary`` names the controlled vocabulary for ``TERM``/``TERM_LIST``
    kinds.  Vocabularies are free-growing: terms outside the seeded list are
    flagged as warnings, never rejected.
    """

    kind: ValueKind
    multiplicity: Multiplicity
    vocabulary: str | None = None


_RECORD_ID_RE = re.compile(r"[A-Za-z0-9._~-]+\Z")
_COUNTRY_RE = re.compile(r"[A-Z]{2}\Z")
_IRI_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*:[^\s<>\"{}|\\^`]+\Z")
_DURATION_RE = re.compile(
    r"P(?:\d+Y)?(?:\d+M)?(?:\d+W)?(?:\d+D)?(?:T(?:\d+H)?(?:\d+M)?(?:\d+(?:\.\d+)?S)?)?\Z"
)


def is_duration(text: str) -> bool:
    """True for ISO-8601 durations with at least one dated component."""
    if not _DURATION_RE.fullmatch(text):
        return False
    return text != "P" and not text.endswith("T")


def is_absolute_iri(text: str) -> bool:
    return bool(_IRI_RE.fullmatch(text))


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp; a trailing ``Z`` is accepted."""
    return datetime.fromisoformat(text.replace("Z", "+00:00"))


@dataclass(frozen=True)
class FieldValue:
    """One field value: a kind tag plus a scalar payload.

    Construction validates the lexical form, so a FieldValue that exists is
    well-formed for its kind.
    """

    kind: ValueKind
    value: str | bool

    def __post_init__(self) -> None:
        kind, value = self.kind, self.value
        if kind is ValueKind.BOOLEAN:
            if not isinstance(value, bool):
                raise ValueError(f"BOOLEAN value must be a bool, got {value!r}")
            return
        if not isinstance(value, str):
            raise ValueError(f"{kind.value} value must be a string, got {value!r}")
        if kind in (ValueKind.TERM, ValueKind.TERM_LIST) and not value:
            raise ValueError("vocabulary terms must be non-empty")
        if kind is ValueKind.DURATION and not is_duration(value):
            raise ValueError(f"not an ISO-8601 duration: {value!r}")
        if kind is ValueKind.COUNTRY_LIST and not _COUNTRY_RE.fullmatch(value):
            raise ValueError(f"not an ISO-3166-1 alpha-2 code: {value!r}")
        if kind is ValueKind.URI and not is_absolute_iri(value):
            raise ValueError(f"not an absolute IRI: {value!r}")
        if kind is ValueKind.DATE:
            try:
                date.fromisoformat(value)
            except ValueError as exc:
                raise ValueError(f"not an ISO-8601 date: {value!r}") from exc

    @property
    def lexical(self) -> str:
        """Lexical form used by the CSV and RDF serializations."""
        if self.kind is ValueKind.BOOLEAN:
            return "true" if self.value else "false"
        return self.value  # type: ignore[return-value]

    @classmethod
    def from_lexical(cls, kind: ValueKind, lexical: str) -> "FieldValue":
        if kind is ValueKind.BOOLEAN:
            if lexical not in ("true", "false"):
                raise ValueError(f"not a boolean lexical form: {lexical!r}")
            return cls(kind, lexical == "true")
        return cls(kind, lexical)


def field_values(
    registry: "ConceptRegistry", concept_id: str, *raw: str | bool
) -> list[FieldValue]:
    """Build field values of the right kind for a concept from plain data."""
    kind = registry.concept(concept_id).value_schema.kind
    return [FieldValue(kind, v) for v in raw]


@dataclass(frozen=True)
class RopaRecord:
    """One processing activity: metadata plus populated concept fields."""

    record_id: str
    controller_name: str
    created: str
    fields: Mapping[str, tuple[FieldValue, ...]] = field(default_factory=dict)

    def values(self, concept_id: str) -> tuple[FieldValue, ...]:
        return self.fields.get(concept_id, ())

    def has(self, concept_id: str) -> bool:
        return concept_id in self.fields

    def populated(self) -> frozenset[str]:
        return frozenset(self.fields)


def new_record(record_id: str, controller_name: str, created: str) -> RopaRecord:
    """Create an empty record.

    ``created`` must be an ISO-8601 timestamp (raises ValueError otherwise).
    """
    if not isinstance(record_id, str) or not _RECORD_ID_RE.fullmatch(record_id):
        raise InvalidRecordId(record_id)
    if not controller_name:
        raise EmptyControllerName()
    parse_timestamp(created)
    return RopaRecord(record_id, controller_name, created, {})


def set_field(
    record: RopaRecord,
    registry: "ConceptRegistry",
    concept_id: str,
    values: Iterable[FieldValue],
) -> RopaRecord:
    """Return a copy of ``record`` with the concept set to ``values``.

    An empty value list removes the concept.  The caller's record is never
    mutated.
    """
    descriptor = registry.concept(concept_id)
    if descriptor is registry.container:
        # The container row names the register itself, not a record field.
        raise UnknownConcept(concept_id)
    schema = descriptor.value_schema
    values = tuple(values)
    for v in values:
        if v.kind is not schema.kind:
            raise SchemaViolation(concept_id, schema.kind, v.kind)
    if schema.multiplicity is Multiplicity.ONE and len(values) > 1:
        raise MultiplicityViolation(concept_id, len(values))
    fields = dict(record.fields)
    if values:
        fields[concept_id] = values
    else:
        fields.pop(concept_id, None)
    return replace(record, fields=fields)


def get_field(record: RopaRecord, concept_id: str) -> tuple[FieldValue, ...]:
    return record.values(concept_id)
