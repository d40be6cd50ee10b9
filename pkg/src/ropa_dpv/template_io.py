"""Canonical interchange format and regulator template conversion.

Two CSV shapes are handled here:

* the canonical interchange file, one value per row
  (``record_id,concept_id,value_index,value_kind,value``), with record
  metadata carried by the reserved pseudo-concepts ``_meta:controller_name``
  and ``_meta:created``;
* spreadsheet-style template files, one processing activity per data row,
  with columns mapped to concepts by a :class:`TemplateProfileConfig`.

Parsing is forgiving: schema violations become warnings and the offending
value is dropped.  Structural failures (bad quoting, wrong column count,
duplicate cells) are hard errors.  All output is UTF-8 with LF endings and
a trailing LF, and is byte-deterministic for equal inputs.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

from .errors import DuplicateCell, HeaderMismatch, MalformedCsv, UnknownConcept
from .records import (
    FieldValue,
    Multiplicity,
    RopaRecord,
    ValueKind,
    parse_timestamp,
)
from .registry import ConceptRegistry, Jurisdiction, read_verified

CANONICAL_HEADER = ("record_id", "concept_id", "value_index", "value_kind", "value")
CONFIG_HEADER = ("external_header", "concept_id")
META_CONTROLLER_NAME = "_meta:controller_name"
META_CREATED = "_meta:created"

#: Metadata defaults for records deserialized without their _meta rows.
FALLBACK_CONTROLLER_NAME = "(unknown)"
FALLBACK_CREATED = "1970-01-01T00:00:00+00:00"

_RECORD_ID_RE = re.compile(r"[A-Za-z0-9._~-]+\Z")


class LossReason(str, Enum):
    NOT_IN_TARGET_PROFILE = "NOT_IN_TARGET_PROFILE"
    UNREPRESENTABLE_VALUE = "UNREPRESENTABLE_VALUE"


@dataclass(frozen=True)
class ConversionLossReport:
    """What a conversion or template export dropped, and why."""

    lost: tuple[tuple[str, LossReason], ...]
    retained_count: int


@dataclass(frozen=True)
class TemplateProfileConfig:
    """Ordered mapping from a template's column headers to concept ids."""

    jurisdiction: Jurisdiction
    column_map: tuple[tuple[str, str], ...]

    @property
    def headers(self) -> tuple[str, ...]:
        return tuple(h for h, _ in self.column_map)

    @property
    def concept_ids(self) -> tuple[str, ...]:
        return tuple(c for _, c in self.column_map)


def make_config(
    jurisdiction: Jurisdiction,
    column_map: Sequence[tuple[str, str]],
    registry: ConceptRegistry,
) -> TemplateProfileConfig:
    """Validate and freeze a column map for one jurisdiction's template."""
    jurisdiction = Jurisdiction(jurisdiction)
    profile = registry.profiles[jurisdiction]
    headers: set[str] = set()
    for header, cid in column_map:
        if not header:
            raise ValueError("external headers must be non-empty")
        if header in headers:
            raise ValueError(f"duplicate external header {header!r}")
        headers.add(header)
        registry.concept(cid)
        if cid not in profile.concepts:
            raise ValueError(
                f"{cid!r} is not part of the {jurisdiction.value} template profile"
            )
    return TemplateProfileConfig(jurisdiction, tuple((h, c) for h, c in column_map))


def load_config(
    source: bytes | str, jurisdiction: Jurisdiction, registry: ConceptRegistry
) -> TemplateProfileConfig:
    """Parse a ``external_header,concept_id`` CSV into a config."""
    rows = _read_csv(source)
    if not rows or tuple(rows[0][1]) != CONFIG_HEADER:
        raise MalformedCsv(1, f"expected header {','.join(CONFIG_HEADER)}")
    column_map = []
    for line, row in rows[1:]:
        if len(row) != 2:
            raise MalformedCsv(line, f"expected 2 columns, got {len(row)}")
        column_map.append((row[0], row[1]))
    try:
        return make_config(jurisdiction, column_map, registry)
    except (ValueError, UnknownConcept) as exc:
        raise MalformedCsv(0, str(exc)) from exc


def default_config(
    registry: ConceptRegistry, jurisdiction: Jurisdiction
) -> TemplateProfileConfig:
    """The packaged config for one jurisdiction.

    Headers default to the registry display names (the concept id stands in
    for the one unnamed row); regulators' real headers can be supplied via
    :func:`load_config`.
    """
    jurisdiction = Jurisdiction(jurisdiction)
    data = read_verified("templates", f"{jurisdiction.value.lower()}.csv")
    return load_config(data, jurisdiction, registry)


# -- cell encoding -------------------------------------------------------------

# In-cell list separator is ";"; a literal ";" inside a value is escaped as
# "\;".  A value whose lexical form ends with a backslash cannot be encoded
# unambiguously and is reported as UNREPRESENTABLE_VALUE on export.


def _escape(value: str) -> str:
    return value.replace(";", "\\;")


def _unescape(cell: str) -> str:
    return cell.replace("\\;", ";")


def _split_cell(cell: str) -> list[str]:
    items: list[str] = []
    buf: list[str] = []
    i = 0
    while i < len(cell):
        ch = cell[i]
        if ch == "\\" and i + 1 < len(cell) and cell[i + 1] == ";":
            buf.append(";")
            i += 2
        elif ch == ";":
            items.append("".join(buf))
            buf = []
            i += 1
        else:
            buf.append(ch)
            i += 1
    items.append("".join(buf))
    return items


def _representable(values: Iterable[FieldValue]) -> bool:
    return not any(v.lexical.endswith("\\") for v in values)


# -- CSV plumbing --------------------------------------------------------------


def _decode(source: bytes | str) -> str:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedCsv(0, f"input is not valid UTF-8: {exc}") from exc
    return source


def _read_csv(source: bytes | str) -> list[tuple[int, list[str]]]:
    """Read CSV rows with line numbers; structural failures raise MalformedCsv."""
    text = _decode(source)
    reader = csv.reader(io.StringIO(text), strict=True)
    rows: list[tuple[int, list[str]]] = []
    try:
        for row in reader:
            rows.append((reader.line_num, row))
    except csv.Error as exc:
        raise MalformedCsv(reader.line_num, str(exc)) from exc
    return rows


# -- canonical interchange format ----------------------------------------------


def parse_canonical(
    source: bytes | str, registry: ConceptRegistry
) -> tuple[list[RopaRecord], list[str]]:
    """Parse a canonical interchange file.

    Returns records in file order plus warnings for every dropped value.
    Structural problems raise :class:`MalformedCsv` or :class:`DuplicateCell`.
    """
    rows = _read_csv(source)
    if not rows or tuple(rows[0][1]) != CANONICAL_HEADER:
        raise MalformedCsv(1, f"expected header {','.join(CANONICAL_HEADER)}")

    warnings: list[str] = []
    # (record_id, concept_id) -> list of (line, value_index, kind_tag, value)
    cells: dict[tuple[str, str], list[tuple[int, int, str, str]]] = {}
    seen_keys: set[tuple[str, str, int]] = set()
    record_order: list[str] = []

    for line, row in rows[1:]:
        if len(row) != 5:
            raise MalformedCsv(line, f"expected 5 columns, got {len(row)}")
        record_id, concept_id, index_cell, kind_tag, value = row
        if not _RECORD_ID_RE.fullmatch(record_id):
            raise MalformedCsv(line, f"invalid record id {record_id!r}")
        try:
            value_index = int(index_cell)
        except ValueError:
            raise MalformedCsv(
                line, f"value_index is not an integer: {index_cell!r}"
            ) from None
        if value_index < 0:
            raise MalformedCsv(line, f"negative value_index {value_index}")
        key = (record_id, concept_id, value_index)
        if key in seen_keys:
            raise DuplicateCell(record_id, concept_id, value_index)
        seen_keys.add(key)
        if record_id not in record_order:
            record_order.append(record_id)
        cells.setdefault((record_id, concept_id), []).append(
            (line, value_index, kind_tag, value)
        )

    for (record_id, concept_id), entries in cells.items():
        indexes = sorted(e[1] for e in entries)
        if indexes != list(range(len(entries))):
            raise MalformedCsv(
                entries[0][0],
                f"value_index not contiguous from 0 for ({record_id!r}, {concept_id!r})",
            )
        entries.sort(key=lambda e: e[1])

    records: list[RopaRecord] = []
    for record_id in record_order:
        controller_name = None
        created = None
        fields: dict[str, tuple[FieldValue, ...]] = {}
        for (rid, concept_id), entries in cells.items():
            if rid != record_id:
                continue
            if concept_id in (META_CONTROLLER_NAME, META_CREATED):
                if len(entries) > 1:
                    warnings.append(
                        f"line {entries[1][0]}: extra {concept_id} value(s) ignored"
                    )
                if concept_id == META_CONTROLLER_NAME:
                    controller_name = entries[0][3]
                else:
                    created = entries[0][3]
                continue
            if concept_id.startswith("_meta:"):
                warnings.append(
                    f"line {entries[0][0]}: unknown metadata row {concept_id!r} ignored"
                )
                continue
            try:
                descriptor = registry.concept(concept_id)
            except UnknownConcept:
                warnings.append(
                    f"line {entries[0][0]}: unknown concept {concept_id!r}; values dropped"
                )
                continue
            schema = descriptor.value_schema
            values: list[FieldValue] = []
            for line, _, kind_tag, value in entries:
                try:
                    kind = ValueKind(kind_tag)
                except ValueError:
                    warnings.append(
                        f"line {line}: unknown value kind {kind_tag!r} for "
                        f"{concept_id!r}; value dropped"
                    )
                    continue
                if kind is not schema.kind:
                    warnings.append(
                        f"line {line}: {concept_id!r} expects {schema.kind.value}, "
                        f"got {kind.value}; value dropped"
                    )
                    continue
                try:
                    values.append(FieldValue.from_lexical(kind, value))
                except ValueError as exc:
                    warnings.append(f"line {line}: {concept_id!r}: {exc}; value dropped")
            if schema.multiplicity is Multiplicity.ONE and len(values) > 1:
                warnings.append(
                    f"line {entries[0][0]}: {concept_id!r} holds a single value; "
                    f"{len(values) - 1} extra value(s) dropped"
                )
                values = values[:1]
            if values:
                fields[concept_id] = tuple(values)
        if controller_name is None or not controller_name:
            warnings.append(
                f"record {record_id!r}: missing {META_CONTROLLER_NAME}; "
                f"using {FALLBACK_CONTROLLER_NAME!r}"
            )
            controller_name = FALLBACK_CONTROLLER_NAME
        if created is None:
            warnings.append(
                f"record {record_id!r}: missing {META_CREATED}; using {FALLBACK_CREATED!r}"
            )
            created = FALLBACK_CREATED
        else:
            try:
                parse_timestamp(created)
            except ValueError:
                warnings.append(
                    f"record {record_id!r}: invalid created timestamp {created!r}; "
                    f"using {FALLBACK_CREATED!r}"
                )
                created = FALLBACK_CREATED
        records.append(RopaRecord(record_id, controller_name, created, fields))
    return records, warnings


def write_canonical(records: Sequence[RopaRecord], registry: ConceptRegistry) -> str:
    """Serialize records to the canonical interchange format.

    Deterministic: records in input order, concepts in table order, values
    in index order.  Record ids must be unique (the file format cannot
    represent two records with the same id).
    """
    ids = [record.record_id for record in records]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate record ids cannot be written to one file")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CANONICAL_HEADER)
    for record in records:
        writer.writerow(
            [record.record_id, META_CONTROLLER_NAME, 0, ValueKind.TEXT.value,
             record.controller_name]
        )
        writer.writerow(
            [record.record_id, META_CREATED, 0, ValueKind.TEXT.value, record.created]
        )
        for cid in sorted(record.fields, key=registry.table_index):
            for index, value in enumerate(record.fields[cid]):
                writer.writerow(
                    [record.record_id, cid, index, value.kind.value, value.lexical]
                )
    return out.getvalue()


# -- template-shaped files -------------------------------------------------------


def import_template(
    source: bytes | str,
    config: TemplateProfileConfig,
    registry: ConceptRegistry,
) -> tuple[list[RopaRecord], list[str]]:
    """Import a spreadsheet-style template CSV, one activity per data row.

    Header matching is order-insensitive and case-sensitive.  Raises
    :class:`HeaderMismatch` when more than half of the mapped headers are
    absent (the file is probably a different regulator's template).
    """
    rows = _read_csv(source)
    if not rows:
        raise MalformedCsv(1, "empty file")
    file_headers = rows[0][1]
    by_header = dict(config.column_map)
    missing = [h for h, _ in config.column_map if h not in file_headers]
    if len(missing) * 2 > len(config.column_map):
        raise HeaderMismatch(missing)

    warnings = [f"mapped column {h!r} missing from input" for h in missing]
    column_concepts: list[str | None] = []
    seen_headers: set[str] = set()
    for header in file_headers:
        if header in seen_headers:
            warnings.append(f"duplicate column {header!r}; ignored")
            column_concepts.append(None)
        elif header in by_header:
            column_concepts.append(by_header[header])
        else:
            warnings.append(f"column {header!r} is not mapped; ignored")
            column_concepts.append(None)
        seen_headers.add(header)

    records: list[RopaRecord] = []
    code = config.jurisdiction.value.lower()
    for line, row in rows[1:]:
        if len(row) != len(file_headers):
            raise MalformedCsv(
                line, f"expected {len(file_headers)} columns, got {len(row)}"
            )
        number = len(records) + 1
        fields: dict[str, tuple[FieldValue, ...]] = {}
        for cid, cell in zip(column_concepts, row):
            if cid is None or not cell.strip():
                continue
            schema = registry.concept(cid).value_schema
            if schema.multiplicity is Multiplicity.MANY:
                raw_items = _split_cell(cell)
            else:
                raw_items = [_unescape(cell)]
            values = []
            for item in raw_items:
                try:
                    values.append(FieldValue.from_lexical(schema.kind, item))
                except ValueError as exc:
                    warnings.append(f"line {line}: {cid!r}: {exc}; value dropped")
            if values:
                fields[cid] = tuple(values)
        controller = FALLBACK_CONTROLLER_NAME
        for source_cid in ("controller-name-and-contact-details", "data-controller"):
            if source_cid in fields:
                controller = fields[source_cid][0].lexical
                break
        # Imports are reproducible: the created timestamp is a fixed epoch
        # placeholder, not the wall clock.
        records.append(
            RopaRecord(f"{code}-{number:04d}", controller, FALLBACK_CREATED, fields)
        )
    return records, warnings


def export_template(
    record: RopaRecord,
    config: TemplateProfileConfig,
    registry: ConceptRegistry,
) -> tuple[str, ConversionLossReport]:
    """Export one record to a template shape: header row plus one data row.

    Populated concepts without a target column are reported as
    NOT_IN_TARGET_PROFILE; concepts whose values cannot survive the cell
    encoding are reported as UNREPRESENTABLE_VALUE.
    """
    target = set(config.concept_ids)
    lost: list[tuple[str, LossReason]] = []
    emitted: set[str] = set()
    for cid in sorted(record.fields, key=registry.table_index):
        if cid not in target:
            lost.append((cid, LossReason.NOT_IN_TARGET_PROFILE))
        elif not _representable(record.fields[cid]):
            lost.append((cid, LossReason.UNREPRESENTABLE_VALUE))
        else:
            emitted.add(cid)

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(config.headers)
    data_row = []
    for _, cid in config.column_map:
        if cid in emitted:
            data_row.append(";".join(_escape(v.lexical) for v in record.fields[cid]))
        else:
            data_row.append("")
    writer.writerow(data_row)
    return out.getvalue(), ConversionLossReport(tuple(lost), len(emitted))


def convert(
    record: RopaRecord,
    from_config: TemplateProfileConfig,
    to_config: TemplateProfileConfig,
    registry: ConceptRegistry,
) -> tuple[RopaRecord, ConversionLossReport]:
    """Restrict a record to the target template's concepts.

    Record metadata is preserved; conversion never invents data.  The
    ``from_config`` identifies the source shape for reporting purposes and
    does not influence the result.  Unlike :func:`export_template` no cell
    encoding happens here, so values are never unrepresentable.
    """
    del from_config
    target = set(to_config.concept_ids)
    fields = {cid: vals for cid, vals in record.fields.items() if cid in target}
    lost = tuple(
        (cid, LossReason.NOT_IN_TARGET_PROFILE)
        for cid in sorted(record.fields, key=registry.table_index)
        if cid not in target
    )
    return replace(record, fields=fields), ConversionLossReport(lost, len(fields))
