"""Record validation against Article 30 requirements and jurisdiction profiles.

Validation is total: malformed content becomes findings, never exceptions,
so batch audits always complete.  Findings are ordered by registry table
order, then by finding code.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .records import Multiplicity, RopaRecord, ValueKind
from .registry import ConceptRegistry, Jurisdiction, JurisdictionProfile


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


class FindingCode(str, Enum):
    MISSING_MANDATORY = "MISSING_MANDATORY"
    MISSING_PROFILE_FIELD = "MISSING_PROFILE_FIELD"
    TYPE_MISMATCH = "TYPE_MISMATCH"
    UNKNOWN_TERM = "UNKNOWN_TERM"


_SEVERITY: dict[FindingCode, Severity] = {
    FindingCode.MISSING_MANDATORY: Severity.ERROR,
    FindingCode.MISSING_PROFILE_FIELD: Severity.WARNING,
    FindingCode.TYPE_MISMATCH: Severity.ERROR,
    FindingCode.UNKNOWN_TERM: Severity.WARNING,
}

_CODE_ORDER = {code: i for i, code in enumerate(FindingCode)}


@dataclass(frozen=True)
class ValidationFinding:
    concept: str
    severity: Severity
    code: FindingCode
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[ValidationFinding, ...]

    @property
    def compliant(self) -> bool:
        return not any(f.severity is Severity.ERROR for f in self.findings)

    @property
    def error_count(self) -> int:
        return sum(1 for f in self.findings if f.severity is Severity.ERROR)

    @property
    def warning_count(self) -> int:
        return sum(1 for f in self.findings if f.severity is Severity.WARNING)


def _finding(concept: str, code: FindingCode, message: str) -> ValidationFinding:
    return ValidationFinding(concept, _SEVERITY[code], code, message)


def _value_findings(
    record: RopaRecord, registry: ConceptRegistry, concept_id: str
) -> list[ValidationFinding]:
    """Check populated values against the concept's schema.

    ``set_field`` already enforces schemas, so TYPE_MISMATCH can only occur
    for records deserialized from external files or built by hand.
    UNKNOWN_TERM fires only for vocabularies that ship seeded terms;
    vocabularies are free-growing, so these stay warnings.
    """
    schema = registry.concept(concept_id).value_schema
    values = record.values(concept_id)
    findings: list[ValidationFinding] = []
    for v in values:
        if v.kind is not schema.kind:
            findings.append(
                _finding(
                    concept_id,
                    FindingCode.TYPE_MISMATCH,
                    f"expected {schema.kind.value} value, got {v.kind.value}",
                )
            )
    if schema.multiplicity is Multiplicity.ONE and len(values) > 1:
        findings.append(
            _finding(
                concept_id,
                FindingCode.TYPE_MISMATCH,
                f"concept holds a single value, got {len(values)}",
            )
        )
    if schema.kind in (ValueKind.TERM, ValueKind.TERM_LIST) and schema.vocabulary:
        known = registry.known_terms(schema.vocabulary)
        if known:
            for v in values:
                if v.kind is schema.kind and v.value not in known:
                    findings.append(
                        _finding(
                            concept_id,
                            FindingCode.UNKNOWN_TERM,
                            f"term {v.value!r} is not in vocabulary "
                            f"{schema.vocabulary!r} (free-growing; informational)",
                        )
                    )
    return findings


def _validate(
    record: RopaRecord,
    registry: ConceptRegistry,
    profile: JurisdictionProfile | None,
) -> ValidationReport:
    findings: list[ValidationFinding] = []
    for descriptor in registry.concepts:
        cid = descriptor.id
        per_concept: list[ValidationFinding] = []
        if not record.has(cid):
            if descriptor.mandatory:
                per_concept.append(
                    _finding(
                        cid,
                        FindingCode.MISSING_MANDATORY,
                        f"mandatory concept {cid!r} is not populated",
                    )
                )
            elif profile is not None and cid in profile.concepts:
                per_concept.append(
                    _finding(
                        cid,
                        FindingCode.MISSING_PROFILE_FIELD,
                        f"{profile.jurisdiction.value} template expects {cid!r}",
                    )
                )
        else:
            per_concept.extend(_value_findings(record, registry, cid))
        per_concept.sort(key=lambda f: _CODE_ORDER[f.code])
        findings.extend(per_concept)
    return ValidationReport(findings=tuple(findings))


def validate_article30(record: RopaRecord, registry: ConceptRegistry) -> ValidationReport:
    """One MISSING_MANDATORY error per mandatory concept absent from the record."""
    return _validate(record, registry, None)


def validate_against_profile(
    record: RopaRecord, profile: JurisdictionProfile, registry: ConceptRegistry
) -> ValidationReport:
    """Article 30 findings plus a warning per unpopulated profile concept.

    Profile checks add only warnings: the error set is always identical to
    ``validate_article30``.
    """
    return _validate(record, registry, profile)


@dataclass(frozen=True)
class GapStatus:
    errors: int
    warnings: int
    ready: bool


def gap_matrix(
    record: RopaRecord, registry: ConceptRegistry
) -> dict[Jurisdiction, GapStatus]:
    """Validate the record against all six profiles.

    ``ready`` means zero errors and zero warnings for that jurisdiction.
    """
    matrix: dict[Jurisdiction, GapStatus] = {}
    for j in Jurisdiction:
        report = validate_against_profile(record, registry.profiles[j], registry)
        matrix[j] = GapStatus(
            errors=report.error_count,
            warnings=report.warning_count,
            ready=not report.findings,
        )
    return matrix
