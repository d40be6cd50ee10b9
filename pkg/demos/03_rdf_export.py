"""Export a record as RDF, with DPV terms where the registry maps them.

Run with:  python demos/03_rdf_export.py
"""

from ropa_dpv import (
    field_values,
    load_registry,
    new_record,
    serialize_jsonld,
    serialize_turtle,
    set_field,
    to_graph,
)

registry = load_registry()

record = new_record("demo-rdf", "Acme GmbH", "2024-03-01T10:00:00+00:00")
for concept_id, values in [
    ("purposes-of-processing", ["marketing"]),        # exact DPV match
    ("categories-of-personal-data", ["contact-details"]),  # partial match
    ("privacy-notice", ["https://example.com/privacy"]),   # no DPV concept
    ("data-combination", [True]),                     # processing verb
]:
    record = set_field(record, registry, concept_id, field_values(registry, concept_id, *values))

graph = to_graph(record, registry)

# Mapped concepts use dpv: predicates; unmapped ones fall back to the
# ropaex: extension namespace, and every concept usage is annotated with
# its mapping-outcome class.
print(serialize_turtle(graph))

print("--- the same graph as JSON-LD ---")
print(serialize_jsonld(graph))
