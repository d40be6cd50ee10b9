"""A tour of the embedded concept registry.

Run with:  python demos/01_registry_tour.py
"""

from ropa_dpv import Jurisdiction, load_registry

registry = load_registry()

# The registry holds one row for the register itself plus 43 concept rows,
# each carrying its GDPR article reference, Article 30 mandatory flag, DPV
# alignment and per-jurisdiction presence.
print(f"{len(registry.concepts)} concepts (plus container row {registry.container.id!r})")

purposes = registry.concept("purposes-of-processing")
print(f"\n{purposes.display_name}")
print(f"  article    : {purposes.article}")
print(f"  mandatory  : {purposes.mandatory}")
print(f"  DPV terms  : {', '.join(purposes.dpv_terms)}")
print(f"  outcome    : {purposes.outcome.value}")
print(f"  coverage   : {purposes.coverage.template_values} template values vs "
      f"{purposes.coverage.dpv_values} in DPV")

# How well does DPV cover the whole table?
summary = registry.mapping_summary()
print(f"\nmapping outcomes over {summary.total} concepts: "
      f"{summary.exact} exact, {summary.partial} partial, "
      f"{summary.complex} complex, {summary.none} unmapped")
print(f"delta vs the published aggregate counts: {dict(summary.published_delta)}")

# Regulator templates vary widely in scope.
print("\njurisdiction templates:")
for j in Jurisdiction:
    profile = registry.jurisdiction_profile(j)
    print(f"  {j.value}: declares {profile.declared_field_count} input fields, "
          f"marks {len(profile.concepts)} concepts")

# The dataset is a verbatim transcription, inconsistencies included; the
# self-check surfaces them instead of quietly correcting them.
print()
print(registry.self_check().to_text())
