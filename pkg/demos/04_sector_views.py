"""Sector-filtered views: restricting the analysis to one industry.

Sector filters are whole-word keyword lists over the matching view; records
mentioning any keyword stay in. The bundled healthcare and education starter
configs are editable JSON files.
"""
from importlib import resources

from adoptrace.corpus import parse_record
from adoptrace.report import SectorFilter, sector_view
from adoptrace.textprep import normalize

with resources.as_file(resources.files("adoptrace.data") / "sectors" / "healthcare.json") as p:
    healthcare = SectorFilter.from_file(p)
print(f"sector {healthcare.name!r}: {len(healthcare.keywords)} keywords, "
      f"e.g. {healthcare.keywords[:4]}")

texts = [
    ("h1", "Information-stealing malware discovered targeting Israeli hospitals"),
    ("h2", "patient monitoring devices now stream encrypted telemetry"),
    ("x1", "5g rollout update for the metro region"),
    ("x2", "new quantum computing testbed announced"),
    ("e1", "university classroom pilots vr headsets for lectures"),
]

pairs = []
for rid, text in texts:
    record = parse_record(
        f'{{"id": "{rid}", "created_at": "2017-07-01T00:00:00Z", "text": "{text}"}}')
    pairs.append((record, normalize(text)))

kept = sector_view(pairs, healthcare)
print("healthcare subset:", [record.id for record, _ in kept])

with resources.as_file(resources.files("adoptrace.data") / "sectors" / "education.json") as p:
    education = SectorFilter.from_file(p)
kept = sector_view(pairs, education)
print("education subset: ", [record.id for record, _ in kept])
