"""End-to-end walkthrough on a synthetic corpus, module by module.

Generates a small fixture corpus with known ground truth, then walks it
through ingestion, month partitioning, aspect extraction, valence scoring,
and trend aggregation, printing what each stage produces.
"""
import tempfile
from collections import Counter
from pathlib import Path

from adoptrace.aspects import TermIndex, extract
from adoptrace.corpus import load_corpus, partition_by_month
from adoptrace.synth import TERMS, generate_corpus
from adoptrace.textprep import PrepConfig, normalize
from adoptrace.trend import aggregate
from adoptrace.valence import classify, default_lexicon, score

workdir = Path(tempfile.mkdtemp(prefix="adoptrace-demo-"))
corpus_path = workdir / "corpus.ndjson"

# 1. A 1,000-record synthetic corpus. The manifest records the planted
#    ground truth (per-month counts, per-term counts, drop-me lines).
lines, manifest = generate_corpus(1000, seed=7, out_path=corpus_path)
print(f"generated {len(lines)} lines ({manifest.n_records} keepable records)")

# 2. Ingest: validation, dedup, repost/language filtering.
records, stats = load_corpus(corpus_path)
print(f"ingest stats: {stats.as_dict()}")

# 3. Partition by publication month.
buckets = partition_by_month(records)
biggest = max(buckets, key=lambda k: len(buckets[k]))
smallest = min(buckets, key=lambda k: len(buckets[k]))
print(f"{len(buckets)} month buckets; busiest {biggest} "
      f"({len(buckets[biggest])}), quietest {smallest} ({len(buckets[smallest])})")

# 4. Extract technology aspects from the normalized matching view.
prep = PrepConfig(scrape_keywords=("iot", "internet of things"))
index = TermIndex(TERMS)
lexicon = default_lexicon()

rows = []
term_freq = Counter()
for record in records:
    clean = normalize(record.raw_text, prep)
    mentions = extract(clean, index, record.id)
    term_freq.update(m.term for m in mentions)
    if not mentions:
        continue
    # 5. Score the whole text once; every aspect in it inherits the score.
    valence = score(clean.sentiment_view, lexicon)
    polarity = classify(valence.compound)
    for mention in mentions:
        rows.append((mention, valence, polarity, record.month))

print("top terms:", term_freq.most_common(5))

# 6. Aggregate into per-(aspect, month) cells; the label is the class with
#    the highest mean |compound|.
cells = aggregate(rows)
print(f"{len(cells)} (aspect, month) cells; a sample:")
for key in list(cells)[:5]:
    cell = cells[key]
    means = {p.value[:3]: round(m, 3) for p, m in cell.mean_magnitude.items()}
    print(f"  {key[0]:<18} {key[1]}  label={cell.label.value:<8} means={means}")
