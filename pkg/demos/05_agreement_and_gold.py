"""Ground-truth machinery: agreement, gold standard, confusion matrix.

Simulates a small annotation campaign: five annotators label a stratified
sample, inter-annotator agreement is measured with Krippendorff's alpha,
majority voting builds the gold standard (ties escalate), and the automated
labels are compared against gold in a confusion matrix.
"""
import random

from adoptrace.evalkit import (AnnotationRecord, confusion, gold_standard,
                               krippendorff_alpha, stratified_sample)
from adoptrace.valence import Polarity

P, N, U = Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL
rng = random.Random(5)

# Automated labels for a pool of records (as the pipeline would emit).
automated = {}
for i in range(90):
    automated[f"r{i:03d}"] = (P, N, U)[i % 3]

# Stratified sample: equal counts per automated class, seeded.
sample = stratified_sample(automated, per_class=10, seed=5)
print(f"sampled {len(sample)} records, 10 per class")

# Five simulated annotators; mostly agree with the automated label, with a
# little noise so alpha lands below 1.
annotations = []
for sid in sample:
    truth = automated[sid]
    for k in range(5):
        label = truth if rng.random() < 0.85 else rng.choice((P, N, U))
        annotations.append(AnnotationRecord(sid, f"annotator{k}", label))

report = krippendorff_alpha(annotations)
print(f"alpha = {report.alpha:.3f} over {report.n_units} units / "
      f"{report.n_annotations} annotations; "
      f"{report.full_agreement_count} unanimous "
      f"({report.full_agreement_rate:.1%})")

gold, ties = gold_standard(annotations)
print(f"gold standard: {len(gold)} majority labels, {len(ties)} ties to escalate")
if ties:
    resolutions = {sid: U for sid in ties}
    gold, _ = gold_standard(annotations, resolutions)
    print(f"after escalation: {len(gold)} gold labels")

result = confusion(gold, automated)
print("confusion (rows=automated, cols=gold, order pos/neg/neu):")
for row in result.matrix:
    print("   ", row.tolist())
print(f"agreement {result.agreement_count}/{len(gold)} = {result.agreement_rate:.1%}")
