"""Ground-truth machinery: stratified sampling, inter-annotator agreement,
majority gold standard with tie escalation, and confusion reporting.

Krippendorff's alpha (nominal) is computed from the coincidence matrix:
a unit with m >= 2 annotations contributes weight 1/(m-1) to cell o[c][k]
for every ordered pair (c, k) of its annotations; with n = sum(o) and
n_c the row sums, alpha = 1 - (n-1) * sum_offdiag(o) / sum_{c!=k}(n_c n_k).
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .valence import Polarity

LABEL_ORDER = (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL)


class EvalError(Exception):
    """Base class for evaluation failures."""


class SamplingError(EvalError):
    """A polarity class cannot supply the requested sample count."""


class UndefinedAlphaError(EvalError):
    """No unit carries two or more annotations."""


@dataclass(frozen=True)
class AnnotationRecord:
    """One human judgment of one sampled record."""

    sample_id: str
    annotator_id: str
    label: Polarity
    submitted_at: str = ""


@dataclass(frozen=True)
class GoldLabel:
    sample_id: str
    label: Polarity
    method: str  # "majority" | "escalated"


@dataclass(frozen=True)
class AgreementReport:
    alpha: float
    n_units: int
    n_annotations: int
    full_agreement_count: int
    full_agreement_rate: float


@dataclass(frozen=True)
class ConfusionReport:
    """3x3 counts; rows are automated labels, columns gold labels."""

    matrix: np.ndarray
    agreement_count: int
    agreement_rate: float
    labels: tuple[Polarity, ...] = LABEL_ORDER


def stratified_sample(labelled: Mapping[str, Polarity], per_class: int,
                      seed: int) -> list[str]:
    """Draw exactly ``per_class`` record ids per polarity class.

    Sampling is without replacement and reproducible from the seed; the
    candidate pool is sorted so the draw does not depend on mapping order.
    """
    pools: dict[Polarity, list[str]] = {c: [] for c in LABEL_ORDER}
    for record_id in sorted(labelled):
        pools[labelled[record_id]].append(record_id)
    rng = random.Random(seed)
    chosen: list[str] = []
    for polarity in LABEL_ORDER:
        pool = pools[polarity]
        if len(pool) < per_class:
            raise SamplingError(
                f"class {polarity.value} has only {len(pool)} records, "
                f"need {per_class}")
        chosen.extend(rng.sample(pool, per_class))
    return chosen


def _units(annotations: Iterable[AnnotationRecord]) -> dict[str, list[Polarity]]:
    units: dict[str, list[Polarity]] = {}
    for record in annotations:
        units.setdefault(record.sample_id, []).append(record.label)
    return units


def coincidence_matrix(units: Mapping[str, Sequence[Polarity]]) -> dict[tuple[Polarity, Polarity], float]:
    """Coincidence weights over all pairable units (m >= 2)."""
    o: dict[tuple[Polarity, Polarity], float] = {}
    for labels in units.values():
        m = len(labels)
        if m < 2:
            continue
        weight = 1.0 / (m - 1)
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                if i == j:
                    continue
                o[(a, b)] = o.get((a, b), 0.0) + weight
    return o


def krippendorff_alpha(annotations: Iterable[AnnotationRecord]) -> AgreementReport:
    """Nominal-level alpha plus campaign-level agreement statistics.

    Units with a single annotation are excluded from alpha but counted in
    the report. When every pairable annotation falls in one category both
    disagreement terms vanish and alpha is 1 by convention.
    """
    records = list(annotations)
    units = _units(records)
    if not units:
        raise UndefinedAlphaError("no annotations supplied")
    o = coincidence_matrix(units)
    if not o:
        raise UndefinedAlphaError("no unit has two or more annotations")

    n = sum(o.values())
    categories = {c for pair in o for c in pair}
    row_sums = {c: sum(v for (a, _), v in o.items() if a == c) for c in categories}
    off_diagonal = sum(v for (a, b), v in o.items() if a != b)
    expected = sum(row_sums[a] * row_sums[b]
                   for a in categories for b in categories if a != b)
    if expected == 0.0:
        alpha = 1.0
    else:
        alpha = 1.0 - (n - 1.0) * off_diagonal / expected

    full = sum(1 for labels in units.values()
               if len(labels) >= 2 and len(set(labels)) == 1)
    return AgreementReport(
        alpha=alpha,
        n_units=len(units),
        n_annotations=len(records),
        full_agreement_count=full,
        full_agreement_rate=full / len(units),
    )


def gold_standard(
    annotations: Iterable[AnnotationRecord],
    resolutions: Mapping[str, Polarity] | None = None,
) -> tuple[list[GoldLabel], list[str]]:
    """Resolve per-sample gold labels.

    A label holding at least half of a sample's annotations (and strictly
    more than every other label) wins as majority. Anything else needs an
    escalated resolution; supplying a resolution for a sample that already
    has a majority is rejected for audit safety.
    """
    resolutions = dict(resolutions or {})
    units = _units(annotations)
    gold: list[GoldLabel] = []
    tie_queue: list[str] = []
    for sample_id in sorted(units):
        labels = units[sample_id]
        tally: dict[Polarity, int] = {}
        for label in labels:
            tally[label] = tally.get(label, 0) + 1
        best = max(tally.values())
        winners = [label for label, count in tally.items() if count == best]
        if len(winners) == 1 and best * 2 >= len(labels):
            if sample_id in resolutions:
                raise EvalError(
                    f"resolution supplied for {sample_id}, which already has a "
                    f"majority label {winners[0].value}")
            gold.append(GoldLabel(sample_id, winners[0], method="majority"))
        elif sample_id in resolutions:
            gold.append(GoldLabel(sample_id, resolutions[sample_id], method="escalated"))
        else:
            tie_queue.append(sample_id)
    return gold, tie_queue


def confusion(gold: Iterable[GoldLabel],
              automated: Mapping[str, Polarity]) -> ConfusionReport:
    """Compare automated labels against the gold standard."""
    index = {label: k for k, label in enumerate(LABEL_ORDER)}
    matrix = np.zeros((3, 3), dtype=int)
    total = 0
    for entry in gold:
        if entry.sample_id not in automated:
            raise EvalError(f"no automated label for sample {entry.sample_id}")
        row = index[automated[entry.sample_id]]
        col = index[entry.label]
        matrix[row, col] += 1
        total += 1
    agreement = int(np.trace(matrix))
    rate = agreement / total if total else 0.0
    return ConfusionReport(matrix=matrix, agreement_count=agreement, agreement_rate=rate)


ANNOTATION_HEADER = ("sample_id", "annotator_id", "label", "submitted_at")


def write_annotations(path: str | Path, records: Iterable[AnnotationRecord]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(ANNOTATION_HEADER)
        for record in records:
            writer.writerow([record.sample_id, record.annotator_id,
                             record.label.value, record.submitted_at])


def read_annotations(path: str | Path) -> list[AnnotationRecord]:
    out: list[AnnotationRecord] = []
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            out.append(AnnotationRecord(
                sample_id=row["sample_id"],
                annotator_id=row["annotator_id"],
                label=Polarity(row["label"]),
                submitted_at=row.get("submitted_at", "") or "",
            ))
    return out
