"""Per-(aspect, period) aggregation of scored mentions.

Each cell tracks per-polarity tweet counts and the per-polarity mean of
|compound| over the tweets classified into that class (0 when the class is
empty); the cell label is the class with the highest mean magnitude, ties
resolving to neutral. Accumulators hold exact dyadic sums
(fractions.Fraction), so merging partial aggregates from parallel partitions
is count-weighted-exact and bit-for-bit identical to serial aggregation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .aspects import AspectMention
from .corpus import MonthKey
from .valence import Polarity, ValenceScore

CLASS_ORDER = (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL)

# One scored row: (mention, score, polarity, period). The period is a
# MonthKey at the default granularity, an ISO date string when daily.
ScoredRow = tuple[AspectMention, ValenceScore, Polarity, Hashable]

CellKey = tuple[str, Hashable]


@dataclass
class CellAccumulator:
    """Streaming per-cell state: per-class count and exact magnitude sum."""

    counts: dict[Polarity, int] = field(
        default_factory=lambda: {c: 0 for c in CLASS_ORDER})
    magnitude_sums: dict[Polarity, Fraction] = field(
        default_factory=lambda: {c: Fraction(0) for c in CLASS_ORDER})

    def add(self, polarity: Polarity, compound: float) -> None:
        self.counts[polarity] += 1
        self.magnitude_sums[polarity] += Fraction(abs(compound))

    def merge(self, other: "CellAccumulator") -> None:
        for c in CLASS_ORDER:
            self.counts[c] += other.counts[c]
            self.magnitude_sums[c] += other.magnitude_sums[c]

    def mean(self, polarity: Polarity) -> Fraction:
        count = self.counts[polarity]
        return self.magnitude_sums[polarity] / count if count else Fraction(0)


@dataclass(frozen=True)
class AspectMonthCell:
    """Finalized per-(aspect, period) aggregate."""

    term: str
    month: Hashable
    counts: Mapping[Polarity, int]
    mean_magnitude: Mapping[Polarity, float]
    label: Polarity


def _label_for(acc: CellAccumulator) -> Polarity:
    means = {c: acc.mean(c) for c in CLASS_ORDER}
    best = max(means.values())
    winners = [c for c in CLASS_ORDER if means[c] == best]
    return winners[0] if len(winners) == 1 else Polarity.NEUTRAL


def finalize(acc: CellAccumulator, term: str, month: Hashable) -> AspectMonthCell:
    return AspectMonthCell(
        term=term,
        month=month,
        counts=dict(acc.counts),
        mean_magnitude={c: float(acc.mean(c)) for c in CLASS_ORDER},
        label=_label_for(acc),
    )


def aggregate_partial(rows: Iterable[ScoredRow]) -> dict[CellKey, CellAccumulator]:
    """Accumulate one partition of scored rows."""
    cells: dict[CellKey, CellAccumulator] = {}
    for mention, score, polarity, period in rows:
        key = (mention.term, period)
        acc = cells.get(key)
        if acc is None:
            acc = cells[key] = CellAccumulator()
        acc.add(polarity, score.compound)
    return cells


def merge_partials(parts: Iterable[dict[CellKey, CellAccumulator]]) -> dict[CellKey, CellAccumulator]:
    """Commutative merge of partial cell maps; exact, order-independent."""
    merged: dict[CellKey, CellAccumulator] = {}
    for part in parts:
        for key, acc in part.items():
            if key in merged:
                merged[key].merge(acc)
            else:
                fresh = CellAccumulator()
                fresh.merge(acc)
                merged[key] = fresh
    return merged


def aggregate(rows: Iterable[ScoredRow]) -> dict[CellKey, AspectMonthCell]:
    """Aggregate scored rows into labelled cells, keyed by (term, period)."""
    partial = aggregate_partial(rows)
    return {key: finalize(acc, key[0], key[1]) for key, acc in sorted(partial.items(), key=_sort_key)}


def _sort_key(item: tuple[CellKey, CellAccumulator]):
    (term, period), _ = item
    return (term, str(period))


def finalize_all(cells: dict[CellKey, CellAccumulator]) -> dict[CellKey, AspectMonthCell]:
    return {key: finalize(acc, key[0], key[1]) for key, acc in sorted(cells.items(), key=_sort_key)}
