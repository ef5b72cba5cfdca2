"""Deterministic synthetic corpus generator for fixtures and scale tests.

Every generated corpus comes with a manifest of planted ground truth:
per-month kept-record counts (maximum planted at 2017-11, minimum at
2021-12), per-term record-level mention counts (nested phrases accounted
for), and the counts of planted duplicates, reposts, and non-English
records. The manifest is the oracle for ingestion, partitioning, and
ranking tests, so the generator never consults the matcher or the valence
engine; counts are known by construction.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .corpus import MonthKey

# Phrase vocabulary; all words deliberately absent from the bundled valence
# lexicon so planted sentiment words alone set each record's polarity.
TERMS = (
    "cloud",
    "cloud native",
    "5g",
    "5g network",
    "machine learning",
    "data science",
    "data management",
    "malware",
    "automation",
    "encryption",
    "quantum computing",
    "digital twin",
)

_FILLER = (
    "the", "of", "for", "with", "today", "update", "rollout", "pilot",
    "program", "deployment", "vendor", "briefing", "summary", "notes",
    "platform", "sector", "region", "quarterly", "metrics", "coverage",
)

_POSITIVE_WORDS = ("great", "excellent", "impressive", "love", "win")
_NEGATIVE_WORDS = ("terrible", "awful", "worried", "attack", "failure")

_MONTHS = tuple(MonthKey.range(MonthKey(2016, 1), MonthKey(2021, 12)))
_PEAK = MonthKey(2017, 11)
_TROUGH = MonthKey(2021, 12)


def _containment() -> dict[str, tuple[str, ...]]:
    """term -> other terms contained in it as whole-word subphrases."""
    out: dict[str, tuple[str, ...]] = {}
    for outer in TERMS:
        outer_words = outer.split()
        inner_terms = []
        for inner in TERMS:
            if inner == outer:
                continue
            inner_words = inner.split()
            spans = len(outer_words) - len(inner_words) + 1
            if spans > 0 and any(
                    outer_words[k:k + len(inner_words)] == inner_words
                    for k in range(spans)):
                inner_terms.append(inner)
        out[outer] = tuple(inner_terms)
    return out


_CONTAINS = _containment()


@dataclass
class SynthManifest:
    seed: int
    n_records: int
    month_counts: dict[str, int] = field(default_factory=dict)
    term_record_counts: dict[str, int] = field(default_factory=dict)
    planted_duplicates: int = 0
    planted_reposts: int = 0
    planted_non_english: int = 0
    flavor_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(vars(self), indent=2, sort_keys=True)

    @classmethod
    def from_file(cls, path: str | Path) -> "SynthManifest":
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))


def _month_allocation(n: int, rng: random.Random) -> dict[MonthKey, int]:
    """Largest-remainder allocation with forced extremes."""
    weights = {}
    for key in _MONTHS:
        if key == _PEAK:
            weights[key] = 5.0
        elif key == _TROUGH:
            weights[key] = 0.2
        else:
            weights[key] = 0.6 + 1.6 * rng.random()
    total = sum(weights.values())
    shares = {k: n * w / total for k, w in weights.items()}
    counts = {k: int(s) for k, s in shares.items()}
    leftover = n - sum(counts.values())
    for k in sorted(shares, key=lambda k: shares[k] - counts[k], reverse=True)[:leftover]:
        counts[k] += 1
    # Forced extremes must be strict for the fixture oracle to hold.
    others = [c for k, c in counts.items() if k not in (_PEAK, _TROUGH)]
    if counts[_PEAK] <= max(others):
        counts[_PEAK] = max(others) + 1
    if counts[_TROUGH] >= min(others):
        counts[_TROUGH] = max(0, min(others) - 1)
    drift = n - sum(counts.values())
    donors = sorted((k for k in counts if k not in (_PEAK, _TROUGH)),
                    key=lambda k: counts[k], reverse=drift < 0)
    i = 0
    while drift != 0 and donors:
        k = donors[i % len(donors)]
        step = 1 if drift > 0 else -1
        candidate = counts[k] + step
        if _TROUGH in counts and counts[_TROUGH] < candidate < counts[_PEAK]:
            counts[k] = candidate
            drift -= step
        i += 1
        if i > 10 * len(donors) + abs(drift) * len(donors):
            raise ValueError(f"cannot allocate {n} records across months")
    return counts


def generate_corpus(
    n: int,
    seed: int,
    out_path: str | Path | None = None,
    *,
    duplicate_every: int = 97,
    repost_every: int = 53,
    non_english_every: int = 71,
) -> tuple[list[str], SynthManifest]:
    """Build ``n`` kept records plus planted drop-me lines.

    Returns the newline-delimited lines and the manifest; writes the lines
    to ``out_path`` when given. Deterministic in (n, seed).
    """
    if n < len(_MONTHS) * 2:
        raise ValueError(f"need at least {len(_MONTHS) * 2} records for stable month extremes")
    rng = random.Random(seed)
    manifest = SynthManifest(seed=seed, n_records=n)
    month_counts = _month_allocation(n, rng)
    manifest.month_counts = {str(k): c for k, c in sorted(month_counts.items())}

    term_counts = dict.fromkeys(TERMS, 0)
    flavor_counts = {"positive": 0, "negative": 0, "neutral": 0}
    lines: list[str] = []
    sequence = 0

    for month in _MONTHS:
        for _ in range(month_counts[month]):
            sequence += 1
            record_id = f"t{sequence:07d}"
            day = rng.randrange(1, 28)
            hour = rng.randrange(0, 24)
            created = datetime(month.year, month.month, day, hour,
                               rng.randrange(60), tzinfo=timezone.utc)

            planted = rng.sample(TERMS, rng.choice((1, 1, 1, 2, 2, 3)))
            hit: set[str] = set()
            for term in planted:
                hit.add(term)
                hit.update(_CONTAINS[term])
            for term in hit:
                term_counts[term] += 1

            flavor = rng.choices(("positive", "negative", "neutral"),
                                 weights=(4, 3, 3))[0]
            flavor_counts[flavor] += 1
            if flavor == "positive":
                mood = [rng.choice(_POSITIVE_WORDS)]
            elif flavor == "negative":
                mood = [rng.choice(_NEGATIVE_WORDS)]
            else:
                mood = []

            words = [rng.choice(_FILLER) for _ in range(rng.randrange(4, 9))]
            for phrase in planted:
                words.insert(rng.randrange(len(words) + 1), phrase)
            for word in mood:
                words.insert(rng.randrange(len(words) + 1), word)
            text = " ".join(words)

            payload = {
                "id": record_id,
                "created_at": created.isoformat().replace("+00:00", "Z"),
                "text": text,
                "lang": "en",
            }
            lines.append(json.dumps(payload, ensure_ascii=False, sort_keys=True))

            if sequence % duplicate_every == 0:
                lines.append(json.dumps({**payload, "text": text + " again"},
                                        ensure_ascii=False, sort_keys=True))
                manifest.planted_duplicates += 1
            if sequence % repost_every == 0:
                lines.append(json.dumps({**payload, "id": record_id + "r",
                                         "is_repost": True},
                                        ensure_ascii=False, sort_keys=True))
                manifest.planted_reposts += 1
            if sequence % non_english_every == 0:
                lines.append(json.dumps({**payload, "id": record_id + "x",
                                         "lang": "fr"},
                                        ensure_ascii=False, sort_keys=True))
                manifest.planted_non_english += 1

    manifest.term_record_counts = dict(sorted(term_counts.items()))
    manifest.flavor_counts = flavor_counts
    if out_path is not None:
        Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return lines, manifest
