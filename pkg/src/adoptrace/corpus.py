"""Ingestion of newline-delimited tweet records.

One JSON object per line with fields ``id``, ``created_at`` (ISO-8601),
``text``, and optional ``is_repost`` / ``lang``. Loading validates,
deduplicates (first occurrence wins), drops reposts and, by default,
records whose ``lang`` tag is present and not English, then partitions
the survivors into month-year buckets.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("id", "created_at", "text")


class CorpusError(Exception):
    """Base class for ingestion failures."""


class RecordParseError(CorpusError):
    """A single malformed input line; recoverable during bulk loads."""

    def __init__(self, reason: str, line_no: int = 0):
        super().__init__(f"line {line_no}: {reason}" if line_no else reason)
        self.reason = reason
        self.line_no = line_no


class CorpusQualityError(CorpusError):
    """Raised when the malformed-line ratio exceeds the configured threshold."""


@dataclass(frozen=True, order=True)
class MonthKey:
    """A (year, month) bucket key; totally ordered, formats as YYYY-MM."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "MonthKey":
        try:
            year_s, month_s = text.split("-")
            return cls(int(year_s), int(month_s))
        except (ValueError, AttributeError) as exc:
            raise ValueError(f"not a YYYY-MM month key: {text!r}") from exc

    @classmethod
    def of(cls, instant: datetime) -> "MonthKey":
        if instant.tzinfo is not None:
            instant = instant.astimezone(timezone.utc)
        return cls(instant.year, instant.month)

    def next(self) -> "MonthKey":
        if self.month == 12:
            return MonthKey(self.year + 1, 1)
        return MonthKey(self.year, self.month + 1)

    @staticmethod
    def range(first: "MonthKey", last: "MonthKey") -> list["MonthKey"]:
        """Inclusive chronological range of month keys."""
        if last < first:
            return []
        out = [first]
        while out[-1] < last:
            out.append(out[-1].next())
        return out


@dataclass(frozen=True)
class TweetRecord:
    """One ingested text record."""

    id: str
    created_at: datetime
    raw_text: str
    is_repost: bool = False
    lang: str | None = None

    @property
    def month(self) -> MonthKey:
        return MonthKey.of(self.created_at)

    def to_json(self) -> str:
        payload = {
            "id": self.id,
            "created_at": self.created_at.isoformat(),
            "text": self.raw_text,
            "is_repost": self.is_repost,
        }
        if self.lang is not None:
            payload["lang"] = self.lang
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


@dataclass
class IngestStats:
    total_read: int = 0
    kept: int = 0
    dropped_duplicate: int = 0
    dropped_repost: int = 0
    dropped_language: int = 0
    malformed: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(vars(self))


def _parse_timestamp(value: str) -> datetime:
    # fromisoformat() on 3.10 rejects the trailing Z that platform exports use
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    return datetime.fromisoformat(value)


def parse_record(line: str, line_no: int = 0) -> TweetRecord:
    """Parse one newline-delimited record. Unknown fields are ignored."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordParseError(f"invalid JSON: {exc.msg}", line_no) from exc
    if not isinstance(obj, dict):
        raise RecordParseError("record is not an object", line_no)
    for name in REQUIRED_FIELDS:
        if name not in obj:
            raise RecordParseError(f"missing required field: {name}", line_no)
    record_id = str(obj["id"])
    if not record_id:
        raise RecordParseError("empty id", line_no)
    try:
        created_at = _parse_timestamp(str(obj["created_at"]))
    except ValueError as exc:
        raise RecordParseError(f"invalid created_at: {obj['created_at']!r}", line_no) from exc
    lang = obj.get("lang")
    return TweetRecord(
        id=record_id,
        created_at=created_at,
        raw_text=str(obj["text"]),
        is_repost=bool(obj.get("is_repost", False)),
        lang=str(lang) if lang is not None else None,
    )


def _parse_chunk(chunk: Sequence[tuple[int, str]]) -> list[TweetRecord | RecordParseError]:
    out: list[TweetRecord | RecordParseError] = []
    for line_no, line in chunk:
        try:
            out.append(parse_record(line, line_no))
        except RecordParseError as exc:
            out.append(exc)
    return out


def load_corpus(
    path: str | Path,
    *,
    drop_non_english: bool = True,
    max_malformed_ratio: float = 0.10,
    threads: int = 1,
) -> tuple[list[TweetRecord], IngestStats]:
    """Load, validate, and deduplicate a record file.

    Parsing may run over parallel chunks; results merge in input order
    before deduplication, so output is deterministic.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        numbered = [(i, line) for i, line in enumerate(handle, start=1) if line.strip()]

    stats = IngestStats(total_read=len(numbered))
    if threads > 1 and len(numbered) > 1000:
        size = 2048
        chunks = [numbered[i:i + size] for i in range(0, len(numbered), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parsed_chunks = list(pool.map(_parse_chunk, chunks))
        parsed = [item for chunk in parsed_chunks for item in chunk]
    else:
        parsed = _parse_chunk(numbered)

    records: list[TweetRecord] = []
    seen: set[str] = set()
    for item in parsed:
        if isinstance(item, RecordParseError):
            stats.malformed += 1
            logger.warning("skipping malformed record: %s", item)
            continue
        if item.is_repost:
            stats.dropped_repost += 1
            continue
        if drop_non_english and item.lang is not None and item.lang.lower() != "en":
            stats.dropped_language += 1
            continue
        if item.id in seen:
            stats.dropped_duplicate += 1
            continue
        seen.add(item.id)
        records.append(item)
    stats.kept = len(records)

    if stats.total_read and stats.malformed / stats.total_read > max_malformed_ratio:
        raise CorpusQualityError(
            f"{stats.malformed}/{stats.total_read} malformed lines exceeds "
            f"threshold {max_malformed_ratio:.0%} in {path}"
        )
    logger.info("loaded %s: %s", path, stats.as_dict())
    return records, stats


def partition_by_month(records: Iterable[TweetRecord]) -> dict[MonthKey, list[TweetRecord]]:
    """Partition records into chronologically ordered month buckets.

    Every record lands in exactly one bucket; bucket contents keep input order.
    """
    buckets: dict[MonthKey, list[TweetRecord]] = {}
    for record in records:
        buckets.setdefault(record.month, []).append(record)
    return dict(sorted(buckets.items()))


def write_partitions(buckets: dict[MonthKey, list[TweetRecord]], out_dir: str | Path) -> list[Path]:
    """Write one newline-delimited file per month bucket (YYYY-MM.ndjson)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for key, records in buckets.items():
        target = out_dir / f"{key}.ndjson"
        with target.open("w", encoding="utf-8") as handle:
            for record in records:
                handle.write(record.to_json() + "\n")
        written.append(target)
    return written


def read_partition_dir(path: str | Path) -> list[TweetRecord]:
    """Read back every partition file in chronological order."""
    path = Path(path)
    records: list[TweetRecord] = []
    for part in sorted(path.glob("*.ndjson")):
        loaded, _ = load_corpus(part, drop_non_english=False)
        records.extend(loaded)
    return records
