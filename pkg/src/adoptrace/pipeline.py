"""End-to-end pipeline stages and the manifest-driven runner.

Stages communicate through files, so running the pipeline is equivalent to
chaining the per-stage subcommands. Every stage output is a pure function
of (inputs, config, seed): row order follows input order, floats print at
fixed precision, and the runner writes a manifest of output SHA-256 hashes
whose stability across runs and thread counts is the determinism contract.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import corpus, report, trend
from .aspects import TermIndex, extract, load_terms
from .corpus import MonthKey, TweetRecord
from .report import SectorFilter
from .textprep import CleanText, PrepConfig, normalize
from .valence import (Polarity, ValenceScore, classify, default_lexicon,
                      load_lexicon, score)

logger = logging.getLogger(__name__)

MENTION_HEADER = ("record_id", "period", "term", "start", "end",
                  "matching_view", "sentiment_view")
SCORED_HEADER = ("record_id", "period", "term", "compound", "pos", "neg", "neu",
                 "polarity", "matching_view")
CELL_HEADER = ("term", "period", "pos_count", "neg_count", "neu_count",
               "pos_mean", "neg_mean", "neu_mean", "label")


class PipelineStageError(Exception):
    """A stage failed; partial outputs up to that stage are preserved."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunManifest:
    """Configuration of one pipeline run."""

    inputs: list[str]
    terms: str
    out_dir: str
    lexicon: str | None = None
    seed: int = 0
    threads: int = 1
    granularity: str = "month"  # or "day"
    prep: PrepConfig = field(default_factory=PrepConfig)
    report_aspects: list[str] | None = None
    report_from: str | None = None
    report_to: str | None = None
    report_formats: list[str] = field(default_factory=lambda: ["csv", "svg"])
    top_terms: int = 30
    sectors: list[str] = field(default_factory=list)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunManifest":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        prep_raw = raw.get("prep", {})
        prep = PrepConfig(
            scrape_keywords=tuple(prep_raw.get("scrape_keywords", ())),
            preserve_case_for_sentiment=bool(prep_raw.get("preserve_case_for_sentiment", False)),
            drop_non_english=bool(prep_raw.get("drop_non_english", True)),
        )
        rep = raw.get("report", {})
        inputs = raw["input"]
        if isinstance(inputs, str):
            inputs = [inputs]
        return cls(
            inputs=[str(p) for p in inputs],
            terms=str(raw["terms"]),
            out_dir=str(raw["out_dir"]),
            lexicon=raw.get("lexicon"),
            seed=int(raw.get("seed", 0)),
            threads=int(raw.get("threads", 1)),
            granularity=raw.get("granularity", "month"),
            prep=prep,
            report_aspects=rep.get("aspects"),
            report_from=rep.get("from"),
            report_to=rep.get("to"),
            report_formats=list(rep.get("formats", ["csv", "svg"])),
            top_terms=int(rep.get("top_terms", 30)),
            sectors=[str(p) for p in raw.get("sectors", [])],
        )


def _chunked(items: Sequence, size: int = 2048) -> list[Sequence]:
    return [items[i:i + size] for i in range(0, len(items), size)]


def _pool_map(fn, chunks, threads: int) -> list:
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, chunks))
    return [fn(chunk) for chunk in chunks]


def _csv_writer(handle):
    return csv.writer(handle, lineterminator="\n")


def _period_of(record: TweetRecord, granularity: str) -> str:
    if granularity == "day":
        return record.created_at.date().isoformat()
    return str(record.month)


# --- stages -----------------------------------------------------------------

def stage_ingest(inputs: Sequence[str | Path], partitions_dir: str | Path,
                 prep: PrepConfig, threads: int = 1) -> dict:
    """Load, filter, dedupe, and partition the input record files."""
    all_records: list[TweetRecord] = []
    totals = corpus.IngestStats()
    seen: set[str] = set()
    for path in inputs:
        records, stats = corpus.load_corpus(
            path, drop_non_english=prep.drop_non_english, threads=threads)
        for name, value in stats.as_dict().items():
            setattr(totals, name, getattr(totals, name) + value)
        for record in records:
            if record.id in seen:
                totals.dropped_duplicate += 1
                totals.kept -= 1
                continue
            seen.add(record.id)
            all_records.append(record)
    buckets = corpus.partition_by_month(all_records)
    corpus.write_partitions(buckets, partitions_dir)
    return {"ingest": totals.as_dict(), "months": len(buckets)}


def _extract_chunk(args):
    records, prep, index, granularity = args
    rows = []
    max_terms = 0
    with_mentions = 0
    for record in records:
        clean = normalize(record.raw_text, prep)
        mentions = extract(clean, index, record.id)
        if not mentions:
            continue
        with_mentions += 1
        max_terms = max(max_terms, len(mentions))
        period = _period_of(record, granularity)
        for mention in sorted(mentions, key=lambda m: (m.span[0], m.term)):
            rows.append([record.id, period, mention.term, mention.span[0],
                         mention.span[1], clean.matching_view, clean.sentiment_view])
    return rows, with_mentions, max_terms


def stage_extract(partitions_dir: str | Path, terms_path: str | Path,
                  mentions_path: str | Path, prep: PrepConfig,
                  threads: int = 1, granularity: str = "month") -> dict:
    """Normalize each record and extract aspect mentions."""
    index = load_terms(terms_path)
    records = corpus.read_partition_dir(partitions_dir)
    chunks = [(chunk, prep, index, granularity) for chunk in _chunked(records)]
    results = _pool_map(_extract_chunk, chunks, threads)

    distinct_terms: set[str] = set()
    with Path(mentions_path).open("w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(MENTION_HEADER)
        total_rows = 0
        with_mentions = 0
        max_terms = 0
        for rows, chunk_with, chunk_max in results:
            with_mentions += chunk_with
            max_terms = max(max_terms, chunk_max)
            for row in rows:
                distinct_terms.add(row[2])
                writer.writerow(row)
                total_rows += 1
    return {
        "records_seen": len(records),
        "records_with_mentions": with_mentions,
        "records_without_mentions": len(records) - with_mentions,
        "mention_rows": total_rows,
        "distinct_terms_matched": len(distinct_terms),
        "max_terms_per_record": max_terms,
        "index_size": len(index),
    }


def _score_chunk(args):
    group, lexicon = args
    out = []
    for record_id, period, sentiment_view, matching_view, terms in group:
        result = score(sentiment_view, lexicon)
        polarity = classify(result.compound)
        for term in terms:
            out.append([
                record_id, period, term,
                f"{result.compound:.4f}", f"{result.pos:.4f}",
                f"{result.neg:.4f}", f"{result.neu:.4f}",
                polarity.value, matching_view,
            ])
    return out


def stage_score(mentions_path: str | Path, lexicon_path: str | Path | None,
                scored_path: str | Path, threads: int = 1) -> dict:
    """Score each mentioned record once and emit one row per record-term."""
    lexicon = load_lexicon(lexicon_path) if lexicon_path else default_lexicon()
    groups: list[tuple[str, str, str, str, list[str]]] = []
    current_id = None
    with Path(mentions_path).open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            if row["record_id"] != current_id:
                current_id = row["record_id"]
                groups.append((row["record_id"], row["period"],
                               row["sentiment_view"], row["matching_view"], []))
            groups[-1][4].append(row["term"])

    chunks = [(chunk, lexicon) for chunk in _chunked(groups, 1024)]
    results = _pool_map(_score_chunk, chunks, threads)
    counts = {p: 0 for p in Polarity}
    with Path(scored_path).open("w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(SCORED_HEADER)
        rows = 0
        for chunk_rows in results:
            for row in chunk_rows:
                counts[Polarity(row[7])] += 1
                writer.writerow(row)
                rows += 1
    return {
        "records_scored": len(groups),
        "scored_rows": rows,
        "rows_by_polarity": {p.value: c for p, c in counts.items()},
    }


def read_scored_rows(scored_path: str | Path) -> list[dict]:
    with Path(scored_path).open(encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def _rows_to_trend_input(rows: Iterable[dict]):
    from .aspects import AspectMention
    for row in rows:
        mention = AspectMention(term=row["term"], record_id=row["record_id"], span=(0, 0))
        valence = ValenceScore(pos=float(row["pos"]), neg=float(row["neg"]),
                               neu=float(row["neu"]), compound=float(row["compound"]))
        yield mention, valence, Polarity(row["polarity"]), row["period"]


def write_cells(cells, cells_path: str | Path) -> int:
    order = trend.CLASS_ORDER
    with Path(cells_path).open("w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(CELL_HEADER)
        n = 0
        for (term, period), cell in cells.items():
            writer.writerow(
                [term, period]
                + [cell.counts[c] for c in order]
                + [f"{cell.mean_magnitude[c]:.4f}" for c in order]
                + [cell.label.value])
            n += 1
    return n


def read_cells(cells_path: str | Path):
    """Cells file -> {(term, period): AspectMonthCell} with float means."""
    out = {}
    order = trend.CLASS_ORDER
    with Path(cells_path).open(encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            key = (row["term"], row["period"])
            out[key] = trend.AspectMonthCell(
                term=row["term"],
                month=row["period"],
                counts={
                    order[0]: int(row["pos_count"]),
                    order[1]: int(row["neg_count"]),
                    order[2]: int(row["neu_count"]),
                },
                mean_magnitude={
                    order[0]: float(row["pos_mean"]),
                    order[1]: float(row["neg_mean"]),
                    order[2]: float(row["neu_mean"]),
                },
                label=Polarity(row["label"]),
            )
    return out


def stage_aggregate(scored_path: str | Path, cells_path: str | Path) -> dict:
    rows = read_scored_rows(scored_path)
    cells = trend.aggregate(_rows_to_trend_input(rows))
    n = write_cells(cells, cells_path)
    return {"cells": n, "rows_aggregated": len(rows)}


def _month_cells(cells):
    """Keep cells whose period parses as YYYY-MM, re-keyed by MonthKey."""
    out = {}
    for (term, period), cell in cells.items():
        try:
            month = MonthKey.parse(str(period))
        except ValueError:
            continue
        out[(term, month)] = trend.AspectMonthCell(
            term=cell.term, month=month, counts=cell.counts,
            mean_magnitude=cell.mean_magnitude, label=cell.label)
    return out


def stage_report(cells_path: str | Path, out_dir: Path, manifest: "RunManifest",
                 mentions_path: str | Path | None = None,
                 suffix: str = "") -> dict:
    cells = _month_cells(read_cells(cells_path))
    month_range = None
    if manifest.report_from and manifest.report_to:
        month_range = (MonthKey.parse(manifest.report_from),
                       MonthKey.parse(manifest.report_to))
    grid = report.build_grid(cells, aspect_filter=manifest.report_aspects,
                             month_range=month_range)
    written = {}
    for fmt in manifest.report_formats:
        target = out_dir / f"report{suffix}.{fmt}"
        report.export(grid, target, fmt)
        written[fmt] = target.name
    if mentions_path is not None:
        from .aspects import AspectMention
        mentions = []
        with Path(mentions_path).open(encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                mentions.append(AspectMention(term=row["term"],
                                              record_id=row["record_id"],
                                              span=(int(row["start"]), int(row["end"]))))
        ranking = report.top_terms(mentions, manifest.top_terms) if mentions else []
        target = out_dir / f"top_terms{suffix}.csv"
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = _csv_writer(handle)
            writer.writerow(("term", "records"))
            writer.writerows(ranking)
        written["top_terms"] = target.name
    return {"grid_aspects": len(grid.aspects), "grid_months": len(grid.months),
            "files": written}


def filter_scored_rows_by_sector(rows: list[dict], sector: SectorFilter) -> list[dict]:
    """Keep rows of records whose matching view mentions a sector keyword."""
    index = TermIndex(sector.keywords, source_name=f"sector:{sector.name}")
    decision: dict[str, bool] = {}
    kept = []
    for row in rows:
        rid = row["record_id"]
        if rid not in decision:
            clean = CleanText(matching_view=row["matching_view"],
                              sentiment_view=row["matching_view"])
            decision[rid] = bool(extract(clean, index, rid))
        if decision[rid]:
            kept.append(row)
    return kept


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def run_pipeline(manifest: RunManifest) -> Path:
    """Execute ingest -> extract -> score -> aggregate -> report.

    Writes all artifacts plus a manifest of output hashes into
    ``manifest.out_dir``; any stage failure aborts with the stage name,
    preserving the outputs written so far.
    """
    out_dir = Path(manifest.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    partitions = out_dir / "partitions"
    mentions_path = out_dir / "mentions.csv"
    scored_path = out_dir / "scored.csv"
    cells_path = out_dir / "cells.csv"
    stats: dict[str, object] = {}
    started = time.perf_counter()

    def run_stage(name: str, fn, *args, **kwargs):
        try:
            result = fn(*args, **kwargs)
        except Exception as exc:
            raise PipelineStageError(name, exc) from exc
        stats[name] = result
        logger.info("stage %s done: %s", name, result)
        return result

    run_stage("ingest", stage_ingest, manifest.inputs, partitions,
              manifest.prep, manifest.threads)
    run_stage("extract", stage_extract, partitions, manifest.terms,
              mentions_path, manifest.prep, manifest.threads,
              manifest.granularity)
    run_stage("score", stage_score, mentions_path, manifest.lexicon,
              scored_path, manifest.threads)
    run_stage("aggregate", stage_aggregate, scored_path, cells_path)
    run_stage("report", stage_report, cells_path, out_dir, manifest,
              mentions_path=mentions_path)

    for sector_path in manifest.sectors:
        sector = SectorFilter.from_file(sector_path)

        def sector_stage():
            rows = read_scored_rows(scored_path)
            kept = filter_scored_rows_by_sector(rows, sector)
            sector_cells = trend.aggregate(_rows_to_trend_input(kept))
            target = out_dir / f"cells_{sector.name}.csv"
            write_cells(sector_cells, target)
            result = stage_report(target, out_dir, manifest, suffix=f"_{sector.name}")
            result["rows_kept"] = len(kept)
            return result

        run_stage(f"sector:{sector.name}", sector_stage)

    elapsed = time.perf_counter() - started
    files = {}
    for path in sorted(out_dir.rglob("*")):
        if path.is_file() and path.name != "manifest.json":
            files[str(path.relative_to(out_dir))] = _sha256(path)
    payload = {"stats": stats, "files": files}
    (out_dir / "manifest.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("pipeline finished in %.1fs", elapsed)
    return out_dir
