"""Command line interface: per-stage subcommands plus the manifest runner."""
from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import evalkit, pipeline, report as report_mod, synth, trend
from .corpus import MonthKey
from .pipeline import PipelineStageError, RunManifest
from .report import SectorFilter
from .service import Campaign, create_app
from .textprep import PrepConfig
from .valence import Polarity

logger = logging.getLogger(__name__)


def _load_prep(config_path: str | None) -> PrepConfig:
    if not config_path:
        return PrepConfig()
    raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
    prep_raw = raw.get("prep", raw)
    return PrepConfig(
        scrape_keywords=tuple(prep_raw.get("scrape_keywords", ())),
        preserve_case_for_sentiment=bool(prep_raw.get("preserve_case_for_sentiment", False)),
        drop_non_english=bool(prep_raw.get("drop_non_english", True)),
    )


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for sampling and task order.")
@click.option("--threads", default=1, show_default=True, help="Worker threads per stage.")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True),
              help="JSON config: run manifest for `run`, prep settings elsewhere.")
@click.option("-v", "--verbose", is_flag=True, help="Log at INFO level.")
@click.pass_context
def main(ctx, seed, threads, config_path, verbose):
    """Track likely adoption of emerging technologies across a text corpus."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed, "threads": threads, "config_path": config_path}


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def ingest(ctx, inputs, out_dir):
    """Load record files and write month partitions."""
    prep = _load_prep(ctx.obj["config_path"])
    stats = pipeline.stage_ingest(inputs, out_dir, prep, ctx.obj["threads"])
    click.echo(json.dumps(stats, indent=2, sort_keys=True))


@main.command()
@click.option("--terms", required=True, type=click.Path(exists=True))
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--granularity", type=click.Choice(["month", "day"]), default="month",
              show_default=True)
@click.pass_context
def extract(ctx, terms, in_dir, out_path, granularity):
    """Extract aspect mentions from a partition directory."""
    prep = _load_prep(ctx.obj["config_path"])
    stats = pipeline.stage_extract(in_dir, terms, out_path, prep,
                                   ctx.obj["threads"], granularity)
    click.echo(json.dumps(stats, indent=2, sort_keys=True))


@main.command()
@click.option("--lexicon", "lexicon_path", default=None, type=click.Path(exists=True),
              help="Token<TAB>valence file; bundled lexicon when omitted.")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def score(ctx, lexicon_path, in_path, out_path):
    """Score mentioned records and classify their polarity."""
    stats = pipeline.stage_score(in_path, lexicon_path, out_path, ctx.obj["threads"])
    click.echo(json.dumps(stats, indent=2, sort_keys=True))


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def aggregate(in_path, out_path):
    """Aggregate scored rows into per-(aspect, period) cells."""
    stats = pipeline.stage_aggregate(in_path, out_path)
    click.echo(json.dumps(stats, indent=2, sort_keys=True))


@main.command(name="report")
@click.option("--cells", "cells_path", default=None, type=click.Path(exists=True))
@click.option("--scored", "scored_path", default=None, type=click.Path(exists=True))
@click.option("--mentions", "mentions_path", default=None, type=click.Path(exists=True),
              help="Mentions file for --top ranking output.")
@click.option("--sector", "sector_path", default=None, type=click.Path(exists=True),
              help="Sector keyword config; needs --scored input.")
@click.option("--aspects", default=None, help="Comma-separated aspect filter.")
@click.option("--from", "from_month", default=None, help="First month (YYYY-MM).")
@click.option("--to", "to_month", default=None, help="Last month (YYYY-MM).")
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="csv",
              show_default=True)
@click.option("--top", "top_k", default=None, type=int,
              help="Write the top-K term ranking instead of a grid.")
@click.option("--out", "out_path", required=True, type=click.Path())
def report_cmd(cells_path, scored_path, mentions_path, sector_path, aspects,
               from_month, to_month, fmt, top_k, out_path):
    """Render timeline grids, rankings, and sector views."""
    if top_k is not None:
        if not mentions_path:
            raise click.UsageError("--top needs --mentions")
        import csv as _csv

        from .aspects import AspectMention
        with Path(mentions_path).open(encoding="utf-8", newline="") as handle:
            mentions = [AspectMention(term=row["term"], record_id=row["record_id"],
                                      span=(int(row["start"]), int(row["end"])))
                        for row in _csv.DictReader(handle)]
        ranking = report_mod.top_terms(mentions, top_k)
        with Path(out_path).open("w", encoding="utf-8", newline="") as handle:
            writer = _csv.writer(handle, lineterminator="\n")
            writer.writerow(("term", "records"))
            writer.writerows(ranking)
        click.echo(f"wrote {out_path}")
        return

    if sector_path:
        if not scored_path:
            raise click.UsageError("--sector filters records, so it needs --scored")
        sector = SectorFilter.from_file(sector_path)
        rows = pipeline.read_scored_rows(scored_path)
        rows = pipeline.filter_scored_rows_by_sector(rows, sector)
        cells = trend.aggregate(pipeline._rows_to_trend_input(rows))
    elif scored_path:
        rows = pipeline.read_scored_rows(scored_path)
        cells = trend.aggregate(pipeline._rows_to_trend_input(rows))
    elif cells_path:
        cells = pipeline.read_cells(cells_path)
    else:
        raise click.UsageError("need --cells or --scored input")

    month_cells = pipeline._month_cells(cells)
    month_range = None
    if from_month and to_month:
        month_range = (MonthKey.parse(from_month), MonthKey.parse(to_month))
    aspect_filter = [a.strip() for a in aspects.split(",")] if aspects else None
    grid = report_mod.build_grid(month_cells, aspect_filter=aspect_filter,
                                 month_range=month_range)
    report_mod.export(grid, out_path, fmt)
    click.echo(f"wrote {out_path}")


@main.group()
def eval():
    """Ground-truth tooling: sample, alpha, gold, confusion."""


@eval.command()
@click.option("--scored", "scored_path", required=True, type=click.Path(exists=True))
@click.option("--per-class", default=50, show_default=True)
@click.option("--cap", default=5, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def sample(ctx, scored_path, per_class, cap, out_path):
    """Draw a stratified sample and write an annotation campaign file."""
    import random

    rows = pipeline.read_scored_rows(scored_path)
    by_record: dict[str, dict] = {}
    terms: dict[str, list[str]] = {}
    for row in rows:
        by_record.setdefault(row["record_id"], row)
        terms.setdefault(row["record_id"], []).append(row["term"])
    labelled = {rid: Polarity(row["polarity"]) for rid, row in by_record.items()}
    seed = ctx.obj["seed"]
    chosen = evalkit.stratified_sample(labelled, per_class, seed)
    rng = random.Random(seed + 1)
    samples = []
    for rid in chosen:
        row = by_record[rid]
        samples.append({
            "sample_id": rid,
            "text": row["matching_view"],
            "aspect": rng.choice(sorted(terms[rid])),
            "automated": row["polarity"],
        })
    payload = {"cap": cap, "seed": seed, "samples": samples}
    Path(out_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")
    click.echo(f"wrote campaign of {len(samples)} samples to {out_path}")


@eval.command()
@click.option("--annotations", "ann_path", required=True, type=click.Path(exists=True))
def alpha(ann_path):
    """Inter-annotator agreement over an annotation file."""
    records = evalkit.read_annotations(ann_path)
    rep = evalkit.krippendorff_alpha(records)
    click.echo(json.dumps({
        "alpha": round(rep.alpha, 4),
        "n_units": rep.n_units,
        "n_annotations": rep.n_annotations,
        "full_agreement_count": rep.full_agreement_count,
        "full_agreement_rate": round(rep.full_agreement_rate, 4),
    }, indent=2, sort_keys=True))


@eval.command()
@click.option("--annotations", "ann_path", required=True, type=click.Path(exists=True))
@click.option("--resolutions", "res_path", default=None, type=click.Path(exists=True),
              help="JSON {sample_id: label} escalation decisions.")
@click.option("--out", "out_path", required=True, type=click.Path())
def gold(ann_path, res_path, out_path):
    """Build the majority gold standard; ties go to the escalation queue."""
    import csv as _csv

    records = evalkit.read_annotations(ann_path)
    resolutions = {}
    if res_path:
        raw = json.loads(Path(res_path).read_text(encoding="utf-8"))
        resolutions = {k: Polarity(v) for k, v in raw.items()}
    labels, tie_queue = evalkit.gold_standard(records, resolutions)
    with Path(out_path).open("w", encoding="utf-8", newline="") as handle:
        writer = _csv.writer(handle, lineterminator="\n")
        writer.writerow(("sample_id", "label", "method"))
        for entry in labels:
            writer.writerow((entry.sample_id, entry.label.value, entry.method))
    click.echo(f"wrote {len(labels)} gold labels to {out_path}")
    if tie_queue:
        click.echo("unresolved ties: " + ", ".join(tie_queue))


@eval.command()
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True))
@click.option("--campaign", "campaign_path", required=True, type=click.Path(exists=True),
              help="Campaign file supplying the automated labels.")
def confusion(gold_path, campaign_path):
    """Confusion matrix of automated labels vs the gold standard."""
    import csv as _csv

    with Path(gold_path).open(encoding="utf-8", newline="") as handle:
        gold_labels = [evalkit.GoldLabel(row["sample_id"], Polarity(row["label"]),
                                         row["method"])
                       for row in _csv.DictReader(handle)]
    raw = json.loads(Path(campaign_path).read_text(encoding="utf-8"))
    automated = {item["sample_id"]: Polarity(item["automated"])
                 for item in raw["samples"]}
    rep = evalkit.confusion(gold_labels, automated)
    order = [p.value for p in rep.labels]
    click.echo(json.dumps({
        "labels": order,
        "matrix": rep.matrix.tolist(),
        "agreement_count": rep.agreement_count,
        "agreement_rate": round(rep.agreement_rate, 4),
    }, indent=2, sort_keys=True))


@main.command()
@click.option("--campaign", "campaign_path", required=True, type=click.Path(exists=True))
@click.option("--log", "log_path", required=True, type=click.Path())
@click.option("--port", default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--cap", default=None, type=int, help="Override the campaign cap.")
@click.option("--ui", "ui_dir", default=None, type=click.Path(),
              help="Static UI bundle directory (frontend/dist).")
@click.pass_context
def serve(ctx, campaign_path, log_path, port, host, cap, ui_dir):
    """Run the annotation service."""
    import uvicorn

    campaign = Campaign.from_file(campaign_path, log_path=log_path, cap=cap,
                                  seed=ctx.obj["seed"])
    default_ui = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    ui = Path(ui_dir) if ui_dir else default_ui
    app = create_app(campaign, ui_dir=ui if ui.is_dir() else None)
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.option("--n", "n_records", default=1000, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--manifest", "manifest_path", default=None, type=click.Path())
@click.pass_context
def synth_cmd(ctx, n_records, out_path, manifest_path):
    """Generate a synthetic fixture corpus plus its ground-truth manifest."""
    _, manifest = synth.generate_corpus(n_records, ctx.obj["seed"], out_path)
    if manifest_path:
        Path(manifest_path).write_text(manifest.to_json() + "\n", encoding="utf-8")
    click.echo(f"wrote {n_records} records to {out_path}")


main.add_command(synth_cmd, name="synth")


@main.command()
@click.option("--manifest", "manifest_path", default=None, type=click.Path(exists=True),
              help="Run manifest; falls back to the global --config.")
@click.pass_context
def run(ctx, manifest_path):
    """Run the full pipeline from a manifest file."""
    path = manifest_path or ctx.obj["config_path"]
    if not path:
        raise click.UsageError("supply --manifest or the global --config")
    manifest = RunManifest.from_file(path)
    if ctx.obj["threads"] != 1:
        manifest.threads = ctx.obj["threads"]
    if ctx.obj["seed"]:
        manifest.seed = ctx.obj["seed"]
    try:
        out_dir = pipeline.run_pipeline(manifest)
    except PipelineStageError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"artifacts in {out_dir}")


if __name__ == "__main__":
    main()
