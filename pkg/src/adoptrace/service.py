"""HTTP service backing the annotation campaign.

Serves sampled tweets with their referenced technology, records labels under
a per-sample cap and a one-label-per-(annotator, sample) rule, and exposes
progress with live agreement. Persistence is an append-only delimited log in
the evalkit annotation format; restarting the service rebuilds the exact
campaign state from that log.
"""
from __future__ import annotations

import json
import logging
import os
import random
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import evalkit
from .evalkit import ANNOTATION_HEADER, AnnotationRecord, UndefinedAlphaError
from .valence import Polarity

logger = logging.getLogger(__name__)

CHOICES = tuple(p.value for p in evalkit.LABEL_ORDER)

DEFAULT_INSTRUCTIONS = {
    "positive": "Reading this post makes you more inclined to adopt, "
                "integrate, or use the technology it mentions.",
    "negative": "Reading this post turns you against integrating or using "
                "the technology it mentions.",
    "neutral": "The post leaves you indifferent about the technology; it "
               "does not move your outlook either way.",
}


class CampaignError(Exception):
    """Campaign file or state problems."""


class UnknownSample(CampaignError):
    pass


class DuplicateSubmission(CampaignError):
    pass


class SampleClosed(CampaignError):
    pass


@dataclass(frozen=True)
class AnnotationTask:
    """One unit of annotator work: the text, its technology, the choices."""

    sample_id: str
    text: str
    aspect: str
    choices: tuple[str, ...] = CHOICES


@dataclass(frozen=True)
class CampaignSample:
    sample_id: str
    text: str
    aspect: str
    automated: Polarity | None = None


class Campaign:
    """In-memory campaign state guarded by a lock; log-backed."""

    def __init__(self, samples: list[CampaignSample], *, cap: int = 5, seed: int = 0,
                 log_path: str | Path | None = None,
                 instructions: Mapping[str, str] | None = None):
        if not samples:
            raise CampaignError("campaign has no samples")
        ids = [s.sample_id for s in samples]
        if len(set(ids)) != len(ids):
            raise CampaignError("duplicate sample ids in campaign")
        self.samples: dict[str, CampaignSample] = {s.sample_id: s for s in samples}
        self.cap = cap
        self.instructions = dict(instructions or DEFAULT_INSTRUCTIONS)
        self._rng = random.Random(seed)
        self._lock = threading.Lock()
        self._labels: dict[str, dict[str, AnnotationRecord]] = {s.sample_id: {} for s in samples}
        self._served: dict[str, set[str]] = {}
        self._order: list[AnnotationRecord] = []
        self.log_path = Path(log_path) if log_path else None
        if self.log_path and self.log_path.exists():
            self._repair_torn_tail()
            self._replay()

    @classmethod
    def from_file(cls, path: str | Path, *, log_path: str | Path | None = None,
                  cap: int | None = None, seed: int | None = None) -> "Campaign":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        samples = [
            CampaignSample(
                sample_id=str(item["sample_id"]),
                text=item["text"],
                aspect=item["aspect"],
                automated=Polarity(item["automated"]) if item.get("automated") else None,
            )
            for item in raw.get("samples", [])
        ]
        return cls(
            samples,
            cap=cap if cap is not None else int(raw.get("cap", 5)),
            seed=seed if seed is not None else int(raw.get("seed", 0)),
            log_path=log_path,
            instructions=raw.get("instructions"),
        )

    def _repair_torn_tail(self) -> None:
        # A crash can tear the final append; terminate it so later appends
        # start on a fresh line (the torn row itself is skipped at replay).
        data = self.log_path.read_bytes()
        if data and not data.endswith(b"\n"):
            logger.warning("%s does not end with a newline; sealing torn tail",
                           self.log_path)
            with self.log_path.open("ab") as handle:
                handle.write(b"\n")

    def _replay(self) -> None:
        # Tolerant row parsing: a crash can tear the final append, and one
        # bad row must not make the whole campaign unrecoverable.
        with self.log_path.open(encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if line_no == 1 or not line:
                    continue
                parts = line.split(",")
                try:
                    record = AnnotationRecord(
                        sample_id=parts[0], annotator_id=parts[1],
                        label=Polarity(parts[2]),
                        submitted_at=parts[3] if len(parts) > 3 else "")
                except (IndexError, ValueError):
                    logger.warning("%s:%d: unparseable log row skipped",
                                   self.log_path, line_no)
                    continue
                if record.sample_id not in self.samples:
                    logger.warning("log row for unknown sample %s ignored",
                                   record.sample_id)
                    continue
                self._labels[record.sample_id][record.annotator_id] = record
                self._order.append(record)
        logger.info("replayed %d annotations from %s", len(self._order), self.log_path)

    def _append(self, record: AnnotationRecord) -> None:
        if self.log_path is None:
            return
        new = not self.log_path.exists()
        with self.log_path.open("a", encoding="utf-8", newline="") as handle:
            if new:
                handle.write(",".join(ANNOTATION_HEADER) + "\n")
            handle.write(
                f"{record.sample_id},{record.annotator_id},"
                f"{record.label.value},{record.submitted_at}\n")
            handle.flush()
            os.fsync(handle.fileno())

    def _open_samples(self, annotator_id: str) -> list[str]:
        return [
            sid for sid, labels in self._labels.items()
            if annotator_id not in labels and len(labels) < self.cap
        ]

    def next_task(self, annotator_id: str) -> AnnotationTask | None:
        """A uniformly random open sample the annotator has not labelled.

        Samples already served to the same annotator are avoided while
        fresh candidates remain, so a fetch-only sequence walks distinct
        tasks; the avoidance set is in-memory only.
        """
        with self._lock:
            open_ids = self._open_samples(annotator_id)
            if not open_ids:
                return None
            served = self._served.setdefault(annotator_id, set())
            fresh = [sid for sid in open_ids if sid not in served]
            pool = fresh if fresh else open_ids
            sample_id = self._rng.choice(sorted(pool))
            served.add(sample_id)
            sample = self.samples[sample_id]
            return AnnotationTask(sample_id=sample.sample_id, text=sample.text,
                                  aspect=sample.aspect)

    def submit(self, annotator_id: str, sample_id: str, label: Polarity) -> AnnotationRecord:
        """Validate and persist one annotation atomically."""
        with self._lock:
            if sample_id not in self.samples:
                raise UnknownSample(sample_id)
            labels = self._labels[sample_id]
            if annotator_id in labels:
                raise DuplicateSubmission(f"{annotator_id} already labelled {sample_id}")
            if len(labels) >= self.cap:
                raise SampleClosed(f"sample {sample_id} already has {self.cap} labels")
            record = AnnotationRecord(
                sample_id=sample_id,
                annotator_id=annotator_id,
                label=label,
                submitted_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            )
            self._append(record)
            labels[annotator_id] = record
            self._order.append(record)
            return record

    def export_records(self) -> list[AnnotationRecord]:
        with self._lock:
            return list(self._order)

    def progress(self) -> dict:
        with self._lock:
            per_sample = {sid: len(labels) for sid, labels in self._labels.items()}
            total = sum(per_sample.values())
            records = list(self._order)
        try:
            report = evalkit.krippendorff_alpha(records)
            alpha = report.alpha
            full_agreement = report.full_agreement_count
        except UndefinedAlphaError:
            alpha = None
            full_agreement = 0
        return {
            "samples": per_sample,
            "n_samples": len(per_sample),
            "total_annotations": total,
            "target_annotations": len(per_sample) * self.cap,
            "complete": all(c >= self.cap for c in per_sample.values()),
            "alpha": alpha,
            "full_agreement_count": full_agreement,
        }


class SubmissionBody(BaseModel):
    annotator: str
    sample_id: str
    label: Polarity


def create_app(campaign: Campaign, ui_dir: str | Path | None = None) -> FastAPI:
    """Wire the campaign into HTTP endpoints plus optional static UI hosting."""
    app = FastAPI(title="adoptrace annotation service")
    app.state.campaign = campaign

    @app.get("/task")
    def get_task(annotator: str) -> Response:
        task = campaign.next_task(annotator)
        if task is None:
            return Response(status_code=204)
        return Response(
            content=json.dumps({
                "sample_id": task.sample_id,
                "text": task.text,
                "aspect": task.aspect,
                "choices": list(task.choices),
            }),
            media_type="application/json",
        )

    @app.post("/annotations", status_code=201)
    def post_annotation(body: SubmissionBody) -> dict:
        try:
            record = campaign.submit(body.annotator, body.sample_id, body.label)
        except UnknownSample as exc:
            raise HTTPException(status_code=404, detail=f"unknown sample: {exc}") from exc
        except DuplicateSubmission as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except SampleClosed as exc:
            raise HTTPException(status_code=410, detail=str(exc)) from exc
        return {
            "status": "recorded",
            "sample_id": record.sample_id,
            "annotator": record.annotator_id,
            "label": record.label.value,
        }

    @app.get("/progress")
    def get_progress() -> dict:
        return campaign.progress()

    @app.get("/instructions")
    def get_instructions() -> dict:
        return {"choices": list(CHOICES), "definitions": campaign.instructions}

    @app.get("/export")
    def get_export() -> Response:
        rows = [",".join(ANNOTATION_HEADER)]
        for record in campaign.export_records():
            rows.append(f"{record.sample_id},{record.annotator_id},"
                        f"{record.label.value},{record.submitted_at}")
        return Response(content="\n".join(rows) + "\n", media_type="text/csv")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app
