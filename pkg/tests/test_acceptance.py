"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion. The scale criterion (A9) pushes 100,000 synthetic records through
the full pipeline three times (rerun + thread-count invariance), so this
module dominates suite runtime.
"""
from __future__ import annotations

import itertools
import json
import random
import time

import numpy as np
import pytest

from adoptrace.aspects import TermIndex, extract
from adoptrace.corpus import MonthKey, load_corpus
from adoptrace.evalkit import (LABEL_ORDER, AnnotationRecord, confusion,
                               gold_standard, krippendorff_alpha)
from adoptrace.pipeline import RunManifest, run_pipeline
from adoptrace.report import top_terms
from adoptrace.synth import TERMS, generate_corpus
from adoptrace.textprep import CleanText, PrepConfig, normalize
from adoptrace.trend import aggregate, aggregate_partial, finalize_all, merge_partials
from adoptrace.valence import Polarity, classify, normalize_sum, score
from naive_match import naive_extract
from test_aspects import TABLE_ROWS, TABLE_TERMS

P, N, U = Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL

WORKED_EXAMPLE_TWEET = (
    "no fear that a hacker can get access to your camera or thermostat or "
    "other electronic devices. your privacy is 100% protected because the "
    "technology is inside your electronics and not located on any server "
    "across the world."
)


def ok(line: str) -> None:
    print(f"\n[PASS] {line}")


def test_a1_threshold_bands():
    """classify() matches the documented bands exactly on 1e6 random compounds."""
    rng = np.random.default_rng(101)
    compounds = rng.uniform(-1.0, 1.0, size=1_000_000)
    expected = np.select(
        [compounds <= -0.05, compounds >= 0.05], [1, 0], default=2)
    mapping = {0: P, 1: N, 2: U}
    for value, code in zip(compounds.tolist(), expected.tolist()):
        assert classify(value) is mapping[code]
    assert classify(-0.05) is N
    assert classify(0.05) is P
    assert classify(0.049999) is U
    assert classify(-0.049999) is U
    assert classify(0.0) is U
    assert classify(1.0) is P and classify(-1.0) is N
    ok("A1 threshold bands: 1e6 random compounds + boundaries, zero tolerance")


def test_a2_valence_conformance(lexicon, golden_rows):
    """25-sentence golden file within 1e-4; worked tweet 0.6734 +- 5e-5; < 1 s."""
    assert len(golden_rows) == 25
    started = time.perf_counter()
    results = [score(row["text"], lexicon) for row in golden_rows]
    elapsed = time.perf_counter() - started
    for row, got in zip(golden_rows, results):
        assert abs(got.compound - row["compound"]) <= 1e-4, row["text"]
    tweet = score(WORKED_EXAMPLE_TWEET, lexicon)
    assert abs(tweet.compound - 0.6734) <= 5e-5
    assert elapsed < 1.0
    ok(f"A2 valence conformance: 25/25 within 1e-4, tweet={tweet.compound:.4f}, "
       f"{elapsed * 1000:.0f} ms")


def test_a3_normalization_law():
    """compound = S/sqrt(S^2+15) to 1e-12, strictly increasing, in (-1, 1)."""
    rng = random.Random(103)
    values = sorted({rng.uniform(-80.0, 80.0) for _ in range(100_000)}
                    | {-1e6, -100.0, -1.0, -1e-9, 0.0, 1e-9, 1.0, 100.0, 1e6})
    previous = None
    for s in values:
        got = normalize_sum(s, 15.0)
        assert abs(got - s / (s * s + 15.0) ** 0.5) <= 1e-12
        assert -1.0 < got < 1.0
        if previous is not None:
            assert got > previous
        previous = got
    ok("A3 normalization law: 1e5 sums, 1e-12 agreement, monotone, bounded")


def test_a4_aspect_extraction(tmp_path):
    """Table rows reproduce exactly; automaton == naive oracle on 10k texts."""
    from adoptrace.aspects import load_terms

    prep = PrepConfig(scrape_keywords=("IoT", "Internet of Things"))
    term_file = tmp_path / "terms.txt"
    term_file.write_text("\n".join(TABLE_TERMS) + "\n", encoding="utf-8")
    index = load_terms(term_file)
    for text, expected in TABLE_ROWS:
        got = {m.term for m in extract(normalize(text, prep), index)}
        assert got == expected, text

    vocab = list(TERMS) + ["ai", "edge computing", "bot", "botnet"]
    filler = ["the", "a", "went", "clouds", "5gx", "databank", "-", "x", "…",
              "smart", "native", "network", "learning"]
    rng = random.Random(104)
    oracle_index = TermIndex(vocab)
    for _ in range(10_000):
        k = rng.randrange(0, 14)
        words = [rng.choice(vocab) if rng.random() < 0.4 else rng.choice(filler)
                 for _ in range(k)]
        text = (" " if rng.random() < 0.9 else "-").join(words)
        view = CleanText(matching_view=text, sentiment_view=text)
        got = {m.term: m.span for m in extract(view, oracle_index)}
        assert got == naive_extract(text, vocab), text
    ok("A4 aspect extraction: 5/5 table rows exact; 10,000 random texts == naive oracle")


@pytest.fixture(scope="module")
def fixture_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("fixture")
    path = root / "fixture.ndjson"
    _, manifest = generate_corpus(1000, seed=2016, out_path=path)
    return path, manifest


def _scored_rows(path):
    records, _ = load_corpus(path)
    index = TermIndex(TERMS)
    from adoptrace.valence import default_lexicon
    lexicon = default_lexicon()
    rows = []
    for record in records:
        clean = normalize(record.raw_text)
        for mention in sorted(extract(clean, index, record.id),
                              key=lambda m: (m.span[0], m.term)):
            valence = score(clean.sentiment_view, lexicon)
            rows.append((mention, valence, classify(valence.compound), record.month))
    return rows


def test_a5_aggregation(fixture_corpus):
    """Worked per-class means reproduce; parallel merge == serial, bit for bit."""
    from adoptrace.aspects import AspectMention
    from adoptrace.valence import ValenceScore

    def cell_row(compound, polarity):
        return (AspectMention("4g network", "r", (0, 10)),
                ValenceScore(0, 0, 1, compound), polarity, MonthKey(2018, 12))

    cells = aggregate([cell_row(0.1027, P), cell_row(-0.58, N)])
    cell = cells[("4g network", MonthKey(2018, 12))]
    assert cell.mean_magnitude[P] == pytest.approx(0.1027, abs=1e-12)
    assert cell.mean_magnitude[N] == pytest.approx(0.58, abs=1e-12)
    assert cell.mean_magnitude[U] == 0.0
    assert cell.label is N

    path, _ = fixture_corpus
    rows = _scored_rows(path)
    assert rows, "fixture produced no scored rows"
    serial = aggregate(rows)
    for parts in (2, 4, 8):
        partials = [aggregate_partial(rows[i::parts]) for i in range(parts)]
        merged = finalize_all(merge_partials(partials))
        assert merged == serial
    ok(f"A5 aggregation: worked example labels negative; parallel merge == "
       f"serial on {len(rows)} fixture rows")


def _brute_force_alpha(table):
    units = {u: v for u, v in table.items() if len(v) > 1}
    n = sum(len(v) for v in units.values())
    d_o = sum(sum(a != b for a in v for b in v) / (len(v) - 1)
              for v in units.values()) / n
    pooled = [x for v in units.values() for x in v]
    d_e = sum(a != b for a in pooled for b in pooled) / (n * (n - 1))
    return 1.0 if d_e == 0 else 1.0 - d_o / d_e


def _records(table):
    return [AnnotationRecord(u, f"a{k}", label)
            for u, labels in table.items() for k, label in enumerate(labels)]


def test_a6_krippendorff_alpha():
    """Perfect agreement 1.0; worked example 2/3; 1,000 random tables vs oracle."""
    perfect = {f"s{i}": [P, P, P, P, P] for i in range(30)}
    assert krippendorff_alpha(_records(perfect)).alpha == 1.0

    worked = {"u1": [P, P], "u2": [N, N], "u3": [P, N], "u4": [U, U]}
    assert abs(krippendorff_alpha(_records(worked)).alpha - 2 / 3) <= 1e-9

    rng = random.Random(106)
    checked = 0
    while checked < 1000:
        table = {f"s{i}": [rng.choice(LABEL_ORDER)
                           for _ in range(rng.randrange(1, 6))]
                 for i in range(rng.randrange(2, 10))}
        if not any(len(v) >= 2 for v in table.values()):
            continue
        base = krippendorff_alpha(_records(table)).alpha
        assert base == pytest.approx(_brute_force_alpha(table), abs=1e-9)

        perm = rng.choice(list(itertools.permutations(LABEL_ORDER)))
        mapping = dict(zip(LABEL_ORDER, perm))
        renamed = {u: [mapping[x] for x in v] for u, v in table.items()}
        assert krippendorff_alpha(_records(renamed)).alpha == pytest.approx(base, abs=1e-9)

        rotated = {u: v[1:] + v[:1] for u, v in table.items()}
        assert krippendorff_alpha(_records(rotated)).alpha == pytest.approx(base, abs=1e-9)
        checked += 1
    ok("A6 alpha: perfect=1.0 exact, worked example=2/3 (1e-9), 1,000 random "
       "tables match brute-force oracle under label/annotator permutation")


TABLE2 = np.array([[37, 0, 13], [2, 45, 3], [8, 1, 41]])


def test_a7_evaluation_pipeline():
    """Synthetic annotations reproduce the published confusion matrix and rates."""
    annotations = []
    automated = {}
    sid = 0
    for row, auto_label in enumerate(LABEL_ORDER):
        for col, gold_label in enumerate(LABEL_ORDER):
            for _ in range(int(TABLE2[row, col])):
                sample = f"s{sid:03d}"
                sid += 1
                automated[sample] = auto_label
                annotations.extend(
                    AnnotationRecord(sample, f"a{k}", gold_label) for k in range(5))
    gold, ties = gold_standard(annotations)
    assert not ties and len(gold) == 150
    report = confusion(gold, automated)
    assert report.matrix.tolist() == TABLE2.tolist()
    assert report.agreement_count == 123
    assert report.agreement_rate == 123 / 150  # exactly 82.0%

    unanimous = {f"u{i:03d}": [P] * 5 for i in range(89)}
    split = {f"v{i:03d}": [P, P, P, N, N] for i in range(61)}
    agreement = krippendorff_alpha(_records({**unanimous, **split}))
    assert agreement.n_units == 150
    assert agreement.full_agreement_count == 89
    assert abs(agreement.full_agreement_rate * 100 - 59.3) <= 0.05
    ok(f"A7 evaluation pipeline: confusion == published matrix, agreement "
       f"{report.agreement_rate:.0%}; full agreement {agreement.full_agreement_rate:.1%}")


def test_a8_gold_standard():
    """Both documented adjudication cases reproduce."""
    four_one = [AnnotationRecord("s1", f"a{k}", N) for k in range(4)]
    four_one.append(AnnotationRecord("s1", "a4", U))
    gold, ties = gold_standard(four_one)
    assert gold[0].label is N and gold[0].method == "majority" and not ties

    two_two_one = [AnnotationRecord("s2", "a0", P), AnnotationRecord("s2", "a1", P),
                   AnnotationRecord("s2", "a2", U), AnnotationRecord("s2", "a3", U),
                   AnnotationRecord("s2", "a4", N)]
    gold, ties = gold_standard(two_two_one)
    assert not gold and ties == ["s2"]
    gold, ties = gold_standard(two_two_one, resolutions={"s2": U})
    assert gold[0].label is U and gold[0].method == "escalated" and not ties
    ok("A8 gold standard: 4-of-5 majority and 2-2-1 escalation reproduce")


@pytest.mark.slow
def test_a9_end_to_end_scale(tmp_path):
    """100k records end to end in < 60 s; hashes stable across runs and threads."""
    corpus_path = tmp_path / "scale.ndjson"
    generate_corpus(100_000, seed=424242, out_path=corpus_path)
    terms_path = tmp_path / "terms.txt"
    terms_path.write_text("\n".join(TERMS) + "\n", encoding="utf-8")

    def manifest(name: str, threads: int) -> RunManifest:
        return RunManifest(
            inputs=[str(corpus_path)], terms=str(terms_path),
            out_dir=str(tmp_path / name), seed=7, threads=threads,
            prep=PrepConfig(scrape_keywords=("iot", "internet of things")),
            report_formats=["csv", "svg"], top_terms=12)

    started = time.perf_counter()
    out1 = run_pipeline(manifest("run1", threads=1))
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"pipeline took {elapsed:.1f}s"

    out2 = run_pipeline(manifest("run2", threads=1))
    out8 = run_pipeline(manifest("run8", threads=8))
    hashes = [json.loads((d / "manifest.json").read_text(encoding="utf-8"))["files"]
              for d in (out1, out2, out8)]
    assert hashes[0] == hashes[1] == hashes[2]
    ok(f"A9 scale: 100k records in {elapsed:.1f}s; hashes identical across "
       f"rerun and 1 vs 8 threads")


def test_a10_annotation_service_round_trip(tmp_path):
    """Service endpoints, exercised directly: the secondary criterion's backend."""
    from fastapi.testclient import TestClient

    from adoptrace.service import Campaign, CampaignSample, create_app

    samples = [CampaignSample(f"s{i}", f"text {i} cloud", "cloud", P)
               for i in range(10)]
    campaign = Campaign(samples, cap=5, seed=3, log_path=tmp_path / "log.csv")
    client = TestClient(create_app(campaign))

    task = client.get("/task", params={"annotator": "ann1"}).json()
    body = {"annotator": "ann1", "sample_id": task["sample_id"], "label": "negative"}
    assert client.post("/annotations", json=body).status_code == 201
    assert f"{task['sample_id']},ann1,negative" in client.get("/export").text
    assert client.post("/annotations", json=body).status_code == 409

    target = "s7"
    for k in range(5):
        result = client.post("/annotations", json={
            "annotator": f"bot{k}", "sample_id": target, "label": "positive"})
        assert result.status_code == 201
    for k in range(60):
        response = client.get("/task", params={"annotator": f"probe{k}"})
        assert response.status_code == 200
        assert response.json()["sample_id"] != target
    assert client.post("/annotations", json={
        "annotator": "late", "sample_id": target, "label": "positive"}).status_code == 410

    unanimous = Campaign([CampaignSample("u1", "cloud text", "cloud", P),
                          CampaignSample("u2", "more cloud", "cloud", P)],
                         cap=2, seed=1)
    api = TestClient(create_app(unanimous))
    for annotator in ("x", "y"):
        for sample in ("u1", "u2"):
            api.post("/annotations", json={"annotator": annotator,
                                           "sample_id": sample, "label": "neutral"})
    progress = api.get("/progress").json()
    assert progress["alpha"] == 1.0
    assert progress["complete"] is True

    big = Campaign([CampaignSample(f"b{i:03d}", f"t{i} ai", "ai", P)
                    for i in range(150)], cap=5, seed=9)
    big_client = TestClient(create_app(big))
    for k in range(5):
        annotator = f"crowd{k}"
        while True:
            response = big_client.get("/task", params={"annotator": annotator})
            if response.status_code == 204:
                break
            sample_id = response.json()["sample_id"]
            assert big_client.post("/annotations", json={
                "annotator": annotator, "sample_id": sample_id,
                "label": "positive"}).status_code == 201
    progress = big_client.get("/progress").json()
    assert progress["total_annotations"] == 750
    assert progress["complete"] is True
    ok("A10 annotation service: round trip, duplicate 409, cap stops serving, "
       "unanimous alpha 1.0, 150x5=750 completes")
