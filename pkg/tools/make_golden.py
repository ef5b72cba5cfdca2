#!/usr/bin/env python3
"""Regenerate tests/data/golden_sentences.json from the reference oracle.

The golden file freezes compound scores produced by the independent
transliteration of the published VADER method (tests/vader_reference.py);
the production engine must agree within 1e-4 per sentence. Sentences cover
every rule path: plain hits, boosters at all three distances, all-caps
emphasis, negators (including "no", "least", "never so", "without doubt"),
idioms, contrastive "but", emoticons, and punctuation emphasis.
"""
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from vader_reference import SentimentIntensityAnalyzer  # noqa: E402

SENTENCES = [
    # worked example with a published compound (0.6734) for this method
    "No fear that a hacker can get access to your camera or thermostat or "
    "other electronic devices. Your privacy is 100% protected because the "
    "technology is inside your electronics and not located on any server "
    "across the world.",
    "cyber attack quick response guide",
    "the rollout was good",
    "the rollout was very good",
    "the rollout was not good",
    "smart sensors are a great step for automation",
    "this update is terrible and the vendor support is awful",
    "VERY impressed with the new edge platform",
    "the demo was AMAZING!!!",
    "really really love the latency on this network",
    "hardly a failure, the pilot mostly worked",
    "never so happy with a firmware patch",
    "without doubt excellent hardware",
    "no problem with the migration",
    "at least the dashboard loads now",
    "least useful feature of the release",
    "the camera app is kind of slow",
    "the keynote was the bomb",
    "yeah right, totally secure this time",
    "new wearable is a kiss of death for battery life",
    "good sensors but the gateway keeps crashing",
    "is this outage serious???",
    "backup restored :) all clear",
    "ransomware everywhere :( patch your servers",
    "the audit found nothing wrong, surprisingly robust",
]


def main() -> None:
    analyzer = SentimentIntensityAnalyzer(
        str(ROOT / "src" / "adoptrace" / "data" / "vader_lexicon.txt"))
    rows = []
    for text in SENTENCES:
        scores = analyzer.polarity_scores(text)
        rows.append({"text": text, **scores})
        print(f"{scores['compound']:8.4f}  {text[:70]}")
    out = ROOT / "tests" / "data" / "golden_sentences.json"
    out.write_text(json.dumps(rows, indent=2, ensure_ascii=False) + "\n",
                   encoding="utf-8")
    print(f"wrote {len(rows)} golden rows to {out}")


if __name__ == "__main__":
    main()
