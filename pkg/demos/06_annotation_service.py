"""The annotation service, exercised in-process.

Builds a small campaign, drives the HTTP endpoints through a test client
(fetch task -> submit -> progress -> export), and shows the crash recovery:
a second service instance rebuilt from the append-only log reports the same
state. To host it for real annotators:

    adoptrace serve --campaign campaign.json --log annotations.csv --port 8765
"""
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from adoptrace.service import Campaign, CampaignSample, create_app
from adoptrace.valence import Polarity

workdir = Path(tempfile.mkdtemp(prefix="adoptrace-demo-"))
log_path = workdir / "annotations.csv"

samples = [
    CampaignSample("s1", "no fear of hackers, the camera feed is protected",
                   "camera", Polarity.POSITIVE),
    CampaignSample("s2", "another malware wave hit the plant sensors",
                   "malware", Polarity.NEGATIVE),
    CampaignSample("s3", "cloud migration briefing scheduled", "cloud",
                   Polarity.NEUTRAL),
]
campaign = Campaign(samples, cap=5, seed=1, log_path=log_path)
client = TestClient(create_app(campaign))

print("instructions:", client.get("/instructions").json()["definitions"]["positive"])

for annotator in ("alice", "bob"):
    while True:
        response = client.get("/task", params={"annotator": annotator})
        if response.status_code == 204:
            break
        task = response.json()
        label = "negative" if "malware" in task["text"] else "positive"
        client.post("/annotations", json={"annotator": annotator,
                                          "sample_id": task["sample_id"],
                                          "label": label})
    print(f"{annotator} finished their queue")

progress = client.get("/progress").json()
print(f"progress: {progress['total_annotations']} annotations, "
      f"alpha={progress['alpha']}")
print("export preview:")
for line in client.get("/export").text.splitlines()[:4]:
    print("   ", line)

# Crash recovery: a fresh instance replays the log to the same state.
reborn = Campaign(samples, cap=5, seed=1, log_path=log_path)
print("state after replay matches:", reborn.progress() == campaign.progress())
