"""The live-editing loop over HTTP: edit the codebook, watch the model move.

Run: python demos/06_service_loop.py   (uses the in-process test client;
`discussena serve` runs the same app on a real port)
"""

import tempfile
from datetime import datetime, timedelta, timezone

from fastapi.testclient import TestClient

from discussena.ingestion import Post
from discussena.service import ServiceConfig, create_app
from discussena.store import DataStore

T0 = datetime(2024, 2, 1, 9, 0, tzinfo=timezone.utc)


def post(pid, author, text, minutes=0):
    return Post(post_id=pid, discussion_id="demo", course_id="c1", author_id=author,
                parent_post_id=None, created_at=T0 + timedelta(minutes=minutes),
                raw_text=text)


data_dir = tempfile.mkdtemp(prefix="discussena-demo-")
DataStore(data_dir).save_posts("demo", [
    post("p1", "ada", "testing the interface boundary design today", 0),
    post("p2", "lin", "spaced practice recall with feedback review testing", 1),
    post("p3", "kim", "interface practice and recall routines feedback", 2),
    post("p4", "ada", "boundary recall testing structure practice design", 3),
])

client = TestClient(create_app(ServiceConfig(data_dir=data_dir, lda_iterations=80)))

# First visit: the starter codebook is generated on demand (topic model).
codebook = client.get("/discussions/demo/codebook").json()
print("starter version:", codebook["version"])
for topic in codebook["codebook"]["topics"]:
    print(" ", topic["name"], [k["display"] for k in topic["keywords"]][:5], "...")

model = client.get("/discussions/demo/model?scope=all").json()
print("\nedges with weight > 0:", sum(1 for e in model["edges"] if e["weight"] > 0))
print("students:", [u["student_id"] for u in model["units"]])

# Rename a topic and drop a keyword; the model recomputes for version 2.
response = client.put("/discussions/demo/codebook", json={
    "base_version": codebook["version"],
    "edits": [
        {"kind": "rename_topic", "topic_index": 0, "name": "core ideas"},
        {"kind": "remove_keyword", "topic_index": 0,
         "phrase": codebook["codebook"]["topics"][0]["keywords"][0]["display"]},
    ],
})
print("\nPUT ->", response.status_code, "version", response.json()["version"])

updated = client.get("/discussions/demo/model?scope=all").json()
print("model now at codebook version:", updated["codebook_version"])
print("first topic name:", updated["topic_names"][0])

csv_out = client.get("/discussions/demo/export.csv")
print("\nexport.csv:", csv_out.headers["content-type"], f"{len(csv_out.content)} bytes")
