"""Build group and individual network models from a small discussion.

Run: python demos/04_network_model.py   (writes demo-network.svg)
"""

from datetime import datetime, timedelta, timezone

from discussena import build_codebook, build_model, individual_network
from discussena.cli import _model_svg
from discussena.ena import PAIRS
from discussena.ingestion import Post

T0 = datetime(2024, 2, 1, 9, 0, tzinfo=timezone.utc)


def post(pid, author, text, parent=None, minutes=0):
    return Post(post_id=pid, discussion_id="demo", course_id="demo", author_id=author,
                parent_post_id=parent, created_at=T0 + timedelta(minutes=minutes),
                raw_text=text)


codebook = build_codebook("demo", [
    ("testing", ["testing", "black box"]),
    ("design", ["interface", "boundary"]),
    ("memory", ["recall", "retrieval"]),
    ("habits", ["practice", "spaced"]),
    ("feedback", ["feedback", "review"]),
])

posts = [
    post("p1", "ada", "Testing the interface boundary", minutes=0),
    post("p2", "ada", "Spaced practice with quick feedback", minutes=9),
    post("p3", "lin", "Black box testing needs recall and retrieval", minutes=3),
    post("p4", "lin", "A reply: practice plus feedback loops", parent="p3", minutes=12),
    post("p5", "kim", "Recall improves with spaced practice and review", minutes=5),
]

model = build_model(posts, codebook, scope="all")
print(f"variance explained: {model.variance_explained.round(3)}  fit: {model.fit}")
print("\ngroup edges (mean of unit-normalized weights):")
for idx, (i, j) in enumerate(PAIRS):
    w = float(model.group_mean[idx])
    if w > 0:
        bar = "=" * max(1, round(w * 30))
        print(f"  {model.topic_names[i]:9} -- {model.topic_names[j]:9} {bar} {w:.3f}")

print("\nstudent points (centroids of their own networks):")
for unit in model.units:
    x, y = unit.point
    print(f"  {unit.student_id}: ({x:+.3f}, {y:+.3f})")

view = individual_network(model, "lin")
print(f"\nlin's posts in scope: {[p.post_id for p in view.posts]}")

# same renderer the command-line driver uses
with open("demo-network.svg", "w") as fh:
    fh.write(_model_svg(model))
print("wrote demo-network.svg")
