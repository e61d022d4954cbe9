"""Export a coded corpus to CSV and read it back, losslessly.

Run: python demos/05_csv_roundtrip.py
"""

from datetime import datetime, timezone

from discussena import build_codebook, code_corpus, export_csv, import_csv, preprocess_corpus
from discussena.ingestion import Post


def post(pid, author, text):
    return Post(post_id=pid, discussion_id="demo", course_id="demo", author_id=author,
                parent_post_id=None, created_at=datetime(2024, 1, 5, tzinfo=timezone.utc),
                raw_text=text)


codebook = build_codebook("demo", [
    ("testing", ["testing"]), ("design", ["interface"]), ("memory", ["recall"]),
    ("habits", ["practice"]), ("feedback", ["feedback"]),
])

# Awkward text on purpose: the CSV layer has to quote commas, quotes and
# newlines and still round-trip exactly.
posts = [
    post("p1", "ada", 'She said, "testing first" and moved on'),
    post("p2", "lin", "two lines of thought\nabout interface practice"),
]
coded = code_corpus(preprocess_corpus(posts), posts, codebook)
data = export_csv(coded, codebook)
print(data.decode("utf-8"))

back = import_csv(data)
print("topics:", back.topic_names)
for p, codes in zip(back.posts, back.codes):
    print(f"  {p.post_id} {p.author_id} codes={codes} text={p.raw_text!r}")

assert [p.raw_text for p in back.posts] == [p.raw_text for p in sorted(posts, key=lambda q: q.author_id)]
print("round trip exact: yes")
