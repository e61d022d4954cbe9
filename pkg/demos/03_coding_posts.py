"""Code posts against a codebook and render the keyword highlights.

Run: python demos/03_coding_posts.py
"""

from datetime import datetime, timezone

from discussena import build_codebook, code_corpus, preprocess_corpus
from discussena.ingestion import Post


def post(pid, author, text):
    return Post(post_id=pid, discussion_id="demo", course_id="demo", author_id=author,
                parent_post_id=None, created_at=datetime(2024, 1, 1, tzinfo=timezone.utc),
                raw_text=text)


codebook = build_codebook("demo", [
    ("testing", ["black box", "black-box", "testing", "difficult"]),
    ("observability", ["visible", "observability", "getter"]),
    ("memory", ["illusion of mastery", "recall"]),
    ("structure", ["subclass", "interface"]),
    ("process", ["iterate", "review"]),
])

posts = [
    post("p1", "ada", "Black-box testing felt difficult until the state was visible."),
    post("p2", "lin", "An illusion of mastery: recall fails without testing."),
]
coded = code_corpus(preprocess_corpus(posts), posts, codebook)

for c in coded:
    print(f"\n{c.post_id} by {c.student_id}: codes {''.join('#' if x else '.' for x in c.codes)}")
    # spans index straight into the raw text, so a terminal "highlight"
    # is just brackets around each hit
    marks = sorted({(s, e) for topic in c.matches for _, s, e in topic})
    out, cursor = [], 0
    for s, e in marks:
        if s < cursor:
            continue  # overlapping hit already shown
        out.append(c.text[cursor:s])
        out.append("[" + c.text[s:e] + "]")
        cursor = e
    out.append(c.text[cursor:])
    print("  " + "".join(out))
    for t_idx, topic in enumerate(codebook.topics):
        if c.codes[t_idx]:
            hits = ", ".join(f"{d}@{s}" for d, s, e in c.matches[t_idx])
            print(f"  {topic.name}: {hits}")
