"""Fit the five-topic model on a synthetic corpus and edit the codebook.

Run: python demos/02_topic_codebook.py
"""

import numpy as np

from discussena import apply_edit, extract_codebook, fit_lda, validate
from discussena.codebook import CodebookEdit
from discussena.textprep import TokenizedDoc

# Five disjoint vocabularies, one per planted theme; each document sticks
# to a single theme. Real corpora are messier, but this makes the model's
# job visible.
themes = [
    ["recursion", "stack", "base", "call", "depth", "return"],
    ["socket", "packet", "port", "listen", "buffer", "stream"],
    ["matrix", "vector", "basis", "rank", "norm", "product"],
    ["lexer", "parser", "token", "grammar", "tree", "rule"],
    ["thread", "lock", "race", "mutex", "atomic", "deadlock"],
]
rng = np.random.default_rng(0)
docs = []
for d in range(200):
    words = rng.choice(themes[d % 5], size=30)
    docs.append(TokenizedDoc(post_id=f"d{d}", tokens=(), ngram_tokens=tuple(words)))

model = fit_lda(docs, seed=11, iterations=300)
codebook = extract_codebook(model, "demo-discussion")

print("starter codebook (topics are just numbers until renamed):")
for topic in codebook.topics:
    print(f"  {topic.name}: {', '.join(k.display for k in topic.keywords[:6])} ...")

# Instructors rename topics and adjust keywords; each edit is a new version.
renamed = apply_edit(codebook, CodebookEdit(kind="rename_topic", topic_index=0, name="concurrency"))
extended = apply_edit(renamed, CodebookEdit(kind="add_keyword", topic_index=0, phrase="starvation"))
print("\nafter two edits -> version", extended.version)
print("violations:", validate(extended) or "none")
