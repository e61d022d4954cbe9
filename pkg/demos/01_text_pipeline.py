"""Walk through the text pipeline: tokens, stems, stopwords, phrases.

Run: python demos/01_text_pipeline.py
"""

from discussena import detect_collocations, preprocess_corpus, remove_stopwords, stem, tokenize
from discussena.ingestion import Post
from datetime import datetime, timezone


def post(pid, text):
    return Post(post_id=pid, discussion_id="demo", course_id="demo", author_id="s1",
                parent_post_id=None, created_at=datetime(2024, 1, 1, tzinfo=timezone.utc),
                raw_text=text)


# Tokens carry their source spans, so highlights can point back into the
# original text. Hyphens split words; punctuation and digits separate.
text = "Black-box testing of the REST API boundary."
print(f"text: {text!r}")
for token in tokenize(text):
    print(f"  {token.surface!r:12} at [{token.start}:{token.end}]")

# Stopwords go, stems stay. Note the classic stem shapes.
kept = remove_stopwords(tokenize(text))
print("\nafter stopwords:", [t.surface for t in kept])
print("stems:          ", [stem(t.surface) for t in kept])

# Phrases that recur get fused into single tokens for topic modeling.
# "rest api" appears often enough below to clear the count and score bar.
corpus = [post(f"p{i}", "the REST API design") for i in range(15)]
corpus += [post("pad", " ".join(f"unique{j} filler{j}" for j in range(110)))]
docs = preprocess_corpus(corpus)
table = detect_collocations(docs)
print("\ndetected phrases:", dict(table.phrases))
print("joined doc 0:", docs[0].ngram_tokens)
