"""Deterministic text normalization for discussion posts.

Pipeline order: tokenize -> drop stopwords -> stem, then join frequent
bigrams/trigrams into single underscore tokens for topic modeling.
Everything here is pure; the same bytes in always give the same tokens
out.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence, TYPE_CHECKING

from .stemmer import porter_stem

if TYPE_CHECKING:
    from .ingestion import Post

# Words are maximal ASCII-letter runs: digits, punctuation, hyphens and
# underscores all act as separators, so "black-box" -> "black", "box".
_WORD_RE = re.compile(r"[A-Za-z]+")

# Collocation scoring defaults; see detect_collocations.
PHRASE_MIN_COUNT = 5
PHRASE_MIN_SCORE = 10.0
PHRASE_DISCOUNT = 5.0

STOPWORDS_ENV = "DISCUSSENA_STOPWORDS"


@dataclass(frozen=True, slots=True)
class Token:
    """One word occurrence: lowercased surface plus its source span."""

    surface: str
    stem: str
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class TokenizedDoc:
    """A post after normalization.

    ``tokens`` is the stopword-filtered, stemmed sequence (keyword
    matching runs on it); ``ngram_tokens`` is the same sequence after
    collocation joining (topic modeling runs on it).
    """

    post_id: str
    tokens: tuple[Token, ...]
    ngram_tokens: tuple[str, ...]


@dataclass(frozen=True)
class CollocationTable:
    """Underscore-joined stem phrases that clear the count/score bar."""

    bigrams: dict[str, int] = field(default_factory=dict)
    trigrams: dict[str, int] = field(default_factory=dict)

    @property
    def phrases(self) -> dict[str, int]:
        merged = dict(self.bigrams)
        merged.update(self.trigrams)
        return merged

    def __contains__(self, phrase: str) -> bool:
        return phrase in self.bigrams or phrase in self.trigrams


@lru_cache(maxsize=None)
def _stopwords_from(path: str | None) -> frozenset[str]:
    if path is None:
        text = resources.files("discussena.assets").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """The bundled English stopword list (negations deliberately kept out).

    ``path`` or the DISCUSSENA_STOPWORDS environment variable points at an
    alternative one-word-per-line file.
    """
    return _stopwords_from(path or os.environ.get(STOPWORDS_ENV) or None)


def tokenize(raw_text: str) -> list[Token]:
    """Split text into lowercased word tokens with source spans.

    Tokens come back pre-stem (``stem == surface``); empty input yields
    an empty list.
    """
    return [
        Token(m.group().lower(), m.group().lower(), m.start(), m.end())
        for m in _WORD_RE.finditer(raw_text)
    ]


@lru_cache(maxsize=65536)
def stem(token: str) -> str:
    """Porter stem of a lowercase token (memoized: corpora repeat words)."""
    return porter_stem(token)


def remove_stopwords(tokens: Sequence[Token], stopwords: frozenset[str] | None = None) -> list[Token]:
    """Drop tokens whose surface is a stopword; survivors keep their spans."""
    words = stopwords if stopwords is not None else load_stopwords()
    return [t for t in tokens if t.surface not in words]


def stem_tokens(tokens: Sequence[Token]) -> list[Token]:
    return [Token(t.surface, stem(t.surface), t.start, t.end) for t in tokens]


def _count_grams(docs: Iterable[Sequence[str]]) -> tuple[dict[str, int], dict[tuple[str, str], int], int]:
    unigrams: dict[str, int] = {}
    pairs: dict[tuple[str, str], int] = {}
    total = 0
    for doc in docs:
        total += len(doc)
        for w in doc:
            unigrams[w] = unigrams.get(w, 0) + 1
        for a, b in zip(doc, doc[1:]):
            pairs[(a, b)] = pairs.get((a, b), 0) + 1
    return unigrams, pairs, total


def _score_pairs(
    unigrams: dict[str, int],
    pairs: dict[tuple[str, str], int],
    total: int,
    min_count: int,
    min_score: float,
) -> dict[tuple[str, str], int]:
    kept: dict[tuple[str, str], int] = {}
    for (a, b), n_ab in pairs.items():
        if n_ab < min_count:
            continue
        score = (n_ab - PHRASE_DISCOUNT) * total / (unigrams[a] * unigrams[b])
        if score >= min_score:
            kept[(a, b)] = n_ab
    return kept


def _join_pass(doc: Sequence[str], joinable: set[tuple[str, str]]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(doc):
        if i + 1 < len(doc) and (doc[i], doc[i + 1]) in joinable:
            out.append(doc[i] + "_" + doc[i + 1])
            i += 2
        else:
            out.append(doc[i])
            i += 1
    return out


def detect_collocations(
    docs: Sequence[TokenizedDoc],
    min_count: int = PHRASE_MIN_COUNT,
    min_score: float = PHRASE_MIN_SCORE,
) -> CollocationTable:
    """Find corpus-frequent stem bigrams, then trigrams over the joined corpus.

    A pair qualifies when it occurs at least ``min_count`` times and
    (count(ab) - discount) * N / (count(a) * count(b)) >= ``min_score``,
    N being the corpus token count. Trigrams come from a second pass over
    the bigram-joined corpus; phrases never exceed three stems.
    """
    stem_docs = [[t.stem for t in d.tokens] for d in docs]
    unigrams, pairs, total = _count_grams(stem_docs)
    bigram_pairs = _score_pairs(unigrams, pairs, total, min_count, min_score)
    bigrams = {a + "_" + b: n for (a, b), n in bigram_pairs.items()}

    joined = [_join_pass(d, set(bigram_pairs)) for d in stem_docs]
    unigrams2, pairs2, total2 = _count_grams(joined)
    trigram_pairs = _score_pairs(unigrams2, pairs2, total2, min_count, min_score)
    trigrams = {}
    for (a, b), n in trigram_pairs.items():
        if a.count("_") + b.count("_") == 1:
            trigrams[a + "_" + b] = n
    return CollocationTable(bigrams=bigrams, trigrams=trigrams)


def apply_collocations(stems: Sequence[str], table: CollocationTable) -> list[str]:
    """Greedy left-to-right joining: bigram pass, then trigram pass."""
    bigram_pairs = {tuple(p.split("_")) for p in table.bigrams}
    out = _join_pass(stems, bigram_pairs)
    tri_pairs = set()
    for phrase in table.trigrams:
        a, b, c = phrase.split("_")
        tri_pairs.add((a + "_" + b, c))
        tri_pairs.add((a, b + "_" + c))
    return _join_pass(out, tri_pairs)


def preprocess_post(post_id: str, raw_text: str, stopwords: frozenset[str] | None = None) -> TokenizedDoc:
    tokens = stem_tokens(remove_stopwords(tokenize(raw_text), stopwords))
    return TokenizedDoc(post_id=post_id, tokens=tuple(tokens), ngram_tokens=tuple(t.stem for t in tokens))


def preprocess_corpus(
    posts: Sequence["Post"],
    collocations: CollocationTable | None = None,
    min_count: int = PHRASE_MIN_COUNT,
    min_score: float = PHRASE_MIN_SCORE,
) -> list[TokenizedDoc]:
    """Normalize every post and fill ngram_tokens via collocation joining.

    When no table is supplied, one is detected from this corpus.
    """
    stopwords = load_stopwords()
    docs = [preprocess_post(p.post_id, p.raw_text, stopwords) for p in posts]
    table = collocations if collocations is not None else detect_collocations(docs, min_count, min_score)
    return [
        TokenizedDoc(
            post_id=d.post_id,
            tokens=d.tokens,
            ngram_tokens=tuple(apply_collocations([t.stem for t in d.tokens], table)),
        )
        for d in docs
    ]
