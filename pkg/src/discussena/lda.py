"""Topic modeling via collapsed Gibbs sampling, fixed at five topics.

The sampler is bitwise deterministic for a given (corpus, seed): the
random source is numpy's PCG64 and documents are visited in corpus
order. The fitted model seeds the instructor's first codebook: topics
named "0".."4", ten keywords each.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codebook import Codebook, Topic, keyword_from_stems
from .textprep import TokenizedDoc

TOPIC_COUNT = 5
KEYWORDS_PER_TOPIC = 10

# A sharp document prior: discussion posts hug few topics, and a flatter
# prior (0.5) reliably wedges the chain into merged/split topic modes.
DEFAULT_ALPHA = 0.1
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000


class LdaError(ValueError):
    pass


class EmptyCorpus(LdaError):
    pass


class VocabTooSmall(LdaError):
    pass


@dataclass(frozen=True)
class LdaModel:
    K: int
    vocab: tuple[str, ...]
    topic_word: np.ndarray   # K x V, rows sum to 1
    doc_topic: np.ndarray    # D x K, rows sum to 1
    alpha: float
    beta: float
    iterations: int
    seed: int


def _gibbs(
    doc_of: list[int],
    word_of: list[int],
    n_docs: int,
    n_vocab: int,
    alpha: float,
    beta: float,
    iterations: int,
    rng: np.random.Generator,
) -> tuple[list[list[int]], list[list[int]]]:
    """Run the chain; returns final (doc x topic, topic x word) counts.

    The five-way unrolled inner loop is deliberate: the topic count is
    fixed by design and the sweep is the whole cost of a fit.
    """
    n_tokens = len(doc_of)
    z = [int(k) for k in rng.integers(0, TOPIC_COUNT, n_tokens)]
    n_dk = [[0] * TOPIC_COUNT for _ in range(n_docs)]
    n_kt = [[0] * n_vocab for _ in range(TOPIC_COUNT)]
    n_k = [0] * TOPIC_COUNT
    for i in range(n_tokens):
        k = z[i]
        n_dk[doc_of[i]][k] += 1
        n_kt[k][word_of[i]] += 1
        n_k[k] += 1

    kt0, kt1, kt2, kt3, kt4 = n_kt
    doc_rows = [n_dk[d] for d in doc_of]
    vbeta = n_vocab * beta
    nk0, nk1, nk2, nk3, nk4 = n_k

    for _ in range(iterations):
        u = rng.random(n_tokens).tolist()
        for i in range(n_tokens):
            t = word_of[i]
            k = z[i]
            row = doc_rows[i]
            row[k] -= 1
            if k == 0:
                kt0[t] -= 1; nk0 -= 1
            elif k == 1:
                kt1[t] -= 1; nk1 -= 1
            elif k == 2:
                kt2[t] -= 1; nk2 -= 1
            elif k == 3:
                kt3[t] -= 1; nk3 -= 1
            else:
                kt4[t] -= 1; nk4 -= 1
            w0 = (kt0[t] + beta) / (nk0 + vbeta) * (row[0] + alpha)
            w1 = w0 + (kt1[t] + beta) / (nk1 + vbeta) * (row[1] + alpha)
            w2 = w1 + (kt2[t] + beta) / (nk2 + vbeta) * (row[2] + alpha)
            w3 = w2 + (kt3[t] + beta) / (nk3 + vbeta) * (row[3] + alpha)
            w4 = w3 + (kt4[t] + beta) / (nk4 + vbeta) * (row[4] + alpha)
            r = u[i] * w4
            if r < w2:
                if r < w0:
                    k = 0; kt0[t] += 1; nk0 += 1
                elif r < w1:
                    k = 1; kt1[t] += 1; nk1 += 1
                else:
                    k = 2; kt2[t] += 1; nk2 += 1
            elif r < w3:
                k = 3; kt3[t] += 1; nk3 += 1
            else:
                k = 4; kt4[t] += 1; nk4 += 1
            z[i] = k
            row[k] += 1

    return n_dk, n_kt


def fit_lda(
    docs: Sequence[TokenizedDoc],
    seed: int,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
) -> LdaModel:
    """Fit the five-topic model on the collocation-joined token streams.

    Empty documents are skipped by the sampler and get uniform topic
    rows. Raises EmptyCorpus/VocabTooSmall on unusable input.
    """
    token_lists = [list(d.ngram_tokens) for d in docs]
    if not any(token_lists):
        raise EmptyCorpus("every document is empty")
    vocab = tuple(sorted({w for doc in token_lists for w in doc}))
    if len(vocab) < TOPIC_COUNT:
        raise VocabTooSmall(f"vocabulary has {len(vocab)} terms, need at least {TOPIC_COUNT}")
    word_index = {w: i for i, w in enumerate(vocab)}

    doc_of: list[int] = []
    word_of: list[int] = []
    for d, tokens in enumerate(token_lists):
        for w in tokens:
            doc_of.append(d)
            word_of.append(word_index[w])

    rng = np.random.Generator(np.random.PCG64(seed))
    n_dk, n_kt = _gibbs(doc_of, word_of, len(token_lists), len(vocab), alpha, beta, iterations, rng)

    topic_word = np.array(n_kt, dtype=float) + beta
    topic_word /= topic_word.sum(axis=1, keepdims=True)

    doc_topic = np.array(n_dk, dtype=float) + alpha
    doc_topic /= doc_topic.sum(axis=1, keepdims=True)
    for d, tokens in enumerate(token_lists):
        if not tokens:
            doc_topic[d] = 1.0 / TOPIC_COUNT

    return LdaModel(
        K=TOPIC_COUNT,
        vocab=vocab,
        topic_word=topic_word,
        doc_topic=doc_topic,
        alpha=alpha,
        beta=beta,
        iterations=iterations,
        seed=seed,
    )


def top_terms(model: LdaModel, topic: int, n: int = KEYWORDS_PER_TOPIC) -> list[str]:
    """Highest-probability terms for a topic; ties break alphabetically."""
    order = sorted(range(len(model.vocab)), key=lambda t: (-model.topic_word[topic, t], model.vocab[t]))
    return [model.vocab[t] for t in order[:n]]


def extract_codebook(model: LdaModel, discussion_id: str) -> Codebook:
    """First codebook from a fit: topics "0".."4", top terms as keywords.

    Vocabulary terms are stems already, so matchers are taken verbatim.
    """
    topics = tuple(
        Topic(name=str(k), keywords=tuple(keyword_from_stems(term) for term in top_terms(model, k)))
        for k in range(model.K)
    )
    return Codebook(discussion_id=discussion_id, version=1, topics=topics)
