"""Independent reference implementations the engine is checked against.

Everything here is deliberately naive: plain double loops and direct
arithmetic, no shared code with the engine.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import numpy as np

from discussena.coder import CodedUtterance
from discussena.textprep import TokenizedDoc

_T0 = datetime(2024, 3, 1, 8, 0, tzinfo=timezone.utc)


def brute_force_counts(utterances, scope: str) -> dict[str, list[int]]:
    """Pair counts by literal enumeration over posts and code pairs."""
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    out: dict[str, list[int]] = {}
    for u in utterances:
        out.setdefault(u.student_id, [0] * len(pairs))
    for u in utterances:
        if scope == "initial_only" and not u.is_initial:
            continue
        for idx, (i, j) in enumerate(pairs):
            if u.codes[i] and u.codes[j]:
                out[u.student_id][idx] += 1
    return out


def synthetic_utterance(post_id: str, student: str, codes, is_initial: bool, minute: int = 0) -> CodedUtterance:
    codes = tuple(bool(c) for c in codes)
    matches = tuple((("kw", 0, 2),) if c else () for c in codes)
    return CodedUtterance(
        post_id=post_id,
        student_id=student,
        is_initial=is_initial,
        created_at=_T0 + timedelta(minutes=minute),
        text="kw text",
        codes=codes,
        matches=matches,
        codebook_version=1,
    )


def random_coded_corpus(rng: random.Random, max_students: int = 10, max_posts: int = 20):
    """A random small corpus of synthetic coded utterances."""
    n_students = rng.randint(1, max_students)
    n_posts = rng.randint(0, max_posts)
    students = [f"s{i:02d}" for i in range(n_students)]
    utterances = []
    for p in range(n_posts):
        student = rng.choice(students)
        density = rng.choice([0.15, 0.35, 0.6])
        codes = [rng.random() < density for _ in range(5)]
        utterances.append(
            synthetic_utterance(f"p{p:03d}", student, codes, is_initial=rng.random() < 0.5, minute=p)
        )
    return utterances


def placement_objective(weights: np.ndarray, points: np.ndarray, positions: np.ndarray) -> float:
    """Sum of squared gaps between network centroids and projected points."""
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    total = 0.0
    for u in range(weights.shape[0]):
        strength = float(weights[u].sum())
        if strength == 0:
            continue
        influence = np.zeros(5)
        for idx, (i, j) in enumerate(pairs):
            influence[i] += weights[u, idx]
            influence[j] += weights[u, idx]
        influence /= 2.0 * strength
        centroid = influence @ positions
        total += float(np.sum((centroid - points[u]) ** 2))
    return total


def planted_corpus(seed: int, n_docs: int = 500, doc_len: int = 50, words_per_topic: int = 10):
    """Corpus with five disjoint vocabularies; each document draws from one.

    Returns (docs, planted_sets).
    """
    rng = np.random.default_rng(seed)
    vocab = [[f"topic{t}word{w:02d}" for w in range(words_per_topic)] for t in range(5)]
    docs = []
    for d in range(n_docs):
        topic = d % 5
        words = rng.integers(0, words_per_topic, doc_len)
        tokens = tuple(vocab[topic][int(w)] for w in words)
        docs.append(TokenizedDoc(post_id=f"d{d:04d}", tokens=(), ngram_tokens=tokens))
    planted = [set(v) for v in vocab]
    return docs, planted


def aligned_overlap(keyword_sets: list[set[str]], planted: list[set[str]]) -> float:
    """Mean top-words overlap under greedy best-first topic alignment."""
    remaining = list(range(len(planted)))
    total = 0
    for extracted in keyword_sets:
        best = max(remaining, key=lambda p: len(extracted & planted[p]))
        total += len(extracted & planted[best])
        remaining.remove(best)
    return total / len(keyword_sets)
