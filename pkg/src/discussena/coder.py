"""Apply a codebook to tokenized posts.

A keyword matches when its stem sequence appears consecutively in the
stopword-filtered token stream, so "illusion of mastery" still hits
"illusion of mastery" in the raw text even though "of" never reaches the
matcher. Codes are binary per post; spans are kept for highlighting.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .codebook import Codebook, Keyword, TOPIC_COUNT
from .ingestion import Post
from .textprep import TokenizedDoc


class PipelineMismatch(ValueError):
    """The tokenized doc does not belong to the post being coded."""


Span = tuple[str, int, int]  # (keyword display, start, end) in the raw text


@dataclass(frozen=True, slots=True)
class CodedUtterance:
    post_id: str
    student_id: str
    is_initial: bool
    created_at: datetime
    text: str
    codes: tuple[bool, ...]
    matches: tuple[tuple[Span, ...], ...]
    codebook_version: int


def _matcher_index(codebook: Codebook) -> dict[str, list[tuple[int, Keyword]]]:
    """First stem -> keywords starting with it, for one-pass scanning."""
    index: dict[str, list[tuple[int, Keyword]]] = {}
    for t_idx, topic in enumerate(codebook.topics):
        for kw in topic.keywords:
            index.setdefault(kw.matcher[0], []).append((t_idx, kw))
    return index


def _scan(doc: TokenizedDoc, index: dict[str, list[tuple[int, Keyword]]]) -> list[list[Span]]:
    stems = [t.stem for t in doc.tokens]
    n = len(stems)
    matches: list[list[Span]] = [[] for _ in range(TOPIC_COUNT)]
    # Within one keyword scanning is left-to-right non-overlapping;
    # different keywords may overlap freely.
    next_ok: dict[tuple[int, str], int] = {}
    for i, s in enumerate(stems):
        for t_idx, kw in index.get(s, ()):
            key = (t_idx, kw.display)
            if i < next_ok.get(key, 0):
                continue
            length = len(kw.matcher)
            if i + length <= n and tuple(stems[i : i + length]) == kw.matcher:
                matches[t_idx].append((kw.display, doc.tokens[i].start, doc.tokens[i + length - 1].end))
                next_ok[key] = i + length
    return matches


def code_post(doc: TokenizedDoc, post: Post, codebook: Codebook) -> CodedUtterance:
    """Code one post, recording every keyword hit with its character span."""
    if doc.post_id != post.post_id:
        raise PipelineMismatch(f"doc {doc.post_id!r} does not match post {post.post_id!r}")
    matches = _scan(doc, _matcher_index(codebook))
    return CodedUtterance(
        post_id=post.post_id,
        student_id=post.author_id,
        is_initial=post.is_initial,
        created_at=post.created_at,
        text=post.raw_text,
        codes=tuple(bool(m) for m in matches),
        matches=tuple(tuple(m) for m in matches),
        codebook_version=codebook.version,
    )


def code_corpus(docs: Sequence[TokenizedDoc], posts: Sequence[Post], codebook: Codebook) -> list[CodedUtterance]:
    """Code aligned docs/posts in order; this is the hot path of live editing."""
    if len(docs) != len(posts):
        raise PipelineMismatch(f"{len(docs)} docs vs {len(posts)} posts")
    index = _matcher_index(codebook)
    out = []
    for doc, post in zip(docs, posts):
        if doc.post_id != post.post_id:
            raise PipelineMismatch(f"doc {doc.post_id!r} does not match post {post.post_id!r}")
        matches = _scan(doc, index)
        out.append(
            CodedUtterance(
                post_id=post.post_id,
                student_id=post.author_id,
                is_initial=post.is_initial,
                created_at=post.created_at,
                text=post.raw_text,
                codes=tuple(bool(m) for m in matches),
                matches=tuple(tuple(m) for m in matches),
                codebook_version=codebook.version,
            )
        )
    return out
