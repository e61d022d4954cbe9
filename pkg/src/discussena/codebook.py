"""The editable five-topic codebook.

Codebooks are immutable values; every successful edit returns a new one
with the version bumped. There are exactly five topics, always: edits can
rename topics and add/remove/replace keywords, nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Iterable, Sequence

from .textprep import load_stopwords, stem, tokenize

TOPIC_COUNT = 5
MAX_PHRASE_WORDS = 3

EDIT_KINDS = ("rename_topic", "add_keyword", "remove_keyword", "replace_keyword")


class CodebookError(ValueError):
    """Base class for rejected edits and malformed codebooks."""


class DuplicateKeyword(CodebookError):
    pass


class UnknownKeyword(CodebookError):
    pass


class DuplicateTopicName(CodebookError):
    pass


class EmptyName(CodebookError):
    pass


class PhraseTooLong(CodebookError):
    pass


class EmptyKeyword(CodebookError):
    """The phrase contains no matchable words (all stopwords)."""


class UnknownEditKind(CodebookError):
    pass


class BadTopicIndex(CodebookError):
    pass


@dataclass(frozen=True, slots=True)
class Keyword:
    """An instructor-entered phrase plus the stem sequence it matches on."""

    display: str
    matcher: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Topic:
    name: str
    keywords: tuple[Keyword, ...]


@dataclass(frozen=True, slots=True)
class Codebook:
    discussion_id: str
    version: int
    topics: tuple[Topic, ...]

    def topic_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.topics)


def make_keyword(display: str) -> Keyword:
    """Build a keyword from an entered phrase.

    The phrase is tokenized (hyphens split words), stopwords are dropped
    so multiword phrases like "illusion of mastery" stay matchable, and
    the remaining words are stemmed.
    """
    phrase = display.strip()
    if not phrase:
        raise EmptyName("keyword phrase is empty")
    if len(phrase.split()) > MAX_PHRASE_WORDS:
        raise PhraseTooLong(f"keyword phrases are at most {MAX_PHRASE_WORDS} words: {phrase!r}")
    stopwords = load_stopwords()
    words = [t.surface for t in tokenize(phrase)]
    matcher = tuple(stem(w) for w in words if w not in stopwords)
    if not matcher:
        raise EmptyKeyword(f"no matchable words in {phrase!r}")
    if len(matcher) > MAX_PHRASE_WORDS:
        raise PhraseTooLong(f"phrase splits into more than {MAX_PHRASE_WORDS} words: {phrase!r}")
    return Keyword(display=phrase, matcher=matcher)


def keyword_from_stems(stored: str) -> Keyword:
    """Keyword for an already-stemmed term ("rest_api"): matcher taken verbatim.

    Topic-model vocabulary terms are stems already; re-stemming them can
    drift (stems are not universally fixed points), so extraction must not
    go back through make_keyword.
    """
    parts = tuple(p for p in stored.split("_") if p)
    if not parts:
        raise EmptyKeyword(f"no stems in {stored!r}")
    return Keyword(display=stored, matcher=parts)


@dataclass(frozen=True, slots=True)
class CodebookEdit:
    """One edit instruction; fields beyond ``kind``/``topic_index`` depend on kind."""

    kind: str
    topic_index: int
    name: str | None = None
    phrase: str | None = None
    old_phrase: str | None = None
    new_phrase: str | None = None


def parse_edit(data: dict[str, Any]) -> CodebookEdit:
    kind = data.get("kind")
    if kind not in EDIT_KINDS:
        raise UnknownEditKind(f"unknown edit kind: {kind!r}")
    try:
        topic_index = int(data["topic_index"])
    except (KeyError, TypeError, ValueError):
        raise BadTopicIndex("topic_index must be an integer 0-4") from None
    return CodebookEdit(
        kind=kind,
        topic_index=topic_index,
        name=data.get("name"),
        phrase=data.get("phrase"),
        old_phrase=data.get("old_phrase"),
        new_phrase=data.get("new_phrase"),
    )


def _require(value: str | None, what: str) -> str:
    if value is None or not value.strip():
        raise EmptyName(f"{what} must be nonempty")
    return value.strip()


def _add_keyword(topic: Topic, keyword: Keyword) -> Topic:
    for existing in topic.keywords:
        if existing.display == keyword.display:
            raise DuplicateKeyword(f"{keyword.display!r} already in topic {topic.name!r}")
    # Same matcher under a different display ("black box" vs "black-box")
    # is allowed: both spellings stay visible and code identically.
    return replace(topic, keywords=topic.keywords + (keyword,))


def _remove_keyword(topic: Topic, display: str) -> Topic:
    kept = tuple(k for k in topic.keywords if k.display != display)
    if len(kept) == len(topic.keywords):
        raise UnknownKeyword(f"{display!r} not in topic {topic.name!r}")
    return replace(topic, keywords=kept)


def apply_edit(codebook: Codebook, edit: CodebookEdit) -> Codebook:
    """Apply one edit, returning a new codebook at version + 1.

    The input codebook is never mutated. Remove/replace targets are
    identified by display text, exact match.
    """
    if edit.kind not in EDIT_KINDS:
        raise UnknownEditKind(f"unknown edit kind: {edit.kind!r}")
    if not 0 <= edit.topic_index < TOPIC_COUNT:
        raise BadTopicIndex(f"topic_index out of range: {edit.topic_index}")

    topics = list(codebook.topics)
    topic = topics[edit.topic_index]

    if edit.kind == "rename_topic":
        name = _require(edit.name, "topic name")
        for i, t in enumerate(topics):
            if i != edit.topic_index and t.name == name:
                raise DuplicateTopicName(f"topic name {name!r} already used")
        topics[edit.topic_index] = replace(topic, name=name)
    elif edit.kind == "add_keyword":
        topics[edit.topic_index] = _add_keyword(topic, make_keyword(_require(edit.phrase, "keyword phrase")))
    elif edit.kind == "remove_keyword":
        topics[edit.topic_index] = _remove_keyword(topic, _require(edit.phrase, "keyword phrase"))
    else:  # replace_keyword
        old = _require(edit.old_phrase, "old keyword phrase")
        new_kw = make_keyword(_require(edit.new_phrase, "new keyword phrase"))
        position = next((i for i, k in enumerate(topic.keywords) if k.display == old), None)
        if position is None:
            raise UnknownKeyword(f"{old!r} not in topic {topic.name!r}")
        for i, k in enumerate(topic.keywords):
            if i != position and k.display == new_kw.display:
                raise DuplicateKeyword(f"{new_kw.display!r} already in topic {topic.name!r}")
        keywords = list(topic.keywords)
        keywords[position] = new_kw
        topics[edit.topic_index] = replace(topic, keywords=tuple(keywords))

    return Codebook(
        discussion_id=codebook.discussion_id,
        version=codebook.version + 1,
        topics=tuple(topics),
    )


def apply_batch(codebook: Codebook, edits: Iterable[CodebookEdit]) -> Codebook:
    """Apply edits in order as one atomic change: version bumps once.

    Any failing edit raises and leaves the caller with the original
    codebook untouched.
    """
    working = codebook
    for edit in edits:
        working = apply_edit(working, edit)
    return replace(working, version=codebook.version + 1)


def validate(codebook: Codebook) -> list[str]:
    """Check every structural invariant; returns violations (empty = ok)."""
    violations: list[str] = []
    if len(codebook.topics) != TOPIC_COUNT:
        violations.append(f"topic count != {TOPIC_COUNT} (got {len(codebook.topics)})")
    if codebook.version < 1:
        violations.append(f"version must be >= 1 (got {codebook.version})")
    names = [t.name for t in codebook.topics]
    for name in sorted({n for n in names if names.count(n) > 1}):
        violations.append(f"duplicate topic name {name!r}")
    for t_idx, topic in enumerate(codebook.topics):
        if not topic.name.strip():
            violations.append(f"topic {t_idx} has an empty name")
        displays = [k.display for k in topic.keywords]
        for d in sorted({d for d in displays if displays.count(d) > 1}):
            violations.append(f"topic {topic.name!r} lists keyword {d!r} twice")
        for kw in topic.keywords:
            if not kw.matcher or len(kw.matcher) > MAX_PHRASE_WORDS:
                violations.append(f"keyword {kw.display!r} has a bad matcher {kw.matcher!r}")
            elif any(not s or s != s.lower() for s in kw.matcher):
                violations.append(f"keyword {kw.display!r} has a non-lowercase or empty stem")
    return violations


def codebook_to_dict(codebook: Codebook) -> dict[str, Any]:
    return {
        "discussion_id": codebook.discussion_id,
        "version": codebook.version,
        "topics": [
            {
                "name": t.name,
                "keywords": [{"display": k.display, "matcher": list(k.matcher)} for k in t.keywords],
            }
            for t in codebook.topics
        ],
    }


def codebook_from_dict(data: dict[str, Any]) -> Codebook:
    topics = tuple(
        Topic(
            name=t["name"],
            keywords=tuple(Keyword(k["display"], tuple(k["matcher"])) for k in t["keywords"]),
        )
        for t in data["topics"]
    )
    return Codebook(discussion_id=data["discussion_id"], version=int(data["version"]), topics=topics)


def build_codebook(discussion_id: str, topics: Sequence[tuple[str, Sequence[str]]], version: int = 1) -> Codebook:
    """Assemble a codebook from (name, phrases) pairs, stemming each phrase.

    Repeated phrases within a topic collapse to one keyword.
    """
    if len(topics) != TOPIC_COUNT:
        raise CodebookError(f"a codebook has exactly {TOPIC_COUNT} topics")
    built = []
    for name, phrases in topics:
        seen: dict[str, Keyword] = {}
        for phrase in phrases:
            kw = make_keyword(phrase)
            seen.setdefault(kw.display, kw)
        built.append(Topic(name=name, keywords=tuple(seen.values())))
    return Codebook(discussion_id=discussion_id, version=version, topics=tuple(built))
