from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from discussena.codebook import Codebook, Topic, build_codebook, keyword_from_stems
from discussena.ingestion import Post

T0 = datetime(2024, 1, 8, 9, 0, tzinfo=timezone.utc)


def make_post(
    post_id: str,
    author: str,
    text: str,
    parent: str | None = None,
    minutes: int = 0,
    discussion: str = "disc1",
    course: str = "course1",
) -> Post:
    return Post(
        post_id=post_id,
        discussion_id=discussion,
        course_id=course,
        author_id=author,
        parent_post_id=parent,
        created_at=T0 + timedelta(minutes=minutes),
        raw_text=text,
    )


def codebook_from_stems(discussion_id: str, topics: list[tuple[str, list[str]]], version: int = 1) -> Codebook:
    """Codebook whose keywords are already-stemmed terms (topic-model form)."""
    built = tuple(
        Topic(name=name, keywords=tuple(keyword_from_stems(s) for s in stems))
        for name, stems in topics
    )
    return Codebook(discussion_id=discussion_id, version=version, topics=built)


@pytest.fixture()
def table1_codebook() -> Codebook:
    """A starter codebook straight out of the topic model: numeric names, stem keywords."""
    return codebook_from_stems(
        "cs-grad",
        [
            ("0", ["devic", "interfac", "child", "applic", "potenti", "post",
                   "input_paramet", "parent", "behavior", "run"]),
            ("1", ["write", "want", "team", "choic", "custom", "field", "look",
                   "product", "interfac", "array"]),
            ("2", ["boundari", "import", "select", "api", "handl", "rest_api",
                   "rest", "encapsul", "sure", "partit_test"]),
            ("3", ["partit_method", "categori_partit", "leak", "determin",
                   "memori_leak", "languag", "applic", "system", "databas", "partit_test"]),
            ("4", ["subclass", "tester", "abstract", "output", "group", "model",
                   "oop", "overlap", "detect_memori", "disjoint"]),
        ],
    )


@pytest.fixture()
def table2_codebook() -> Codebook:
    """A reworked instructor codebook: named topics, raw phrases, multi-form keywords."""
    return build_codebook(
        "cs-grad",
        [
            ("Observability", ["observability", "visible", "get", "state", "visibility",
                               "observable", "getter", "access", "field", "accessor"]),
            ("Controllability", ["configure", "object", "control", "modify", "state",
                                 "mutate", "mutator", "update"]),
            ("inheritance", ["inheritance", "child class", "parent class", "overriding",
                             "depth", "subclass", "superclass", "sub class", "super class",
                             "inherit", "interface", "abstract class"]),
            ("testing", ["black box", "black-box", "white-box", "white box", "automate",
                         "automation", "industry", "difficult", "easy"]),
            ("object oriented programming", ["public", "private", "protected", "package",
                                             "simple", "complex", "abstraction", "specialization",
                                             "data", "encapsulation", "method", "field"]),
        ],
    )


@pytest.fixture()
def table3_codebook() -> Codebook:
    """A mature, much-refined codebook for an education course.

    Keywords longer than three words are out of contract and omitted; the
    fifth topic is empty (legal: it simply never fires).
    """
    return build_codebook(
        "edu-grad",
        [
            ("effortful learning", [
                "desire", "plf", "resonate", "parachute", "land", "jump", "commun",
                "parachute land", "land fall", "fall", "difficult", "difficulties",
                "mistakes", "failure", "effortful learning", "desirable difficulty",
                "desire difficulty", "desirable", "effortful",
            ]),
            ("beyond learning styles", [
                "dylexia", "learn style", "individual", "learn differ", "disable",
                "intelligent", "prefer", "support", "dyslex", "focus",
                "instructional style", "learning styles",
            ]),
            ("illusion of mastery", [
                "confidence", "feedback", "calibration", "confidence memory", "accuracy",
                "peer", "answer", "event", "state", "calibration learn",
                "illusion of mastery", "illusions of mastery", "misunderstanding",
                "illusion of knowing", "illusions of knowing", "illusion of learning",
                "illusions of learning", "re read", "cram",
            ]),
            ("retrieval practice", [
                "mass", "mass practice", "interleaving practice", "space retrieval",
                "tend", "day", "long term", "week", "myth", "practice space",
                "retrieval practice", "retrieval process", "testing effect", "test effect",
                "recall knowledge", "retrieval", "actively retrieving", "periodically testing",
                "retrieval activity", "retrieval activities", "low stakes", "flash cards",
                "quizzing", "practice and retrieval", "quiz over time", "frequently quizzing",
                "retrieval practice activity", "retrieval practice activities", "testing efforts",
                "active retrieval", "practice", "short quiz", "active recall",
                "process of retrieval", "practice sessions", "self testing",
                "recall the information", "rpa", "rpas", "spacing out", "spacing out practice",
                "spaced practice", "spacing practice", "spaced out practice", "spaced out",
                "spaced retrieval", "space practice", "retrieval spaced", "retrieve spaced",
                "spaced application", "spaced knowledge", "space knowledge",
                "interleaving", "interleaved practice", "interleave", "interleaved",
            ]),
            ("unused", []),
        ],
    )
