"""Canvas ingestion, CSV import/export, and deep links.

Fetches follow Link-header pagination and honor Retry-After; the reply
tree flattens depth-first into Posts with HTML stripped. Author ids are
pseudonymized with a per-course salt before anything is persisted. The
CSV layout is the export contract for the external ENA web tool.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from html.parser import HTMLParser
from typing import Any, Callable, Sequence, TYPE_CHECKING

if TYPE_CHECKING:
    from .codebook import Codebook
    from .coder import CodedUtterance

CSV_BASE_COLUMNS = ("StudentID", "PostID", "IsInitial", "Timestamp", "Text")

_MEDIA_TAGS = {"img", "video", "audio", "iframe", "embed", "object", "a"}
_BREAK_TAGS = {"p", "br", "div", "li", "ul", "ol", "tr", "table", "h1", "h2", "h3", "h4", "blockquote", "pre"}

DEFAULT_SALT = "discussena"


class IngestionError(Exception):
    pass


class AuthFailed(IngestionError):
    pass


class CourseNotFound(IngestionError):
    pass


class RateLimited(IngestionError):
    pass


class MalformedPayload(IngestionError):
    pass


class MissingAssignment(IngestionError):
    pass


class BadHeader(IngestionError):
    pass


class BadRow(IngestionError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, slots=True)
class Post:
    """One discussion utterance with HTML already stripped."""

    post_id: str
    discussion_id: str
    course_id: str
    author_id: str
    parent_post_id: str | None
    created_at: datetime
    raw_text: str
    had_media: bool = False
    # Initial means "not a reply". CSV imports cannot recover parent ids,
    # so the flag is stored rather than derived.
    is_initial: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.is_initial is None:
            object.__setattr__(self, "is_initial", self.parent_post_id is None)


@dataclass(frozen=True, slots=True)
class DiscussionSummary:
    discussion_id: str
    course_id: str
    title: str
    assignment_id: str | None
    post_count: int


def pseudonymize(author_id: str, course_id: str, salt: str = DEFAULT_SALT) -> str:
    """Stable opaque student identifier (per-course salted hash)."""
    digest = hashlib.sha256(f"{salt}:{course_id}:{author_id}".encode("utf-8")).hexdigest()
    return digest[:12]


class _TextExtractor(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self.had_media = False

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        if tag in _MEDIA_TAGS:
            self.had_media = True
        if tag in _BREAK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag: str) -> None:
        if tag in _BREAK_TAGS:
            self.parts.append("\n")

    def handle_data(self, data: str) -> None:
        self.parts.append(data)


def strip_html(markup: str) -> tuple[str, bool]:
    """Plain text plus whether the markup carried media or links."""
    extractor = _TextExtractor()
    extractor.feed(markup)
    extractor.close()
    text = "".join(extractor.parts)
    lines = [ln.strip() for ln in text.splitlines()]
    return "\n".join(ln for ln in lines if ln), extractor.had_media


def _parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


class CanvasClient:
    """Minimal Canvas REST client with pagination and backoff.

    ``session`` only needs a requests-like ``get``; tests inject recorded
    responses through it.
    """

    def __init__(
        self,
        base_url: str | None = None,
        token: str | None = None,
        session: Any = None,
        salt: str = DEFAULT_SALT,
        sleep: Callable[[float], None] = time.sleep,
        max_retries: int = 3,
    ) -> None:
        base = base_url or os.environ.get("CANVAS_BASE_URL") or ""
        self.base_url = base.rstrip("/")
        self.token = token if token is not None else os.environ.get("CANVAS_TOKEN", "")
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self.salt = salt
        self._sleep = sleep
        self._max_retries = max_retries

    def _get(self, url: str) -> Any:
        headers = {"Authorization": f"Bearer {self.token}"}
        attempts = 0
        while True:
            response = self.session.get(url, headers=headers)
            status = response.status_code
            if status in (401, 403):
                raise AuthFailed(f"{status} from {url}")
            if status == 404:
                raise CourseNotFound(f"404 from {url}")
            if status == 429:
                attempts += 1
                if attempts > self._max_retries:
                    raise RateLimited(f"still rate limited after {self._max_retries} retries: {url}")
                self._sleep(float(response.headers.get("Retry-After", "1")))
                continue
            if status != 200:
                raise IngestionError(f"unexpected {status} from {url}")
            return response

    def _get_paginated(self, url: str) -> list[Any]:
        items: list[Any] = []
        while url:
            response = self._get(url)
            page = response.json()
            if not isinstance(page, list):
                raise MalformedPayload(f"expected a JSON list from {url}")
            items.extend(page)
            url = _next_link(response.headers.get("Link", ""))
        return items

    def fetch_discussions(self, course_id: str) -> list[DiscussionSummary]:
        """All discussion topics published in a course."""
        url = f"{self.base_url}/api/v1/courses/{course_id}/discussion_topics"
        summaries = []
        for topic in self._get_paginated(url):
            try:
                summaries.append(
                    DiscussionSummary(
                        discussion_id=str(topic["id"]),
                        course_id=str(course_id),
                        title=str(topic.get("title", "")),
                        assignment_id=str(topic["assignment_id"]) if topic.get("assignment_id") else None,
                        post_count=int(topic.get("discussion_subentry_count", 0)),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedPayload(f"bad discussion topic payload: {exc}") from exc
        return summaries

    def fetch_posts(self, course_id: str, discussion_id: str) -> list[Post]:
        """The full threaded view, flattened depth-first into Posts."""
        url = f"{self.base_url}/api/v1/courses/{course_id}/discussion_topics/{discussion_id}/view"
        payload = self._get(url).json()
        if not isinstance(payload, dict) or "view" not in payload:
            raise MalformedPayload("discussion view payload missing 'view'")

        posts: list[Post] = []

        def walk(entries: Any, parent_id: str | None) -> None:
            if not isinstance(entries, list):
                raise MalformedPayload("'view' entries must be a list")
            for entry in entries:
                if entry.get("deleted"):
                    continue
                try:
                    post_id = str(entry["id"])
                    author = pseudonymize(str(entry["user_id"]), str(course_id), self.salt)
                    created = _parse_timestamp(str(entry["created_at"]))
                except (KeyError, TypeError, ValueError) as exc:
                    raise MalformedPayload(f"bad discussion entry: {exc}") from exc
                text, had_media = strip_html(str(entry.get("message", "")))
                posts.append(
                    Post(
                        post_id=post_id,
                        discussion_id=str(discussion_id),
                        course_id=str(course_id),
                        author_id=author,
                        parent_post_id=parent_id,
                        created_at=created,
                        raw_text=text,
                        had_media=had_media,
                    )
                )
                walk(entry.get("replies", []), post_id)

        walk(payload["view"], None)
        return posts


def _next_link(link_header: str) -> str:
    for part in link_header.split(","):
        section = part.split(";")
        if len(section) < 2:
            continue
        if any(rel.strip() in ('rel="next"', "rel=next") for rel in section[1:]):
            return section[0].strip().strip("<>")
    return ""


@dataclass(frozen=True, slots=True)
class CanvasLinks:
    discussion_url: str
    speedgrader_url: str | None


def discussion_link(base_url: str, course_id: str, discussion_id: str) -> str:
    return f"{base_url.rstrip('/')}/courses/{course_id}/discussion_topics/{discussion_id}"


def speedgrader_link(base_url: str, course_id: str, assignment_id: str | None, student_id: str) -> str:
    if not assignment_id:
        raise MissingAssignment("discussion has no assignment, cannot build a SpeedGrader link")
    return (
        f"{base_url.rstrip('/')}/courses/{course_id}/gradebook/speed_grader"
        f"?assignment_id={assignment_id}&student_id={student_id}"
    )


def canvas_links(
    base_url: str,
    course_id: str,
    discussion_id: str,
    assignment_id: str | None,
    student_id: str,
) -> CanvasLinks:
    """Both deep links; the SpeedGrader one is None without an assignment."""
    discussion = discussion_link(base_url, course_id, discussion_id)
    try:
        grader: str | None = speedgrader_link(base_url, course_id, assignment_id, student_id)
    except MissingAssignment:
        grader = None
    return CanvasLinks(discussion_url=discussion, speedgrader_url=grader)


def export_csv(utterances: Sequence["CodedUtterance"], codebook: "Codebook") -> bytes:
    """Coded corpus as UTF-8 CSV (RFC 4180), one 0/1 column per topic.

    Rows are ordered by (student, timestamp, post id) so exports are
    reproducible.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(list(CSV_BASE_COLUMNS) + [t.name for t in codebook.topics])
    ordered = sorted(utterances, key=lambda u: (u.student_id, u.created_at, u.post_id))
    for u in ordered:
        writer.writerow(
            [
                u.student_id,
                u.post_id,
                "1" if u.is_initial else "0",
                u.created_at.astimezone(timezone.utc).isoformat(),
                u.text,
            ]
            + ["1" if c else "0" for c in u.codes]
        )
    return out.getvalue().encode("utf-8")


@dataclass(frozen=True)
class CsvImport:
    posts: list[Post]
    codes: list[tuple[int, ...]] | None
    topic_names: tuple[str, ...] | None


def import_csv(data: bytes, discussion_id: str = "imported", course_id: str = "imported") -> CsvImport:
    """Parse an exported (or text-only) CSV back into posts.

    Code columns, when present, are preserved so round trips can be
    checked; a header without them means the corpus still needs coding.
    """
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    try:
        header = next(reader)
    except StopIteration:
        raise BadHeader("empty file") from None
    if tuple(header[: len(CSV_BASE_COLUMNS)]) != CSV_BASE_COLUMNS:
        raise BadHeader(f"expected columns {', '.join(CSV_BASE_COLUMNS)}; got {', '.join(header[:5])}")
    topic_names = tuple(header[len(CSV_BASE_COLUMNS) :]) or None

    posts: list[Post] = []
    codes: list[tuple[int, ...]] = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise BadRow(line_no, f"expected {len(header)} fields, got {len(row)}")
        student, post_id, is_initial, timestamp, text = row[: len(CSV_BASE_COLUMNS)]
        if is_initial not in ("0", "1"):
            raise BadRow(line_no, f"IsInitial must be 0 or 1, got {is_initial!r}")
        try:
            created = _parse_timestamp(timestamp)
        except ValueError:
            raise BadRow(line_no, f"bad timestamp {timestamp!r}") from None
        posts.append(
            Post(
                post_id=post_id,
                discussion_id=discussion_id,
                course_id=course_id,
                author_id=student,
                parent_post_id=None,
                created_at=created,
                raw_text=text,
                is_initial=is_initial == "1",
            )
        )
        if topic_names:
            values = row[len(CSV_BASE_COLUMNS) :]
            for v in values:
                if v not in ("0", "1"):
                    raise BadRow(line_no, f"code values must be 0 or 1, got {v!r}")
            codes.append(tuple(int(v) for v in values))
    return CsvImport(posts=posts, codes=codes if topic_names else None, topic_names=topic_names)
