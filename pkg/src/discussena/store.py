"""Append-only JSON persistence plus the in-memory model cache.

Everything lives under one data directory as inspectable JSON: course
summary files and, per discussion, the posts and the dense sequence of
codebook versions. Models are cached in memory only; they recompute
cheaply from what is on disk.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from .codebook import Codebook, codebook_from_dict, codebook_to_dict
from .ena import EnaModel
from .ingestion import DiscussionSummary, Post


class StoreError(Exception):
    pass


class StaleVersion(StoreError):
    """The caller's base version is no longer the latest."""

    def __init__(self, base: int, latest: int):
        super().__init__(f"base version {base} is stale; latest is {latest}")
        self.base = base
        self.latest = latest


def _dump(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    tmp.replace(path)


def _load(path: Path) -> Any:
    return json.loads(path.read_text(encoding="utf-8"))


def _post_to_dict(post: Post) -> dict[str, Any]:
    data = asdict(post)
    data["created_at"] = post.created_at.astimezone(timezone.utc).isoformat()
    return data


def _post_from_dict(data: dict[str, Any]) -> Post:
    data = dict(data)
    data["created_at"] = datetime.fromisoformat(data["created_at"])
    return Post(**data)


class DataStore:
    """File layout: courses/{course}.json, discussions/{id}/{posts,codebooks}.json."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        self._lock = threading.Lock()

    def _course_path(self, course_id: str) -> Path:
        return self.root / "courses" / f"{course_id}.json"

    def _discussion_dir(self, discussion_id: str) -> Path:
        return self.root / "discussions" / str(discussion_id)

    # -- course summaries ---------------------------------------------------

    def save_summaries(self, course_id: str, summaries: list[DiscussionSummary]) -> None:
        _dump(self._course_path(course_id), [asdict(s) for s in summaries])

    def load_summaries(self, course_id: str) -> list[DiscussionSummary] | None:
        path = self._course_path(course_id)
        if not path.exists():
            return None
        return [DiscussionSummary(**item) for item in _load(path)]

    # -- posts ----------------------------------------------------------------

    def save_posts(self, discussion_id: str, posts: list[Post]) -> None:
        _dump(self._discussion_dir(discussion_id) / "posts.json", [_post_to_dict(p) for p in posts])

    def load_posts(self, discussion_id: str) -> list[Post] | None:
        path = self._discussion_dir(discussion_id) / "posts.json"
        if not path.exists():
            return None
        return [_post_from_dict(item) for item in _load(path)]

    def has_discussion(self, discussion_id: str) -> bool:
        return (self._discussion_dir(discussion_id) / "posts.json").exists()

    # -- codebook versions (append-only, dense 1..n) -------------------------

    def _codebooks_path(self, discussion_id: str) -> Path:
        return self._discussion_dir(discussion_id) / "codebooks.json"

    def codebook_versions(self, discussion_id: str) -> list[dict[str, Any]]:
        path = self._codebooks_path(discussion_id)
        if not path.exists():
            return []
        return _load(path)

    def latest_version(self, discussion_id: str) -> int:
        return len(self.codebook_versions(discussion_id))

    def load_codebook(self, discussion_id: str, version: int | None = None) -> Codebook | None:
        versions = self.codebook_versions(discussion_id)
        if not versions:
            return None
        if version is None:
            version = len(versions)
        if not 1 <= version <= len(versions):
            return None
        return codebook_from_dict(versions[version - 1]["codebook"])

    def append_codebook(
        self,
        discussion_id: str,
        codebook: Codebook,
        author: str = "instructor",
        base_version: int | None = None,
    ) -> Codebook:
        """Store the next dense version; optimistic check against ``base_version``."""
        with self._lock:
            versions = self.codebook_versions(discussion_id)
            latest = len(versions)
            if base_version is not None and base_version != latest:
                raise StaleVersion(base_version, latest)
            assigned = Codebook(
                discussion_id=codebook.discussion_id,
                version=latest + 1,
                topics=codebook.topics,
            )
            versions.append(
                {
                    "author": author,
                    "saved_at": datetime.now(timezone.utc).isoformat(),
                    "codebook": codebook_to_dict(assigned),
                }
            )
            _dump(self._codebooks_path(discussion_id), versions)
            return assigned


class ModelCache:
    """Immutable models keyed by (discussion, codebook version, scope).

    Computation is single-flight: concurrent requests for the same key
    share one build, and the cache swap is atomic under the lock.
    """

    def __init__(self) -> None:
        self._models: dict[tuple[str, int, str], EnaModel] = {}
        self._builds: dict[tuple[str, int, str], threading.Event] = {}
        self._lock = threading.Lock()

    def peek(self, key: tuple[str, int, str]) -> EnaModel | None:
        with self._lock:
            return self._models.get(key)

    def get_or_build(self, key: tuple[str, int, str], build: Callable[[], EnaModel]) -> EnaModel:
        while True:
            with self._lock:
                model = self._models.get(key)
                if model is not None:
                    return model
                event = self._builds.get(key)
                if event is None:
                    event = threading.Event()
                    self._builds[key] = event
                    owner = True
                else:
                    owner = False
            if owner:
                try:
                    model = build()
                    with self._lock:
                        self._models[key] = model
                    return model
                finally:
                    with self._lock:
                        self._builds.pop(key, None)
                    event.set()
            else:
                event.wait()

    def start_background(self, key: tuple[str, int, str], build: Callable[[], EnaModel]) -> bool:
        """Kick off an async build; returns False if one is cached or running."""
        event = threading.Event()
        with self._lock:
            if key in self._models or key in self._builds:
                return False
            self._builds[key] = event

        def run() -> None:
            try:
                model = build()
                with self._lock:
                    self._models[key] = model
            finally:
                with self._lock:
                    self._builds.pop(key, None)
                event.set()

        threading.Thread(target=run, daemon=True).start()
        return True

    def is_building(self, key: tuple[str, int, str]) -> bool:
        with self._lock:
            return key in self._builds
