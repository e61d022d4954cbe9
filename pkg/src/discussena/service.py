"""HTTP API: discussions, versioned codebooks, models, drill-down, export.

Editing is the core loop: PUT a batch of codebook edits (optimistic,
against a base version), then GET the model for the new version; models
are cached per (discussion, version, scope) and built single-flight.
Recompute is synchronous up to a configurable corpus size, 202-and-poll
beyond it.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from fastapi import Depends, FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import ena
from .codebook import Codebook, CodebookError, apply_batch, codebook_to_dict, parse_edit
from .coder import code_corpus
from .ingestion import (
    CanvasClient,
    CourseNotFound,
    IngestionError,
    canvas_links,
    export_csv,
    import_csv,
)
from .lda import DEFAULT_ITERATIONS, extract_codebook, fit_lda
from .store import DataStore, ModelCache, StaleVersion
from .textprep import TokenizedDoc, preprocess_corpus


@dataclass
class ServiceConfig:
    data_dir: str = "data"
    canvas_base_url: str | None = None
    canvas_token: str | None = None
    canvas_session: Any = None
    service_token: str | None = None
    recompute_limit: int = 5000
    lda_seed: int = 0
    lda_iterations: int = DEFAULT_ITERATIONS
    codebook_corpus_csv: str | None = None
    ui_dir: str | None = None

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            data_dir=os.environ.get("DISCUSSENA_DATA_DIR", "data"),
            canvas_base_url=os.environ.get("CANVAS_BASE_URL") or None,
            canvas_token=os.environ.get("CANVAS_TOKEN") or None,
            service_token=os.environ.get("DISCUSSENA_TOKEN") or None,
            recompute_limit=int(os.environ.get("DISCUSSENA_RECOMPUTE_LIMIT", "5000")),
            lda_seed=int(os.environ.get("DISCUSSENA_LDA_SEED", "0")),
            lda_iterations=int(os.environ.get("DISCUSSENA_LDA_ITERATIONS", str(DEFAULT_ITERATIONS))),
            codebook_corpus_csv=os.environ.get("DISCUSSENA_CODEBOOK_CORPUS") or None,
            ui_dir=os.environ.get("DISCUSSENA_UI_DIR") or None,
        )


class EditBatch(BaseModel):
    base_version: int
    edits: list[dict]
    author: str = "instructor"


@dataclass
class _Runtime:
    config: ServiceConfig
    store: DataStore
    cache: ModelCache = field(default_factory=ModelCache)
    docs_cache: dict[str, tuple[str, list[TokenizedDoc]]] = field(default_factory=dict)

    def docs_for(self, discussion_id: str, posts: list) -> list[TokenizedDoc]:
        digest = hashlib.sha256()
        for p in posts:
            digest.update(p.post_id.encode())
            digest.update(str(len(p.raw_text)).encode())
        fingerprint = digest.hexdigest()
        cached = self.docs_cache.get(discussion_id)
        if cached is not None and cached[0] == fingerprint:
            return cached[1]
        docs = preprocess_corpus(posts)
        self.docs_cache[discussion_id] = (fingerprint, docs)
        return docs


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    runtime = _Runtime(config=config, store=DataStore(config.data_dir))
    app = FastAPI(title="discussena")
    app.state.runtime = runtime

    def require_auth(request: Request) -> None:
        if config.service_token is None:
            return
        header = request.headers.get("Authorization", "")
        if header != f"Bearer {config.service_token}":
            raise HTTPException(status_code=401, detail="missing or bad token")

    auth = Depends(require_auth)

    def load_posts_or_404(discussion_id: str) -> list:
        posts = runtime.store.load_posts(discussion_id)
        if posts is None:
            raise HTTPException(status_code=404, detail=f"unknown discussion {discussion_id!r}")
        return posts

    def initial_codebook(discussion_id: str) -> Codebook:
        if config.codebook_corpus_csv:
            with open(config.codebook_corpus_csv, "rb") as fh:
                corpus_posts = import_csv(fh.read()).posts
        else:
            corpus_posts = load_posts_or_404(discussion_id)
        docs = preprocess_corpus(corpus_posts)
        model = fit_lda(docs, seed=config.lda_seed, iterations=config.lda_iterations)
        return extract_codebook(model, discussion_id)

    def codebook_or_404(discussion_id: str, version: int | None) -> Codebook:
        codebook = runtime.store.load_codebook(discussion_id, version)
        if codebook is None:
            if version is not None and runtime.store.latest_version(discussion_id) > 0:
                raise HTTPException(status_code=404, detail=f"no codebook version {version}")
            codebook = runtime.store.append_codebook(
                discussion_id, initial_codebook(discussion_id), author="topic-model"
            )
            if version is not None and version != codebook.version:
                raise HTTPException(status_code=404, detail=f"no codebook version {version}")
        return codebook

    def check_scope(scope: str) -> str:
        if scope not in ena.SCOPES:
            raise HTTPException(status_code=422, detail=f"scope must be one of {ena.SCOPES}")
        return scope

    def build_model(discussion_id: str, codebook: Codebook, scope: str) -> ena.EnaModel:
        posts = load_posts_or_404(discussion_id)
        docs = runtime.docs_for(discussion_id, posts)
        return ena.build_model(posts, codebook, scope, docs=docs)

    def model_payload(model: ena.EnaModel, codebook: Codebook) -> dict:
        payload = ena.model_to_dict(model)
        payload["codebook"] = codebook_to_dict(codebook)
        payload["post_count"] = len(model.posts)
        return payload

    @app.get("/courses/{course_id}/discussions", dependencies=[auth])
    def list_discussions(course_id: str) -> JSONResponse:
        summaries = None
        stale = False
        if config.canvas_base_url:
            client = CanvasClient(
                config.canvas_base_url, config.canvas_token, session=config.canvas_session
            )
            try:
                summaries = client.fetch_discussions(course_id)
                runtime.store.save_summaries(course_id, summaries)
            except CourseNotFound:
                raise HTTPException(status_code=404, detail=f"unknown course {course_id!r}")
            except IngestionError as exc:
                cached = runtime.store.load_summaries(course_id)
                if cached is None:
                    raise HTTPException(status_code=502, detail=f"canvas unavailable: {exc}")
                summaries, stale = cached, True
        else:
            summaries = runtime.store.load_summaries(course_id)
            if summaries is None:
                raise HTTPException(status_code=404, detail=f"unknown course {course_id!r}")
        items = []
        for s in summaries:
            items.append(
                {
                    "discussion_id": s.discussion_id,
                    "title": s.title,
                    "assignment_id": s.assignment_id,
                    "post_count": s.post_count,
                    "ingested": runtime.store.has_discussion(s.discussion_id),
                    "has_codebook": runtime.store.latest_version(s.discussion_id) > 0,
                }
            )
        return JSONResponse({"course_id": course_id, "stale": stale, "discussions": items})

    @app.get("/discussions/{discussion_id}/codebook", dependencies=[auth])
    def get_codebook(discussion_id: str) -> JSONResponse:
        load_posts_or_404(discussion_id)
        codebook = codebook_or_404(discussion_id, None)
        return JSONResponse({"version": codebook.version, "codebook": codebook_to_dict(codebook)})

    @app.put("/discussions/{discussion_id}/codebook", dependencies=[auth])
    def put_codebook(discussion_id: str, body: EditBatch) -> JSONResponse:
        load_posts_or_404(discussion_id)
        latest = runtime.store.load_codebook(discussion_id)
        if latest is None:
            raise HTTPException(status_code=404, detail="no codebook yet; GET it first")
        if body.base_version != latest.version:
            raise HTTPException(
                status_code=409,
                detail=f"base version {body.base_version} is stale; latest is {latest.version}",
            )
        try:
            edits = [parse_edit(e) for e in body.edits]
            edited = apply_batch(latest, edits)
        except CodebookError as exc:
            return JSONResponse(status_code=422, content={"violations": [str(exc)]})
        try:
            saved = runtime.store.append_codebook(
                discussion_id, edited, author=body.author, base_version=body.base_version
            )
        except StaleVersion as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return JSONResponse({"version": saved.version, "codebook": codebook_to_dict(saved)})

    @app.get("/discussions/{discussion_id}/model", dependencies=[auth])
    def get_model(
        discussion_id: str,
        scope: str = Query(default=ena.SCOPE_ALL),
        version: int | None = Query(default=None),
    ) -> JSONResponse:
        check_scope(scope)
        posts = load_posts_or_404(discussion_id)
        codebook = codebook_or_404(discussion_id, version)
        key = (discussion_id, codebook.version, scope)
        cached = runtime.cache.peek(key)
        if cached is not None:
            return JSONResponse(model_payload(cached, codebook))
        if len(posts) > config.recompute_limit:
            runtime.cache.start_background(key, lambda: build_model(discussion_id, codebook, scope))
            return JSONResponse(status_code=202, content={"status": "computing", "poll": True})
        model = runtime.cache.get_or_build(key, lambda: build_model(discussion_id, codebook, scope))
        return JSONResponse(model_payload(model, codebook))

    @app.get("/discussions/{discussion_id}/students/{student_id}", dependencies=[auth])
    def get_student(
        discussion_id: str,
        student_id: str,
        scope: str = Query(default=ena.SCOPE_ALL),
        version: int | None = Query(default=None),
    ) -> JSONResponse:
        check_scope(scope)
        posts = load_posts_or_404(discussion_id)
        codebook = codebook_or_404(discussion_id, version)
        key = (discussion_id, codebook.version, scope)
        model = runtime.cache.get_or_build(key, lambda: build_model(discussion_id, codebook, scope))
        try:
            view = ena.individual_network(model, student_id)
        except ena.UnknownStudent:
            raise HTTPException(status_code=404, detail=f"unknown student {student_id!r}")
        links = None
        if config.canvas_base_url and posts:
            course_id = posts[0].course_id
            summaries = runtime.store.load_summaries(course_id) or []
            assignment = next(
                (s.assignment_id for s in summaries if s.discussion_id == discussion_id), None
            )
            link_pair = canvas_links(
                config.canvas_base_url, course_id, discussion_id, assignment, student_id
            )
            links = {
                "discussion_url": link_pair.discussion_url,
                "speedgrader_url": link_pair.speedgrader_url,
            }
        unit = view.unit
        return JSONResponse(
            {
                "student_id": student_id,
                "scope": scope,
                "codebook_version": model.codebook_version,
                "topic_names": list(model.topic_names),
                "code_positions": [[float(x) for x in row] for row in model.code_positions],
                "unit": {
                    "raw_counts": [int(x) for x in unit.raw_counts],
                    "weights": [float(x) for x in unit.normalized],
                    "point": [float(x) for x in unit.point],
                    "centroid": [float(x) for x in unit.centroid],
                },
                "posts": [
                    {
                        "post_id": u.post_id,
                        "created_at": u.created_at.isoformat(),
                        "is_initial": u.is_initial,
                        "text": u.text,
                        "codes": list(u.codes),
                        "matches": [
                            [{"keyword": d, "start": s, "end": e} for d, s, e in topic_matches]
                            for topic_matches in u.matches
                        ],
                    }
                    for u in view.posts
                ],
                "links": links,
            }
        )

    @app.get("/discussions/{discussion_id}/export.csv", dependencies=[auth])
    def get_export(discussion_id: str, version: int | None = Query(default=None)) -> Response:
        posts = load_posts_or_404(discussion_id)
        codebook = codebook_or_404(discussion_id, version)
        docs = runtime.docs_for(discussion_id, posts)
        coded = code_corpus(docs, posts, codebook)
        data = export_csv(coded, codebook)
        return Response(
            content=data,
            media_type="text/csv",
            headers={
                "Content-Disposition": f'attachment; filename="discussion-{discussion_id}-v{codebook.version}.csv"'
            },
        )

    @app.get("/manual")
    def manual() -> HTMLResponse:
        page = resources.files("discussena.assets").joinpath("manual.html").read_text("utf-8")
        return HTMLResponse(page)

    if config.ui_dir and os.path.isdir(config.ui_dir):
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
