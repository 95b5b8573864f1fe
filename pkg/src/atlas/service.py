"""Web-facing exploration service.

Loads the three pipeline artifacts into immutable in-memory state and
serves the map, semantic search (ranked in the original high-dimensional
space, projected to 2D only for the camera), region summaries, timeline
filtering, and idea synthesis.
"""

from __future__ import annotations

import datetime as dt
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import carto
from .corpus import Corpus, MapPoint, Project, load_corpus, validate_corpus
from .errors import (
    AtlasError,
    EmptyQuery,
    EmptyRegion,
    InvalidRecipe,
    InvalidWindow,
    MissingArtifact,
    ProviderUnavailable,
    UnknownProject,
    ValidationFailed,
    VersionMismatch,
)
from .gateway import ChatRequest, Gateway, MockGateway
from .reducer import ReducerModel, load_model, transform
from .synthesis import IdeaLog, Recipe, RecipeItem, generate_idea

SUMMARY_SYSTEM_PROMPT = "You summarize research project collections in 3 sentences."
SUMMARY_MAX_PROJECTS = 20
SUMMARY_SNIPPET_CHARS = 240
DEFAULT_SEARCH_K = 10


@dataclass(frozen=True)
class TimeWindow:
    start: dt.date
    end: dt.date

    def __post_init__(self):
        if self.start > self.end:
            raise InvalidWindow(f"start {self.start} after end {self.end}")

    def contains(self, date: Optional[dt.date]) -> bool:
        return date is not None and self.start <= date <= self.end


@dataclass(frozen=True)
class SearchResult:
    query: str
    point: MapPoint
    hits: tuple[tuple[str, float], ...]  # (project_id, cosine score) descending


class ServiceState:
    """Immutable artifact state plus the gateway; safe for concurrent reads."""

    def __init__(self, corpus: Corpus, model: ReducerModel, gateway: Gateway,
                 idea_log: IdeaLog | None = None):
        self.corpus = corpus
        self.model = model
        self.gateway = gateway
        self.idea_log = idea_log
        self._matrix = np.array(
            [p.embedding for p in corpus.projects], dtype=np.float64
        )
        norms = np.linalg.norm(self._matrix, axis=1)
        norms[norms == 0.0] = 1.0
        self._unit = self._matrix / norms[:, None]
        self._ids = [p.id for p in corpus.projects]

    # -- queries ----------------------------------------------------------

    def search(self, query: str, k: int = DEFAULT_SEARCH_K) -> SearchResult:
        if not query or not query.strip():
            raise EmptyQuery("search query must be nonempty")
        vec = np.asarray(self.gateway.embed_text(query), dtype=np.float64)
        x, y = transform(self.model, vec)
        qnorm = np.linalg.norm(vec)
        if qnorm == 0.0:
            qnorm = 1.0
        scores = self._unit @ (vec / qnorm)
        order = np.argsort(-scores, kind="stable")[:k]
        hits = tuple((self._ids[i], float(scores[i])) for i in order)
        return SearchResult(query=query, point=MapPoint(x, y), hits=hits)

    def filter_timeline(self, window: TimeWindow) -> list[str]:
        chosen = [p for p in self.corpus.projects if window.contains(p.date)]
        chosen.sort(key=lambda p: (p.date, p.id))
        return [p.id for p in chosen]

    def _projects_for_view(self, viewport: carto.Viewport,
                           window: Optional[TimeWindow]) -> list[Project]:
        visible = []
        for p in self.corpus.projects:
            if p.position is None:
                continue
            if window is not None and p.date is not None and not window.contains(p.date):
                continue
            if viewport.x0 <= p.position.x <= viewport.x1 and \
               viewport.y0 <= p.position.y <= viewport.y1:
                visible.append(p)
        return visible

    def summarize_region(self, viewport: carto.Viewport,
                         window: Optional[TimeWindow] = None):
        candidates = self._projects_for_view(viewport, window)
        if not candidates:
            raise EmptyRegion("no projects in the viewed region")
        cx = (viewport.x0 + viewport.x1) / 2.0
        cy = (viewport.y0 + viewport.y1) / 2.0
        candidates.sort(
            key=lambda p: (math.hypot(p.position.x - cx, p.position.y - cy), p.id)
        )
        chosen = candidates[:SUMMARY_MAX_PROJECTS]
        bullets = "\n".join(
            f"- {p.title}: {p.description[:SUMMARY_SNIPPET_CHARS]}" for p in chosen
        )
        reply = self.gateway.complete_chat(
            ChatRequest(system=SUMMARY_SYSTEM_PROMPT, user=bullets)
        )
        return reply, [p.id for p in chosen]

    def map_payload(self, viewport: carto.Viewport,
                    window: Optional[TimeWindow] = None) -> dict:
        if window is None:
            dated = list(self.corpus.projects)
        else:
            in_window = set(self.filter_timeline(window))
            # dateless projects stay on the map; they are only outside the timeline
            dated = [p for p in self.corpus.projects
                     if p.id in in_window or p.date is None]
        shown = [p for p in dated if p.position is not None]
        shown_ids = {p.id for p in shown}

        tier = carto.visible_detail(viewport.zoom)
        labels = [t for t in self.corpus.topics if t.project_ids & shown_ids]
        if tier == "overview":
            labels = labels[:carto.TOP_LABEL_COUNT]
        placed = carto.place_labels(labels, viewport)

        contour_payload = []
        points = [p.position for p in shown]
        if points:
            field = carto.density_grid(points)
            levels = carto.default_levels(field)
            if levels:
                contour_set = carto.contours(field, levels)
                for level, polylines in zip(contour_set.levels, contour_set.polylines):
                    contour_payload.append({
                        "level": level,
                        "paths": [[[px, py] for px, py in line] for line in polylines],
                    })

        return {
            "projects": [
                {
                    "id": p.id,
                    "title": p.title,
                    "group": p.group,
                    "x": p.position.x,
                    "y": p.position.y,
                    "date": p.date.isoformat() if p.date else None,
                }
                for p in shown
            ],
            "labels": [
                {
                    "text": box.label.text,
                    "count": box.label.count,
                    "x": box.label.position.x,
                    "y": box.label.position.y,
                }
                for box in placed
            ],
            "contours": contour_payload,
        }


def load_state(artifact_dir: str, gateway: Gateway | None = None) -> ServiceState:
    for name in ("projects.json", "topics.json", "reducer.model"):
        if not os.path.exists(os.path.join(artifact_dir, name)):
            raise MissingArtifact(f"missing artifact {name} in {artifact_dir}")
    corpus = load_corpus(artifact_dir)
    model = load_model(os.path.join(artifact_dir, "reducer.model"))
    if model.version != 1:
        raise VersionMismatch(f"unsupported artifact version {model.version}")
    violations = validate_corpus(corpus)
    if violations:
        raise ValidationFailed(
            "corpus invalid: " + "; ".join(str(v) for v in violations[:5])
        )
    if model.n != len(corpus.projects):
        raise ValidationFailed(
            f"reducer has {model.n} rows but corpus has {len(corpus.projects)} projects"
        )
    missing = [p.id for p in corpus.projects if p.embedding is None]
    if missing:
        raise ValidationFailed(f"projects without embeddings: {missing[:5]}")
    log = IdeaLog(os.path.join(artifact_dir, "ideas.log.jsonl"))
    return ServiceState(corpus, model, gateway or MockGateway(), idea_log=log)


# --- HTTP layer ---------------------------------------------------------------

_STATUS = {
    "empty_query": 400,
    "invalid_window": 400,
    "invalid_recipe": 400,
    "empty_input": 400,
    "unknown_project": 404,
    "empty_region": 404,
    "provider_unavailable": 503,
    "malformed_reply": 502,
}


def _window_from(start: Optional[str], end: Optional[str]) -> Optional[TimeWindow]:
    if start is None and end is None:
        return None
    try:
        start_date = dt.date.fromisoformat(start) if start else dt.date.min
        end_date = dt.date.fromisoformat(end) if end else dt.date.max
    except ValueError as exc:
        raise InvalidWindow(f"bad date: {exc}")
    return TimeWindow(start_date, end_date)


def create_app(state: ServiceState, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="atlas explore service")

    @app.exception_handler(AtlasError)
    async def atlas_error_handler(_req: Request, exc: AtlasError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 500),
            content={"error_code": exc.code, "message": exc.message},
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(_req: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error_code": "bad_request", "message": str(exc)},
        )

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "corpus_size": len(state.corpus.projects),
            "artifact_version": state.model.version,
            "label_metrics": {
                "char_width_factor": carto.CHAR_WIDTH_FACTOR,
                "line_height_factor": carto.LINE_HEIGHT_FACTOR,
                "font_px": carto.LABEL_FONT_PX,
                "pixels_per_unit": carto.PIXELS_PER_UNIT,
            },
        }

    @app.get("/api/map")
    def map_endpoint(
        x0: Optional[float] = None, y0: Optional[float] = None,
        x1: Optional[float] = None, y1: Optional[float] = None,
        zoom: float = 1.0,
        start: Optional[str] = None, end: Optional[str] = None,
    ):
        viewport = _full_viewport(state, x0, y0, x1, y1, zoom)
        return state.map_payload(viewport, _window_from(start, end))

    @app.get("/api/project/{project_id}")
    def project(project_id: str):
        p = state.corpus.by_id(project_id)
        if p is None:
            raise UnknownProject(f"no project {project_id!r}")
        return {
            "id": p.id,
            "title": p.title,
            "description": p.description,
            "group": p.group,
            "date": p.date.isoformat() if p.date else None,
            "x": p.position.x if p.position else None,
            "y": p.position.y if p.position else None,
        }

    @app.get("/api/search")
    def search(q: str = "", k: int = DEFAULT_SEARCH_K):
        result = state.search(q, k)
        return {
            "x": result.point.x,
            "y": result.point.y,
            "hits": [{"id": pid, "score": score} for pid, score in result.hits],
        }

    @app.get("/api/summary")
    def summary(
        x0: Optional[float] = None, y0: Optional[float] = None,
        x1: Optional[float] = None, y1: Optional[float] = None,
        start: Optional[str] = None, end: Optional[str] = None,
    ):
        viewport = _full_viewport(state, x0, y0, x1, y1, 1.0)
        text, ids = state.summarize_region(viewport, _window_from(start, end))
        return {"summary": text, "project_ids": ids}

    @app.post("/api/generate")
    def generate(body: dict):
        items = body.get("items") or []
        if not isinstance(items, list) or not items:
            raise InvalidRecipe("body must contain a nonempty items list")
        recipe = Recipe(tuple(
            RecipeItem(project_id=str(it.get("project_id", "")),
                       aspect=str(it.get("aspect", "whole")))
            for it in items
        ))
        idea = generate_idea(recipe, state.corpus, state.gateway, log=state.idea_log)
        return {
            "title": idea.title,
            "description": idea.description,
            "prompt_used": idea.prompt_used,
        }

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _full_viewport(state: ServiceState, x0, y0, x1, y1, zoom) -> carto.Viewport:
    """Fill missing viewport edges from the map's padded bounding box."""
    positions = [p.position for p in state.corpus.projects if p.position]
    if positions:
        xs = [p.x for p in positions]
        ys = [p.y for p in positions]
        pad = 1.0
        defaults = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    else:
        defaults = (-10.0, -10.0, 10.0, 10.0)
    return carto.Viewport(
        x0 if x0 is not None else defaults[0],
        y0 if y0 is not None else defaults[1],
        x1 if x1 is not None else defaults[2],
        y1 if y1 is not None else defaults[3],
        zoom,
    )
