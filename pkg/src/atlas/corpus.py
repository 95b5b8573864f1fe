"""Domain types for a corpus and its artifact files.

A corpus is the unit everything else operates on: an ordered list of
projects (documents) plus the topic labels extracted from them.  Values are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import datetime as dt
import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

DEFAULT_EMBED_DIM = 1536


def parse_date(raw: str | None) -> Optional[dt.date]:
    """Parse an ISO date or a bare year; year-only inputs become January 1."""
    if raw is None:
        return None
    raw = str(raw).strip()
    if not raw:
        return None
    if raw.isdigit() and len(raw) == 4:
        return dt.date(int(raw), 1, 1)
    return dt.date.fromisoformat(raw)


@dataclass(frozen=True)
class MapPoint:
    x: float
    y: float

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


@dataclass(frozen=True)
class Project:
    id: str
    title: str
    description: str = ""
    group: str = ""
    date: Optional[dt.date] = None
    embedding: Optional[tuple[float, ...]] = None
    position: Optional[MapPoint] = None

    def with_position(self, x: float, y: float) -> "Project":
        return replace(self, position=MapPoint(float(x), float(y)))

    def with_embedding(self, values: Sequence[float]) -> "Project":
        return replace(self, embedding=tuple(float(v) for v in values))


@dataclass(frozen=True)
class TopicLabel:
    text: str
    count: int
    project_ids: frozenset[str]
    position: MapPoint


@dataclass(frozen=True)
class Corpus:
    projects: tuple[Project, ...]
    topics: tuple[TopicLabel, ...] = ()

    @property
    def date_range(self) -> Optional[tuple[dt.date, dt.date]]:
        dates = [p.date for p in self.projects if p.date is not None]
        if not dates:
            return None
        return min(dates), max(dates)

    def by_id(self, project_id: str) -> Optional[Project]:
        return self._index().get(project_id)

    def _index(self) -> dict[str, Project]:
        # dataclass is frozen; cache via object.__setattr__ on first use
        cached = self.__dict__.get("_idx")
        if cached is None:
            cached = {p.id: p for p in self.projects}
            object.__setattr__(self, "_idx", cached)
        return cached


@dataclass(frozen=True)
class Violation:
    subject: str
    rule: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.rule}"


def _check_embedding(values: Sequence[float]) -> Optional[str]:
    if not all(math.isfinite(v) for v in values):
        return "embedding values finite"
    if not any(v != 0.0 for v in values):
        return "embedding not all-zero"
    return None


def validate_corpus(corpus: Corpus) -> list[Violation]:
    """Check every type invariant; violations are data, not exceptions."""
    out: list[Violation] = []
    seen: set[str] = set()
    for p in corpus.projects:
        if p.id in seen:
            out.append(Violation(p.id, "id unique"))
        seen.add(p.id)
        if not p.title:
            out.append(Violation(p.id, "title nonempty"))
        if p.position is not None and not p.position.is_finite():
            out.append(Violation(p.id, "position finite"))
        if p.embedding is not None:
            problem = _check_embedding(p.embedding)
            if problem:
                out.append(Violation(p.id, problem))
    prev: Optional[TopicLabel] = None
    for t in corpus.topics:
        if not t.text.strip():
            out.append(Violation(t.text, "text nonempty after normalization"))
        if t.count != len(t.project_ids):
            out.append(Violation(t.text, "count == |project_ids|"))
        if not t.project_ids:
            out.append(Violation(t.text, "project_ids nonempty"))
        for pid in sorted(t.project_ids):
            if pid not in seen:
                out.append(Violation(t.text, f"project_id resolves: {pid}"))
        if not t.position.is_finite():
            out.append(Violation(t.text, "position finite"))
        if prev is not None and (-t.count, t.text) < (-prev.count, prev.text):
            out.append(Violation(t.text, "topics sorted by (count desc, text asc)"))
        prev = t
    return out


# --- artifact serialization -------------------------------------------------

def project_to_json(p: Project) -> dict:
    return {
        "id": p.id,
        "title": p.title,
        "description": p.description,
        "group": p.group,
        "date": p.date.isoformat() if p.date else None,
        "embedding": list(p.embedding) if p.embedding is not None else None,
        "x": p.position.x if p.position else None,
        "y": p.position.y if p.position else None,
    }


def project_from_json(obj: dict) -> Project:
    position = None
    if obj.get("x") is not None and obj.get("y") is not None:
        position = MapPoint(float(obj["x"]), float(obj["y"]))
    embedding = obj.get("embedding")
    return Project(
        id=str(obj["id"]),
        title=str(obj.get("title", "")),
        description=str(obj.get("description") or ""),
        group=str(obj.get("group") or ""),
        date=parse_date(obj.get("date")),
        embedding=tuple(float(v) for v in embedding) if embedding else None,
        position=position,
    )


def topic_to_json(t: TopicLabel) -> dict:
    return {
        "text": t.text,
        "count": t.count,
        "project_ids": sorted(t.project_ids),
        "x": t.position.x,
        "y": t.position.y,
    }


def topic_from_json(obj: dict) -> TopicLabel:
    return TopicLabel(
        text=str(obj["text"]),
        count=int(obj["count"]),
        project_ids=frozenset(str(i) for i in obj["project_ids"]),
        position=MapPoint(float(obj["x"]), float(obj["y"])),
    )


def save_corpus(corpus: Corpus, out_dir: str) -> tuple[str, str]:
    """Write projects.json and topics.json; returns the two paths."""
    projects_path = os.path.join(out_dir, "projects.json")
    topics_path = os.path.join(out_dir, "topics.json")
    with open(projects_path, "w", encoding="utf-8") as fh:
        json.dump([project_to_json(p) for p in corpus.projects], fh, ensure_ascii=False)
    with open(topics_path, "w", encoding="utf-8") as fh:
        json.dump([topic_to_json(t) for t in corpus.topics], fh, ensure_ascii=False)
    return projects_path, topics_path


def load_corpus(artifact_dir: str) -> Corpus:
    with open(os.path.join(artifact_dir, "projects.json"), encoding="utf-8") as fh:
        projects = tuple(project_from_json(o) for o in json.load(fh))
    with open(os.path.join(artifact_dir, "topics.json"), encoding="utf-8") as fh:
        topics = tuple(topic_from_json(o) for o in json.load(fh))
    return Corpus(projects=projects, topics=topics)


def sort_topics(topics: Iterable[TopicLabel]) -> tuple[TopicLabel, ...]:
    return tuple(sorted(topics, key=lambda t: (-t.count, t.text)))
