"""Offline ingestion pipeline.

Runs independently of the serving layer and turns a raw dataset into the
three artifacts the service loads: ``projects.json`` (documents with
embeddings and 2D coordinates), ``topics.json`` (labels sorted by count),
and ``reducer.model`` (the fitted layout for out-of-sample projection).
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corpus import (
    Corpus,
    MapPoint,
    Project,
    TopicLabel,
    parse_date,
    save_corpus,
    sort_topics,
    validate_corpus,
)
from .errors import (
    AtlasError,
    IoFailure,
    PipelineAborted,
    ProviderUnavailable,
    UnknownFormat,
)
from .gateway import ChatRequest, Gateway, TOPIC_PROMPT_MARKER
from .reducer import ReducerParams, fit, save_model

TOPIC_SYSTEM_PROMPT = "You extract short research topic labels."
TOPIC_USER_TEMPLATE = (
    TOPIC_PROMPT_MARKER
    + "\nTitle: {title}\nDescription: {description}\n"
    "Return up to 5 short topic labels, comma-separated, no explanations."
)
TOPIC_TEMPERATURE = 0.2
MAX_TOPICS_PER_RECORD = 5

ARTIFACT_FILES = ("projects.json", "topics.json", "reducer.model")


@dataclass(frozen=True)
class RawRecord:
    id: str
    title: str
    description: str = ""
    group: str = ""
    date: str = ""


@dataclass
class PipelineReport:
    counts: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    stage_seconds: dict[str, float] = field(default_factory=dict)

    def summary(self) -> str:
        lines = ["pipeline report:"]
        for key, value in self.counts.items():
            lines.append(f"  {key}: {value}")
        for stage, seconds in self.stage_seconds.items():
            lines.append(f"  {stage}: {seconds:.2f}s")
        for failure in self.failures:
            lines.append(f"  failure: {failure}")
        return "\n".join(lines)


def ingest(path: str, fmt: str) -> tuple[list[RawRecord], list[str]]:
    """Read raw records; malformed rows become reported failures, not errors."""
    if fmt not in ("json", "csv"):
        raise UnknownFormat(f"unsupported input format {fmt!r}")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}")

    records: list[RawRecord] = []
    failures: list[str] = []
    if fmt == "json":
        if not text.strip():
            return [], []
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise IoFailure(f"invalid JSON in {path}: {exc}")
        if not isinstance(rows, list):
            raise IoFailure(f"{path}: expected a top-level JSON array")
        for i, row in enumerate(rows):
            if not isinstance(row, dict):
                failures.append(f"row {i}: not an object")
                continue
            rec = RawRecord(
                id=str(row.get("id") or ""),
                title=str(row.get("title") or ""),
                description=str(row.get("description") or ""),
                group=str(row.get("group") or ""),
                date=str(row.get("date") or ""),
            )
            _collect(rec, i, records, failures)
    else:
        reader = csv.DictReader(text.splitlines())
        for i, row in enumerate(reader):
            rec = RawRecord(
                id=(row.get("id") or "").strip(),
                title=(row.get("title") or "").strip(),
                description=(row.get("description") or "").strip(),
                group=(row.get("group") or "").strip(),
                date=(row.get("date") or "").strip(),
            )
            _collect(rec, i, records, failures)
    return records, failures


def _collect(rec: RawRecord, i: int, records: list[RawRecord], failures: list[str]):
    if not rec.id:
        failures.append(f"row {i}: missing id")
    elif not rec.title:
        failures.append(f"row {i} ({rec.id}): missing title")
    else:
        records.append(rec)


def embedding_text(record: RawRecord) -> str:
    return record.title + "\n" + record.description


def embed_corpus(records: list[RawRecord], gateway: Gateway):
    """Embed each record; per-record failures are isolated and reported."""
    embedded: list[tuple[RawRecord, list[float]]] = []
    failures: list[str] = []
    results = [None] * len(records)

    def one(i: int):
        results[i] = gateway.embed_text(embedding_text(records[i]))

    with ThreadPoolExecutor(max_workers=gateway.config.max_concurrency) as pool:
        futures = {pool.submit(one, i): i for i in range(len(records))}
        for future, i in futures.items():
            try:
                future.result()
            except AtlasError as exc:
                failures.append(f"{records[i].id}: embedding failed ({exc.code})")
                results[i] = None

    for record, vec in zip(records, results):
        if vec is not None:
            embedded.append((record, vec))
    if records and not embedded:
        raise ProviderUnavailable("every embedding request failed")
    return embedded, failures


def extract_topics(record: RawRecord, gateway: Gateway) -> list[str]:
    """Ask the chat model for labels; normalize to lowercase, dedupe, cap at 5."""
    req = ChatRequest(
        system=TOPIC_SYSTEM_PROMPT,
        user=TOPIC_USER_TEMPLATE.format(title=record.title, description=record.description),
        temperature=TOPIC_TEMPERATURE,
    )
    try:
        reply = gateway.complete_chat(req)
    except AtlasError:
        raise
    labels: list[str] = []
    for chunk in reply.replace("\n", ",").split(","):
        label = chunk.strip().lower()
        if label and label not in labels:
            labels.append(label)
        if len(labels) == MAX_TOPICS_PER_RECORD:
            break
    return labels


def aggregate_topics(
    per_record: list[tuple[str, list[str]]],
    positions: dict[str, MapPoint],
) -> tuple[TopicLabel, ...]:
    """One TopicLabel per unique string, positioned at its members' centroid."""
    members: dict[str, list[str]] = {}
    for project_id, labels in per_record:
        for label in labels:
            members.setdefault(label, []).append(project_id)
    topics = []
    for text, ids in members.items():
        pts = [positions[pid] for pid in ids]
        cx = sum(p.x for p in pts) / len(pts)
        cy = sum(p.y for p in pts) / len(pts)
        topics.append(TopicLabel(
            text=text,
            count=len(ids),
            project_ids=frozenset(ids),
            position=MapPoint(cx, cy),
        ))
    return sort_topics(topics)


def _remove_partials(out_dir: str):
    for name in ARTIFACT_FILES:
        path = os.path.join(out_dir, name)
        if os.path.exists(path):
            os.remove(path)


def run_pipeline(
    input_path: str,
    out_dir: str,
    gateway: Gateway,
    params: ReducerParams | None = None,
    fmt: str = "json",
) -> PipelineReport:
    params = params or ReducerParams()
    report = PipelineReport()
    os.makedirs(out_dir, exist_ok=True)
    try:
        return _run(input_path, out_dir, gateway, params, fmt, report)
    except AtlasError:
        _remove_partials(out_dir)
        raise


def _run(input_path, out_dir, gateway, params, fmt, report: PipelineReport):
    t0 = time.perf_counter()
    records, ingest_failures = ingest(input_path, fmt)
    report.failures.extend(ingest_failures)
    report.counts["read"] = len(records) + len(ingest_failures)
    report.counts["ingested"] = len(records)
    report.stage_seconds["ingest"] = time.perf_counter() - t0
    if not records:
        raise PipelineAborted("no valid records in input")

    t0 = time.perf_counter()
    embedded, embed_failures = embed_corpus(records, gateway)
    report.failures.extend(embed_failures)
    report.counts["embedded"] = len(embedded)
    report.counts["embed_failed"] = len(embed_failures)
    report.stage_seconds["embed"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    vectors = np.array([vec for _, vec in embedded], dtype=np.float64)
    model = fit(vectors, params)
    report.stage_seconds["fit"] = time.perf_counter() - t0

    positions: dict[str, MapPoint] = {}
    projects: list[Project] = []
    for row, (record, vec) in enumerate(embedded):
        x = float(model.coords[row, 0])
        y = float(model.coords[row, 1])
        positions[record.id] = MapPoint(x, y)
        projects.append(Project(
            id=record.id,
            title=record.title,
            description=record.description,
            group=record.group,
            date=parse_date(record.date) if record.date else None,
            embedding=tuple(vec),
            position=MapPoint(x, y),
        ))

    t0 = time.perf_counter()
    per_record: list[tuple[str, list[str]]] = []
    topic_failures = 0
    for record, _ in embedded:
        try:
            per_record.append((record.id, extract_topics(record, gateway)))
        except AtlasError as exc:
            report.failures.append(f"{record.id}: topic extraction failed ({exc.code})")
            topic_failures += 1
    topics = aggregate_topics(per_record, positions)
    report.counts["topic_extracted"] = len(per_record)
    report.counts["topic_failed"] = topic_failures
    report.counts["topics"] = len(topics)
    report.stage_seconds["topics"] = time.perf_counter() - t0

    corpus = Corpus(projects=tuple(projects), topics=topics)
    violations = validate_corpus(corpus)
    if violations:
        raise PipelineAborted(
            "generated corpus failed validation: " + "; ".join(map(str, violations[:5]))
        )

    t0 = time.perf_counter()
    save_corpus(corpus, out_dir)
    save_model(model, os.path.join(out_dir, "reducer.model"))
    report.stage_seconds["write"] = time.perf_counter() - t0
    report.counts["written"] = len(projects)
    return report
