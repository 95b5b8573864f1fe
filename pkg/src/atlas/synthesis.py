"""Generation workbench back end: recipes, prompt assembly, idea synthesis.

A recipe selects projects (whole, or one aspect of each); the assembled
prompt embeds every selected element verbatim and is retained with the
generated idea, so "what was used to generate this?" always has an exact
answer.
"""

from __future__ import annotations

import datetime as dt
import json
import re
import threading
from dataclasses import dataclass

from .corpus import Corpus, Project
from .errors import InvalidRecipe, MalformedReply, UnknownProject
from .gateway import ChatRequest, Gateway

ASPECTS = ("whole", "community", "problem_statement", "technology")
MAX_RECIPE_ITEMS = 8
GENERATION_TEMPERATURE = 0.9

SYSTEM_PROMPT = (
    "You are a research ideation assistant. Combine the given elements "
    "into one novel, feasible research project."
)
REPLY_INSTRUCTIONS = "Return exactly:\nTITLE: ...\nDESCRIPTION: ..."

ASPECT_KEYWORDS = {
    "community": {"community", "users", "people", "artists", "students", "public"},
    "problem_statement": {"problem", "challenge", "lack", "need", "gap", "difficult"},
    "technology": {"system", "algorithm", "model", "sensor", "platform", "hardware",
                   "software"},
}

_SENTENCE_RE = re.compile(r"[^.?!]+[.?!]?")
_WORD_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class RecipeItem:
    project_id: str
    aspect: str = "whole"

    def __post_init__(self):
        if self.aspect not in ASPECTS:
            raise InvalidRecipe(f"unknown aspect {self.aspect!r}")


@dataclass(frozen=True)
class Recipe:
    items: tuple[RecipeItem, ...]

    def __post_init__(self):
        if not 1 <= len(self.items) <= MAX_RECIPE_ITEMS:
            raise InvalidRecipe(f"recipe needs 1..{MAX_RECIPE_ITEMS} items")
        pairs = [(it.project_id, it.aspect) for it in self.items]
        if len(set(pairs)) != len(pairs):
            raise InvalidRecipe("duplicate (project, aspect) pair in recipe")


@dataclass(frozen=True)
class GeneratedIdea:
    title: str
    description: str
    prompt_used: str
    created_at: str  # ISO-8601 timestamp


def extract_aspect(project: Project, aspect: str) -> str:
    """Pick the aspect's sentences by keyword; whole or no match -> full text."""
    if aspect == "whole":
        return f"{project.title}\n{project.description}"
    keywords = ASPECT_KEYWORDS[aspect]
    chosen = []
    for match in _SENTENCE_RE.finditer(project.description):
        sentence = match.group().strip()
        if sentence and keywords & set(_WORD_RE.findall(sentence.lower())):
            chosen.append(sentence)
    if not chosen:
        return project.description
    return " ".join(chosen)


def assemble_prompt(recipe: Recipe, corpus: Corpus) -> str:
    blocks = []
    for i, item in enumerate(recipe.items, start=1):
        project = corpus.by_id(item.project_id)
        if project is None:
            raise UnknownProject(f"recipe references unknown project {item.project_id!r}")
        text = extract_aspect(project, item.aspect)
        blocks.append(f'[ELEMENT {i} — {item.aspect} of "{project.title}"]\n{text}')
    return "\n\n".join(blocks) + "\n\n" + REPLY_INSTRUCTIONS


def _parse_reply(reply: str) -> tuple[str, str] | None:
    match = re.search(r"TITLE:\s*(.+?)\s*DESCRIPTION:\s*(.+)", reply, re.DOTALL)
    if not match:
        return None
    title = match.group(1).strip()
    description = match.group(2).strip()
    if not title or not description:
        return None
    return title, description


class IdeaLog:
    """Append-only JSON-lines session log; writes are serialized."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()

    def append(self, idea: GeneratedIdea) -> None:
        line = json.dumps({
            "title": idea.title,
            "description": idea.description,
            "prompt_used": idea.prompt_used,
            "created_at": idea.created_at,
        }, ensure_ascii=False)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def generate_idea(recipe: Recipe, corpus: Corpus, gateway: Gateway,
                  log: IdeaLog | None = None) -> GeneratedIdea:
    prompt = assemble_prompt(recipe, corpus)
    req = ChatRequest(system=SYSTEM_PROMPT, user=prompt,
                      temperature=GENERATION_TEMPERATURE)
    parsed = _parse_reply(gateway.complete_chat(req))
    if parsed is None:
        # one automatic reprompt, then fail
        parsed = _parse_reply(gateway.complete_chat(req))
    if parsed is None:
        raise MalformedReply("reply missing TITLE/DESCRIPTION sections twice")
    idea = GeneratedIdea(
        title=parsed[0],
        description=parsed[1],
        prompt_used=prompt,
        created_at=dt.datetime.now(dt.timezone.utc).isoformat(),
    )
    if log is not None:
        log.append(idea)
    return idea
